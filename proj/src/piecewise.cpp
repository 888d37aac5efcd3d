#include "lifeopt/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lifeopt {

namespace {

// ∫_t^u e^{-r(s-t)} ds, stable for r -> 0
double discount_weight(double t, double a, double b, double r) {
    if (r == 0.0) return b - a;
    // e^{-r(a-t)} (1 - e^{-r(b-a)}) / r
    return std::exp(-r * (a - t)) * (-std::expm1(-r * (b - a))) / r;
}

}  // namespace

PiecewiseConstant::PiecewiseConstant(std::vector<double> breaks, std::vector<double> values)
    : breaks_(std::move(breaks)), values_(std::move(values)) {
    if (values_.size() != breaks_.size() + 1)
        throw std::invalid_argument("piecewise function needs exactly one more value than breaks");
    for (std::size_t i = 0; i < breaks_.size(); ++i) {
        if (!(breaks_[i] > 0.0)) throw std::invalid_argument("piecewise breaks must be positive");
        if (i > 0 && !(breaks_[i] > breaks_[i - 1]))
            throw std::invalid_argument("piecewise breaks must be strictly increasing");
    }
}

std::size_t PiecewiseConstant::segment(double t) const {
    // first break >= t: segment i covers (b_i, b_{i+1}]
    return static_cast<std::size_t>(std::lower_bound(breaks_.begin(), breaks_.end(), t) - breaks_.begin());
}

double PiecewiseConstant::operator()(double t) const { return values_[segment(t)]; }

double PiecewiseConstant::integral(double a, double b) const {
    if (b < a) return -integral(b, a);
    double total = 0.0;
    double lo = a;
    for (std::size_t i = segment(a); lo < b; ++i) {
        const double hi = i < breaks_.size() ? std::min(breaks_[i], b) : b;
        total += values_[i] * (hi - lo);
        lo = hi;
    }
    return total;
}

double PiecewiseConstant::inverse_cumulative(double from, double level, double until) const {
    double acc = 0.0;
    double lo = from;
    for (std::size_t i = segment(from); lo < until; ++i) {
        const double hi = i < breaks_.size() ? std::min(breaks_[i], until) : until;
        const double mass = values_[i] * (hi - lo);
        if (values_[i] > 0.0 && acc + mass >= level) return lo + (level - acc) / values_[i];
        acc += mass;
        lo = hi;
    }
    return std::numeric_limits<double>::infinity();
}

double PiecewiseConstant::discounted_integral(double t, double u, double r) const {
    double total = 0.0;
    double lo = t;
    for (std::size_t i = segment(t); lo < u; ++i) {
        const double hi = i < breaks_.size() ? std::min(breaks_[i], u) : u;
        total += values_[i] * discount_weight(t, lo, hi, r);
        lo = hi;
    }
    return total;
}

double PiecewiseConstant::min_value() const { return *std::min_element(values_.begin(), values_.end()); }

}  // namespace lifeopt
