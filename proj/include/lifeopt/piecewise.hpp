#pragma once

#include <span>
#include <vector>

namespace lifeopt {

/// Deterministic function of time that is constant between breakpoints.
///
/// With breaks b_1 < ... < b_k and values v_0, ..., v_k the function equals
/// v_0 on [0, b_1], v_i on (b_i, b_{i+1}] and v_k beyond b_k. A single value
/// with no breaks is a constant.
class PiecewiseConstant {
public:
    PiecewiseConstant() : values_{0.0} {}
    PiecewiseConstant(double constant) : values_{constant} {}  // NOLINT(implicit)
    PiecewiseConstant(std::vector<double> breaks, std::vector<double> values);

    double operator()(double t) const;

    /// Exact integral over [a, b]; negative when b < a.
    double integral(double a, double b) const;

    /// Smallest t >= from with integral(from, t) >= level, or +inf if the
    /// cumulative integral stays below level on [from, until].
    double inverse_cumulative(double from, double level, double until) const;

    /// Exact integral of e^{-r(s-t)} f(s) over s in [t, u].
    double discounted_integral(double t, double u, double r) const;

    bool is_constant() const { return breaks_.empty(); }
    double min_value() const;

    std::span<const double> breaks() const { return breaks_; }
    std::span<const double> values() const { return values_; }

private:
    std::size_t segment(double t) const;

    std::vector<double> breaks_;
    std::vector<double> values_;
};

}  // namespace lifeopt
