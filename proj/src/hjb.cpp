#include "lifeopt/hjb.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/tools/roots.hpp>

#include "lifeopt/closedform.hpp"
#include "lifeopt/quadrature.hpp"

namespace lifeopt {

namespace {

double interpolate(const TimeGrid& grid, const std::vector<double>& y, double t) {
    if (t <= grid.t0) return y.front();
    if (t >= grid.t1) return y.back();
    const double pos = (t - grid.t0) / grid.dt();
    const auto i = std::min(grid.n_steps - 1, static_cast<std::size_t>(pos));
    const double w = pos - static_cast<double>(i);
    return (1.0 - w) * y[i] + w * y[i + 1];
}

// Q evaluated with the piecewise inputs frozen at their value on a panel.
double source(double t, double theta, double y, double lambda, const ModelParams& p, double half_xi_sq) {
    const double A = A_of_t(t, p);
    return A * ((1.0 - std::log(A)) / p.alpha - y + theta * p.r) - p.rho - half_xi_sq +
           lambda * std::expm1(-A * theta * p.delta);
}

// integral over [a, b] of e^{-r s} g1(s) Q(s), split at breakpoints of y and lambda
double weighted_source_integral(double a, double b, double theta, const ModelParams& p, double half_xi_sq) {
    std::vector<double> cuts{a};
    for (auto fn : {&p.mortality, &p.income})
        for (double x : fn->breaks())
            if (x > a && x < b) cuts.push_back(x);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double lo = cuts[k], hi = cuts[k + 1];
        if (hi <= lo) continue;
        const double mid = 0.5 * (lo + hi);
        const double y = p.income(mid), lam = p.mortality(mid);
        auto f = [&](double s) { return std::exp(-p.r * s) * g1(s, p) * source(s, theta, y, lam, p, half_xi_sq); };
        total += simpson_panel(f, lo, hi);
    }
    return total;
}

// B g1 = e^{-r(T-t)} ln(alpha) - e^{rt} K(t) with K(t) = integral_t^T e^{-rs} g1 Q ds
double assemble_B(double t, double K, const ModelParams& p) {
    const double T = p.horizon;
    return (std::exp(-p.r * (T - t)) * std::log(p.alpha) - std::exp(p.r * t) * K) / g1(t, p);
}

}  // namespace

double ValueSurface::A_at(double t) const { return interpolate(grid, A, t); }
double ValueSurface::B_at(double t) const { return interpolate(grid, B, t); }

double A_of_t(double t, const ModelParams& params) { return params.alpha / g1(t, params); }

double Q_of_t(double t, double theta, const ModelParams& params) {
    const double xi = derive(params).xi;
    return source(t, theta, params.income(t), params.mortality(t), params, 0.5 * xi * xi);
}

double B_of_t(double t, double theta, const ModelParams& params, std::size_t grid_steps) {
    const double T = params.horizon;
    if (t >= T) return std::log(params.alpha);
    const double xi = derive(params).xi;
    const auto n = std::max<std::size_t>(1, grid_steps);
    const double h = (T - t) / static_cast<double>(n);
    double K = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = t + h * static_cast<double>(i);
        const double b = (i + 1 == n) ? T : a + h;
        K += weighted_source_integral(a, b, theta, params, 0.5 * xi * xi);
    }
    return assemble_B(t, K, params);
}

ValueSurface solve_hjb(const ModelParams& params, double theta, std::size_t grid_steps) {
    ValueSurface s;
    s.theta = theta;
    s.grid = TimeGrid(0.0, params.horizon, std::max<std::size_t>(1, grid_steps));
    const std::size_t n = s.grid.n_steps;
    s.A.resize(n + 1);
    s.B.resize(n + 1);
    const double xi = derive(params).xi;

    double K = 0.0;
    s.A[n] = params.alpha;
    s.B[n] = std::log(params.alpha);
    for (std::size_t i = n; i-- > 0;) {
        const double a = s.grid.time(i), b = s.grid.time(i + 1);
        K += weighted_source_integral(a, b, theta, params, 0.5 * xi * xi);
        s.A[i] = A_of_t(a, params);
        s.B[i] = assemble_B(a, K, params);
    }
    return s;
}

double value(double t, double x, const ValueSurface& surface) {
    return -std::exp(-surface.A_at(t) * x - surface.B_at(t));
}

FeedbackControls::FeedbackControls(ValueSurface surface, const ModelParams& params)
    : surface_(std::move(surface)),
      alpha_(params.alpha),
      excess_over_var_((params.mu - params.r) / (params.sigma * params.sigma)) {}

double FeedbackControls::c_of(double t, double x) const {
    const double A = surface_.A_at(t);
    return (A * x + surface_.B_at(t) - std::log(A)) / alpha_;
}

double FeedbackControls::w_of(double t) const { return excess_over_var_ / surface_.A_at(t); }

FeedbackControls feedback_controls(const ValueSurface& surface, const ModelParams& params) {
    return FeedbackControls(surface, params);
}

double indifference_price(double t, double theta, const ModelParams& params, std::size_t grid_steps) {
    if (theta == 0.0) return 0.0;
    return (B_of_t(t, theta, params, grid_steps) - B_of_t(t, 0.0, params, grid_steps)) / A_of_t(t, params);
}

double indifference_by_bisection(double t, double x, const ValueSurface& base, const ValueSurface& insured) {
    const double target = value(t, x, base);
    // decreasing in h since V is increasing in wealth
    auto gap = [&](double h) { return value(t, x - h, insured) - target; };
    double lo = -1.0, hi = 1.0;
    for (int k = 0; k < 200 && gap(lo) < 0.0; ++k) lo *= 2.0;
    for (int k = 0; k < 200 && gap(hi) > 0.0; ++k) hi *= 2.0;
    if (gap(lo) < 0.0 || gap(hi) > 0.0) throw std::runtime_error("indifference price not bracketed");
    const auto [a, b] = boost::math::tools::bisect(gap, lo, hi, boost::math::tools::eps_tolerance<double>(52));
    return 0.5 * (a + b);
}

}  // namespace lifeopt
