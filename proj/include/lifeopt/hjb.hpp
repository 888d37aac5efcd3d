#pragma once

#include <vector>

#include "lifeopt/params.hpp"

namespace lifeopt {

/// Coefficients of V(t, x) = -exp(-A(t) x - B(t)) on a uniform grid over [0, T].
/// Between nodes both A and B are interpolated linearly.
struct ValueSurface {
    double theta = 0.0;
    TimeGrid grid;
    std::vector<double> A;
    std::vector<double> B;

    double A_at(double t) const;
    double B_at(double t) const;
};

/// A(t) = alpha / g1(t); the r = 0 limit is alpha / (T - t + 1).
double A_of_t(double t, const ModelParams& params);

/// Source term Q^theta(t) of the linear equation B' = (A/alpha) B + Q.
double Q_of_t(double t, double theta, const ModelParams& params);

/// B^theta(t) with grid_steps Simpson panels over [t, T].
double B_of_t(double t, double theta, const ModelParams& params, std::size_t grid_steps = 10000);

/// Tabulates A and B^theta on a uniform grid over [0, T].
ValueSurface solve_hjb(const ModelParams& params, double theta, std::size_t grid_steps = 10000);

/// V(t, x) = -exp(-A(t) x - B(t)).
double value(double t, double x, const ValueSurface& surface);

class FeedbackControls {
public:
    FeedbackControls(ValueSurface surface, const ModelParams& params);

    /// Consumption solving u1'(c) = V_x: (A x + B - ln A) / alpha.
    double c_of(double t, double x) const;
    /// Risky holding -(mu - r) V_x / (sigma^2 V_xx) = (mu - r) / (sigma^2 A).
    double w_of(double t) const;
    double theta() const { return surface_.theta; }
    const ValueSurface& surface() const { return surface_; }

private:
    ValueSurface surface_;
    double alpha_;
    double excess_over_var_;
};

FeedbackControls feedback_controls(const ValueSurface& surface, const ModelParams& params);

/// Buyer's indifference price h with V^0(t, x) = V^theta(t, x - h):
/// h = (B^theta(t) - B^0(t)) / A(t), independent of x.
double indifference_price(double t, double theta, const ModelParams& params, std::size_t grid_steps = 10000);

/// Root of V_base(t, x) = V_insured(t, x - h) found by bisection on h.
double indifference_by_bisection(double t, double x, const ValueSurface& base, const ValueSurface& insured);

}  // namespace lifeopt
