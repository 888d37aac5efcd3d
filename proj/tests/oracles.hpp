#pragma once
// Test-only reference computations that do not share code paths with the library.

#include <cmath>
#include <functional>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "lifeopt/params.hpp"

namespace oracle {

inline double kronrod(const std::function<double(double)>& f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-14);
}

/// Plain composite Simpson with n (even) intervals.
inline double brute_simpson(const std::function<double(double)>& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

/// g1 and g2 from their defining integrals.
inline double g1_integral(double t, const lifeopt::ModelParams& p) {
    const double r = p.r, T = p.horizon;
    return brute_simpson([&](double s) { return std::exp(-r * (s - t)); }, t, T, 200000) + std::exp(-r * (T - t));
}
inline double g2_integral(double t, const lifeopt::ModelParams& p) {
    const double r = p.r, T = p.horizon;
    return brute_simpson([&](double s) { return (s - t) * std::exp(-r * (s - t)); }, t, T, 200000) +
           (T - t) * std::exp(-r * (T - t));
}

/// (A, B) at time t from RK4 on the ODE pair obtained by substituting
/// V = -exp(-A x - B) into the HJB equation, integrated backward from
/// A(T) = alpha, B(T) = ln alpha. Piecewise inputs must be constant.
inline std::pair<double, double> hjb_ode(double t, double theta, const lifeopt::ModelParams& p, int steps) {
    const double a = p.alpha, r = p.r, rho = p.rho;
    const double xi = (p.mu - p.r) / p.sigma;
    const double y = p.income(0.0), lam = p.mortality(0.0);
    auto rhs = [&](double A, double B) {
        const double dA = A * A / a - r * A;
        const double Q = A * ((1.0 - std::log(A)) / a - y + theta * r) - rho - 0.5 * xi * xi +
                         lam * (std::exp(-A * theta * p.delta) - 1.0);
        const double dB = A / a * B + Q;
        return std::pair{dA, dB};
    };
    double A = a, B = std::log(a);
    const double h = -(p.horizon - t) / steps;
    for (int i = 0; i < steps; ++i) {
        auto [k1a, k1b] = rhs(A, B);
        auto [k2a, k2b] = rhs(A + 0.5 * h * k1a, B + 0.5 * h * k1b);
        auto [k3a, k3b] = rhs(A + 0.5 * h * k2a, B + 0.5 * h * k2b);
        auto [k4a, k4b] = rhs(A + h * k3a, B + h * k3b);
        A += h / 6.0 * (k1a + 2 * k2a + 2 * k3a + k4a);
        B += h / 6.0 * (k1b + 2 * k2b + 2 * k3b + k4b);
    }
    return {A, B};
}

}  // namespace oracle
