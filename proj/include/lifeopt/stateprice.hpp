#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "lifeopt/params.hpp"
#include "lifeopt/piecewise.hpp"

namespace lifeopt {

/// Death time; tau = +inf means survival past the horizon.
struct MortalityDraw {
    double tau = std::numeric_limits<double>::infinity();
    bool survived = true;
};

/// Components of the state price density phi = beta * phiZ * phiN at one time.
struct DensityFactors {
    double beta_t = 1.0;
    double phiZ_t = 1.0;
    double phiN_t = 1.0;
    double phi_t = 1.0;
};

/// exp(-integral of lambda over [0, t]).
double survival_probability(double t, const PiecewiseConstant& lambda);

/// Inverse-transform death time for a uniform draw in (0, 1). Hazard beyond
/// the horizon is ignored: tau = inf when the draw is not reached by T.
MortalityDraw sample_tau(const PiecewiseConstant& lambda, double uniform_draw, double horizon);

/// Next arrival after `from` of a Poisson process with intensity lambda, or
/// +inf when it falls after `horizon`.
double next_arrival(const PiecewiseConstant& lambda, double from, double uniform_draw, double horizon);

/// Stochastic exponential exp(-xi Z(t) - xi^2 t / 2) along a path of Brownian
/// increments, one exact factor per step. Returns n + 1 values starting at 1.
std::vector<double> phi_Z(std::span<const double> dZ, double xi, double dt);

/// Jump part of the density for pricing intensity psi:
///   (psi(tau)/lambda(tau) 1{tau <= t} + 1{tau > t}) exp(integral of lambda - psi to t ^ tau).
/// Throws std::domain_error if tau <= t and lambda(tau) == 0.
double phi_N(double t, const MortalityDraw& tau, const PiecewiseConstant& psi, const PiecewiseConstant& lambda);

/// 1{tau <= t} - integral of lambda over [0, t ^ tau].
double compensated_mortality(double t, const MortalityDraw& tau, const PiecewiseConstant& lambda);

/// beta(t) = exp(-r t) for a constant riskless rate.
inline DensityFactors density_factors(double t, double r, double phiZ_t, double phiN_t) {
    DensityFactors f;
    f.beta_t = std::exp(-r * t);
    f.phiZ_t = phiZ_t;
    f.phiN_t = phiN_t;
    f.phi_t = f.beta_t * f.phiZ_t * f.phiN_t;
    return f;
}

/// Pricing intensity r/delta wherever lambda > 0 and zero where lambda vanishes,
/// so the induced measure stays equivalent to the physical one.
PiecewiseConstant pricing_intensity(const ModelParams& params);

}  // namespace lifeopt
