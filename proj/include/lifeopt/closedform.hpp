#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "lifeopt/params.hpp"
#include "lifeopt/piecewise.hpp"

namespace lifeopt {

struct SimConfig;

/// Raised when a solver cannot certify its output.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// g1(t) = integral_t^T e^{-r(s-t)} ds + e^{-r(T-t)}.
double g1(double t, const ModelParams& params);
/// g2(t) = integral_t^T (s-t) e^{-r(s-t)} ds + (T-t) e^{-r(T-t)}.
double g2(double t, const ModelParams& params);

/// Present value at t of the income stream over [t, T].
double income_value(double t, const ModelParams& params);

/// Optimal multiplier for a fixed premium amount theta.
double zeta_of_theta(double theta, const ModelParams& params);

/// Dual objective J(zeta, v) with v encoded by its pricing intensity psi_v.
struct DualObjectiveInputs {
    PiecewiseConstant psi_v;
    double theta = 0.0;
    double zeta = 1.0;
};

/// Evaluates J by quadrature on n_intervals panels aligned to every breakpoint.
/// The log-penalty integrand is taken as 0 where psi_v = 0.
/// Throws std::domain_error where psi_v > 0 but lambda = 0.
double dual_objective(const DualObjectiveInputs& inputs, const ModelParams& params,
                      std::size_t n_intervals = 10000);

struct ClosedFormSolution {
    double zeta_star = 1.0;
    double theta_hat = 0.0;
    double value = 0.0;  ///< J at the optimum
    double r = 0.0;
    double horizon = 0.0;

    double g1_at(double t) const;
    double g2_at(double t) const;
};

struct SolveOptions {
    double theta_max = 2.0;
    std::size_t theta_points = 21;  ///< grid on [0, theta_max] for the optimality check
};

/// theta_hat = 0 and zeta* = zeta(0). Throws SolverError if J(zeta(theta))
/// increases anywhere on the theta grid.
ClosedFormSolution solve(const ModelParams& params, const SolveOptions& options = {});

/// J(zeta(theta), v*) = -(zeta(theta)/alpha) g1(0).
double value_at_theta(double theta, const ModelParams& params);

/// c(t) = -(ln(zeta* phi_v*(t)) + rho t) / alpha. Only defined before death:
/// throws std::domain_error when phi_vstar_t <= 0.
double optimal_consumption(double t, double phi_vstar_t, double zeta_star, const ModelParams& params);

/// W(t) = c(t) g1(t) - gamma g2(t)/alpha - PV_t(income).
double wealth_identity(double t, double c_hat_t, const ModelParams& params);

/// Risky holding (mu - r) g1(t) / (sigma^2 alpha).
double optimal_portfolio(double t, const ModelParams& params);

/// Density of the optimal dual measure at t given the Brownian factor.
///
/// Under psi_v* = 0 the jump factor is zero after death. Before death it is
/// normalised to one, the same limit under which the dual objective's
/// log-penalty vanishes; the closed-form multiplier and wealth identity are
/// consistent with this normalisation only.
double vstar_density(double t, double phiZ_t, bool alive, const ModelParams& params);

struct BudgetReport {
    double estimate = 0.0;   ///< E[int beta c dt + beta(T) W(T)] - (W0 + PV(income))
    double std_error = 0.0;
    std::size_t n_paths = 0;
    std::uint64_t seed = 0;
    double premium_term = 0.0;  ///< v* theta* adjustment, zero at theta* = 0
    double negative_consumption_fraction = 0.0;
    bool pass = false;
};

/// Monte Carlo check that the optimal plan exhausts the budget under the
/// pricing measure. config.measure must be pricing-v-star.
BudgetReport budget_identity_check(const ClosedFormSolution& solution, const ModelParams& params,
                                   const SimConfig& config);

}  // namespace lifeopt
