#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "lifeopt/piecewise.hpp"

namespace lifeopt {

/// Raised by validate(); the message names the offending field.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Market, mortality, insurance and preference inputs. Rates are per year,
/// the horizon is in years, wealth and income share one currency unit.
struct ModelParams {
    double r = 0.0;       ///< riskless rate
    double mu = 0.0;      ///< risky drift
    double sigma = 0.0;   ///< risky volatility
    double rho = 0.0;     ///< subjective discount rate
    double alpha = 0.0;   ///< absolute risk aversion
    double delta = 0.0;   ///< insurance payout multiplier
    double horizon = 0.0; ///< T
    double initial_wealth = 0.0;
    PiecewiseConstant mortality;  ///< hazard rate lambda(t)
    PiecewiseConstant income;     ///< income rate y(t)
};

struct DerivedConstants {
    double xi = 0.0;     ///< market price of risk (mu - r) / sigma
    double psi = 0.0;    ///< pricing-measure mortality intensity r / delta
    double gamma = 0.0;  ///< rho - r + xi^2 / 2
};

/// Uniform grid t0 < t1 with n_steps intervals.
struct TimeGrid {
    double t0 = 0.0;
    double t1 = 1.0;
    std::size_t n_steps = 1;

    TimeGrid() = default;
    TimeGrid(double start, double end, std::size_t steps);

    /// Grid on [0, horizon] with the step closest to dt that divides it evenly.
    static TimeGrid with_step(double horizon, double dt);

    double dt() const { return (t1 - t0) / static_cast<double>(n_steps); }
    double time(std::size_t i) const {
        return i == n_steps ? t1 : t0 + dt() * static_cast<double>(i);
    }
    std::size_t size() const { return n_steps + 1; }
    /// Index of the node nearest to t.
    std::size_t nearest(double t) const;
};

ModelParams validate(ModelParams raw);
DerivedConstants derive(const ModelParams& params);

/// Reference calibration (alpha, y, lambda, delta, rho, r, mu, sigma, T) =
/// (0.5, 10, 0.01, 100, 0.2, 0.2, 0.3, 0.25, 10) with the given initial wealth.
ModelParams baseline_params(double initial_wealth = 1.0);

}  // namespace lifeopt
