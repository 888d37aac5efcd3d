#include <cmath>
#include <stdexcept>

#include "lifeopt/closedform.hpp"
#include "lifeopt/montecarlo.hpp"
#include "lifeopt/quadrature.hpp"

namespace lifeopt {

BudgetReport budget_identity_check(const ClosedFormSolution& solution, const ModelParams& params,
                                   const SimConfig& config) {
    if (config.measure != Measure::pricing_vstar)
        throw std::invalid_argument("budget identity must be simulated under the pricing-v-star measure");
    SimConfig cfg = config;
    cfg.record_paths = true;

    const double xi = derive(params).xi;
    const double dt = cfg.grid.dt();
    const std::size_t n = cfg.grid.n_steps;
    const double T = params.horizon;
    // v* = r everywhere, so the income adjustment is r theta* over the whole horizon
    const double premium = solution.theta_hat == 0.0
                               ? 0.0
                               : params.r * solution.theta_hat * (params.r == 0.0 ? T : -std::expm1(-params.r * T) / params.r);
    const double endowment = params.initial_wealth + income_value(0.0, params) - premium;

    std::vector<double> excess(cfg.n_paths);
    std::vector<double> negative(cfg.n_paths);
    const AffinePolicy idle = constant_policy(cfg.grid, 0.0, 0.0, 0.0);
    simulate_paths(cfg, params, idle, [&](const PathBundle& b) {
        const std::vector<double> phiZ = phi_Z(b.dZ, xi, dt);
        std::vector<double> discounted(n + 1);
        std::size_t neg = 0;
        double c_T = 0.0;
        for (std::size_t i = 0; i <= n; ++i) {
            const double t = cfg.grid.time(i);
            const double c = optimal_consumption(t, vstar_density(t, phiZ[i], true, params), solution.zeta_star, params);
            if (c < 0.0) ++neg;
            discounted[i] = std::exp(-params.r * t) * c;
            c_T = c;
        }
        // terminal wealth uses the same inverse marginal utility as consumption
        excess[b.index] = simpson_samples(discounted, dt) + std::exp(-params.r * T) * c_T - endowment;
        negative[b.index] = static_cast<double>(neg);
    });

    const EstimatorResult r = summarize(excess, cfg.seed);
    BudgetReport report;
    report.estimate = r.mean;
    report.std_error = r.std_error;
    report.n_paths = r.n_paths;
    report.seed = cfg.seed;
    report.premium_term = premium;
    double neg = 0.0;
    for (double k : negative) neg += k;
    report.negative_consumption_fraction = neg / (static_cast<double>(cfg.n_paths) * static_cast<double>(n + 1));
    report.pass = r.std_error > 0.0 ? std::abs(r.mean) < 3.0 * r.std_error : std::abs(r.mean) < 1e-8;
    return report;
}

}  // namespace lifeopt
