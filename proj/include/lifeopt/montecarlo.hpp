#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "lifeopt/closedform.hpp"
#include "lifeopt/hjb.hpp"
#include "lifeopt/params.hpp"
#include "lifeopt/stateprice.hpp"

namespace lifeopt {

enum class Measure { physical, pricing_vstar };

/// paper_eq_2_4: income and premium stop at death, one payout at death.
/// hjb_generator: income and premium never stop and every arrival of a
/// Poisson process with intensity lambda pays theta * delta.
enum class Dynamics { paper_eq_2_4, hjb_generator };

std::string to_string(Measure m);
std::string to_string(Dynamics d);
Measure parse_measure(const std::string& s);
Dynamics parse_dynamics(const std::string& s);

struct SimConfig {
    std::size_t n_paths = 1;
    TimeGrid grid;
    std::uint64_t seed = 0;
    Measure measure = Measure::physical;
    Dynamics dynamics = Dynamics::paper_eq_2_4;
    unsigned workers = 0;        ///< 0 = hardware concurrency
    bool record_paths = true;    ///< fill per-step trajectories in PathBundle
    double mu_shift = 0.0;       ///< added to mu inside the simulation only (fault injection)
    double s1_initial = 1.0;
};

/// Affine feedback rule tabulated on the simulation grid:
/// c_i(x) = c_slope[i] x + c_intercept[i], w_i = w[i].
struct AffinePolicy {
    std::vector<double> c_slope;
    std::vector<double> c_intercept;
    std::vector<double> w;
    double theta = 0.0;
};

AffinePolicy tabulate(const FeedbackControls& controls, const TimeGrid& grid);
AffinePolicy constant_policy(const TimeGrid& grid, double consumption, double holding, double theta);

struct PathBundle {
    std::size_t index = 0;
    std::vector<double> dZ;          ///< sqrt(dt)-scaled increments of the physical Brownian motion
    MortalityDraw tau;
    std::vector<double> jump_times;  ///< Poisson arrivals in [0, T] (hjb_generator only)
    std::vector<double> S1;
    std::vector<double> W;
    std::vector<double> c;
    double terminal_wealth = 0.0;
    double running_utility = 0.0;    ///< left-endpoint sum of e^{-rho t} u1(c) dt
    std::size_t negative_consumption_steps = 0;
};

/// Called once per path, possibly from several threads at once. The bundle is
/// reused by the caller after the visitor returns.
using PathVisitor = std::function<void(const PathBundle&)>;

/// Simulates config.n_paths paths. Path i draws from its own generator keyed by
/// (seed, i) so results do not depend on the worker count.
void simulate_paths(const SimConfig& config, const ModelParams& params, const AffinePolicy& policy,
                    const PathVisitor& visit);
void simulate_paths(const SimConfig& config, const ModelParams& params, const FeedbackControls& controls,
                    const PathVisitor& visit);

struct EstimatorResult {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 0;
    std::uint64_t seed = 0;
};

/// Sample mean and standard error, summed pairwise in index order.
EstimatorResult summarize(std::span<const double> samples, std::uint64_t seed);

/// Realised utility of one path: running utility + e^{-rho T} u2(W(T)).
double path_utility(const PathBundle& path, const ModelParams& params);

struct UtilityEstimate {
    EstimatorResult result;
    double negative_consumption_fraction = 0.0;
};

UtilityEstimate estimate_utility(const SimConfig& config, const ModelParams& params, const AffinePolicy& policy);
UtilityEstimate estimate_utility(const SimConfig& config, const ModelParams& params,
                                 const FeedbackControls& controls);

/// |mean| < 3 SE, or an exact zero when the sample has no spread.
bool within_three_se(double mean, double std_error);

struct MartingaleRow {
    double t = 0.0;
    EstimatorResult discounted_asset;  ///< phi(t) S1(t) - S1(0)
    EstimatorResult density;           ///< phi(t) / beta(t) - 1
    EstimatorResult compensated;       ///< M_lambda(t)
    bool pass_asset = false;
    bool pass_density = false;
    bool pass_compensated = false;
    bool trivial_compensated = false;  ///< no hazard: M_lambda is identically zero
};

struct MartingaleReport {
    std::vector<MartingaleRow> rows;
    bool pass() const;
};

/// Physical-measure martingale checks at the grid nodes nearest to t_list.
MartingaleReport martingale_check(std::span<const double> t_list, const SimConfig& config,
                                  const ModelParams& params);

/// Budget identity check; wraps budget_identity_check.
BudgetReport budget_check(const ClosedFormSolution& solution, const SimConfig& config, const ModelParams& params);

}  // namespace lifeopt
