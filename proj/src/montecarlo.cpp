#include "lifeopt/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

#include <boost/random/normal_distribution.hpp>

#include "lifeopt/quadrature.hpp"

namespace lifeopt {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Generator for path i: std::mt19937_64 seeded with splitmix64(seed ^ splitmix64(i)).
std::mt19937_64 path_engine(std::uint64_t seed, std::size_t index) {
    return std::mt19937_64(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(index))));
}

// Uniform strictly inside (0, 1) from the top 53 bits.
double open_uniform(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

unsigned resolve_workers(unsigned requested, std::size_t n_paths) {
    unsigned w = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(w, std::max<std::size_t>(1, n_paths)));
}

struct StepTables {
    std::vector<double> time;
    std::vector<double> discount;  // e^{-rho t_i}
    std::vector<double> income;    // y(t_i)
};

StepTables make_tables(const TimeGrid& grid, const ModelParams& p) {
    StepTables tab;
    for (std::size_t i = 0; i <= grid.n_steps; ++i) {
        const double t = grid.time(i);
        tab.time.push_back(t);
        tab.discount.push_back(std::exp(-p.rho * t));
        tab.income.push_back(p.income(t));
    }
    return tab;
}

void simulate_one(std::size_t index, const SimConfig& cfg, const ModelParams& p, const AffinePolicy& policy,
                  const StepTables& tab, double xi, PathBundle& out) {
    auto rng = path_engine(cfg.seed, index);
    boost::random::normal_distribution<double> normal(0.0, 1.0);

    const std::size_t n = cfg.grid.n_steps;
    const double dt = cfg.grid.dt();
    const double sqdt = std::sqrt(dt);
    const double T = p.horizon;
    const bool pricing = cfg.measure == Measure::pricing_vstar;
    const bool generator = cfg.dynamics == Dynamics::hjb_generator;
    const double mu = p.mu + cfg.mu_shift;
    const double theta = policy.theta;
    const double payout = theta * p.delta;

    out.index = index;
    out.jump_times.clear();
    // mortality is suppressed under the pricing measure of the optimal dual
    const double u = open_uniform(rng);
    if (pricing) {
        out.tau = MortalityDraw{};
    } else {
        out.tau = sample_tau(p.mortality, u, T);
        if (generator) {
            double s = out.tau.tau;
            while (s <= T) {
                out.jump_times.push_back(s);
                s = next_arrival(p.mortality, s, open_uniform(rng), T);
            }
        }
    }

    const bool record = cfg.record_paths;
    if (record) {
        out.dZ.resize(n);
        out.S1.resize(n + 1);
        out.W.resize(n + 1);
        out.c.resize(n + 1);
        out.S1[0] = cfg.s1_initial;
        out.W[0] = p.initial_wealth;
    }

    const double s1_drift = (mu - 0.5 * p.sigma * p.sigma) * dt;
    const double z_shift = pricing ? -xi * dt : 0.0;
    const double inv_alpha = 1.0 / p.alpha;
    double W = p.initial_wealth;
    double S1 = cfg.s1_initial;
    double utility = 0.0;
    std::size_t negative = 0;
    std::size_t next_jump = 0;

    for (std::size_t i = 0; i < n; ++i) {
        const double t = tab.time[i];
        const double t_next = tab.time[i + 1];
        const double gate = (generator || out.tau.tau > t) ? 1.0 : 0.0;
        const double c = policy.c_slope[i] * W + policy.c_intercept[i];
        const double w = policy.w[i];
        if (c < 0.0) ++negative;
        utility -= tab.discount[i] * inv_alpha * std::exp(-p.alpha * c) * dt;

        const double dZ = sqdt * normal(rng) + z_shift;

        std::size_t jumps = 0;
        if (generator) {
            while (next_jump < out.jump_times.size() && out.jump_times[next_jump] <= t_next) {
                ++jumps;
                ++next_jump;
            }
        } else if (out.tau.tau > t && out.tau.tau <= t_next) {
            jumps = 1;
        }

        W += (p.r * W + tab.income[i] * gate - c + w * (mu - p.r) - theta * p.r * gate) * dt + w * p.sigma * dZ +
             payout * static_cast<double>(jumps);
        if (record) {
            S1 *= std::exp(s1_drift + p.sigma * dZ);
            out.dZ[i] = dZ;
            out.c[i] = c;
            out.S1[i + 1] = S1;
            out.W[i + 1] = W;
        }
    }
    if (record) out.c[n] = policy.c_slope[n] * W + policy.c_intercept[n];
    out.terminal_wealth = W;
    out.running_utility = utility;
    out.negative_consumption_steps = negative;
}

}  // namespace

std::string to_string(Measure m) { return m == Measure::physical ? "physical" : "pricing-v-star"; }
std::string to_string(Dynamics d) { return d == Dynamics::paper_eq_2_4 ? "paper-eq-2.4" : "hjb-generator"; }

Measure parse_measure(const std::string& s) {
    if (s == "physical") return Measure::physical;
    if (s == "pricing-v-star") return Measure::pricing_vstar;
    throw std::invalid_argument("unknown measure '" + s + "'");
}

Dynamics parse_dynamics(const std::string& s) {
    if (s == "paper-eq-2.4") return Dynamics::paper_eq_2_4;
    if (s == "hjb-generator") return Dynamics::hjb_generator;
    throw std::invalid_argument("unknown dynamics '" + s + "'");
}

AffinePolicy tabulate(const FeedbackControls& controls, const TimeGrid& grid) {
    AffinePolicy p;
    p.theta = controls.theta();
    for (std::size_t i = 0; i <= grid.n_steps; ++i) {
        const double t = grid.time(i);
        // c_of is affine in x: slope A/alpha
        const double intercept = controls.c_of(t, 0.0);
        p.c_intercept.push_back(intercept);
        p.c_slope.push_back(controls.c_of(t, 1.0) - intercept);
        p.w.push_back(controls.w_of(t));
    }
    return p;
}

AffinePolicy constant_policy(const TimeGrid& grid, double consumption, double holding, double theta) {
    AffinePolicy p;
    p.theta = theta;
    p.c_slope.assign(grid.size(), 0.0);
    p.c_intercept.assign(grid.size(), consumption);
    p.w.assign(grid.size(), holding);
    return p;
}

void simulate_paths(const SimConfig& config, const ModelParams& params, const AffinePolicy& policy,
                    const PathVisitor& visit) {
    if (config.n_paths < 1) throw std::invalid_argument("n_paths must be at least 1");
    if (std::abs(config.grid.t0) > 0.0 || std::abs(config.grid.t1 - params.horizon) > 1e-12)
        throw std::invalid_argument("simulation grid must span [0, T]");
    if (policy.c_slope.size() != config.grid.size() || policy.c_intercept.size() != config.grid.size() ||
        policy.w.size() != config.grid.size())
        throw std::invalid_argument("policy must be tabulated on the simulation grid");

    const StepTables tab = make_tables(config.grid, params);
    const double xi = derive(params).xi;
    const unsigned workers = resolve_workers(config.workers, config.n_paths);

    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&](std::size_t begin, std::size_t end) {
        try {
            PathBundle bundle;
            for (std::size_t i = begin; i < end; ++i) {
                simulate_one(i, config, params, policy, tab, xi, bundle);
                visit(bundle);
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    };

    if (workers == 1) {
        run(0, config.n_paths);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (config.n_paths + workers - 1) / workers;
        for (unsigned k = 0; k < workers; ++k) {
            const std::size_t begin = std::min(config.n_paths, chunk * k);
            const std::size_t end = std::min(config.n_paths, begin + chunk);
            if (begin < end) pool.emplace_back(run, begin, end);
        }
    }
    if (failure) std::rethrow_exception(failure);
}

void simulate_paths(const SimConfig& config, const ModelParams& params, const FeedbackControls& controls,
                    const PathVisitor& visit) {
    simulate_paths(config, params, tabulate(controls, config.grid), visit);
}

EstimatorResult summarize(std::span<const double> samples, std::uint64_t seed) {
    EstimatorResult r;
    r.n_paths = samples.size();
    r.seed = seed;
    if (samples.empty()) return r;
    const double n = static_cast<double>(samples.size());
    r.mean = pairwise_sum(samples) / n;
    if (samples.size() > 1) {
        std::vector<double> sq(samples.size());
        std::transform(samples.begin(), samples.end(), sq.begin(),
                       [m = r.mean](double x) { return (x - m) * (x - m); });
        r.std_error = std::sqrt(pairwise_sum(sq) / (n - 1.0) / n);
    }
    return r;
}

double path_utility(const PathBundle& path, const ModelParams& params) {
    return path.running_utility -
           std::exp(-params.rho * params.horizon) / params.alpha * std::exp(-params.alpha * path.terminal_wealth);
}

UtilityEstimate estimate_utility(const SimConfig& config, const ModelParams& params, const AffinePolicy& policy) {
    SimConfig cfg = config;
    cfg.record_paths = false;
    std::vector<double> utility(cfg.n_paths);
    std::vector<std::size_t> negative(cfg.n_paths);
    simulate_paths(cfg, params, policy, [&](const PathBundle& b) {
        utility[b.index] = path_utility(b, params);
        negative[b.index] = b.negative_consumption_steps;
    });
    UtilityEstimate out;
    out.result = summarize(utility, cfg.seed);
    double neg = 0.0;
    for (auto k : negative) neg += static_cast<double>(k);
    out.negative_consumption_fraction =
        neg / (static_cast<double>(cfg.n_paths) * static_cast<double>(cfg.grid.n_steps));
    return out;
}

UtilityEstimate estimate_utility(const SimConfig& config, const ModelParams& params,
                                 const FeedbackControls& controls) {
    return estimate_utility(config, params, tabulate(controls, config.grid));
}

bool within_three_se(double mean, double std_error) {
    if (std_error > 0.0) return std::abs(mean) < 3.0 * std_error;
    return mean == 0.0;
}

bool MartingaleReport::pass() const {
    return std::all_of(rows.begin(), rows.end(),
                       [](const MartingaleRow& r) { return r.pass_asset && r.pass_density && r.pass_compensated; });
}

MartingaleReport martingale_check(std::span<const double> t_list, const SimConfig& config,
                                  const ModelParams& params) {
    if (config.measure != Measure::physical) throw std::invalid_argument("martingale check needs the physical measure");
    SimConfig cfg = config;
    cfg.record_paths = true;

    std::vector<std::size_t> nodes;
    for (double t : t_list) {
        const std::size_t k = cfg.grid.nearest(t);
        if (std::abs(cfg.grid.time(k) - t) > 1e-9 * std::max(1.0, params.horizon))
            throw std::invalid_argument("martingale time " + std::to_string(t) + " is not a grid node");
        nodes.push_back(k);
    }

    const double xi = derive(params).xi;
    const PiecewiseConstant psi = pricing_intensity(params);
    const std::size_t m = nodes.size();
    const std::size_t n_paths = cfg.n_paths;
    std::vector<double> asset(m * n_paths), density(m * n_paths), comp(m * n_paths);

    const AffinePolicy idle = constant_policy(cfg.grid, 0.0, 0.0, 0.0);
    simulate_paths(cfg, params, idle, [&](const PathBundle& b) {
        const std::vector<double> phiZ = phi_Z(b.dZ, xi, cfg.grid.dt());
        for (std::size_t j = 0; j < m; ++j) {
            const std::size_t k = nodes[j];
            const double t = cfg.grid.time(k);
            const DensityFactors f = density_factors(t, params.r, phiZ[k], phi_N(t, b.tau, psi, params.mortality));
            asset[j * n_paths + b.index] = f.phi_t * b.S1[k] - b.S1[0];
            density[j * n_paths + b.index] = f.phiZ_t * f.phiN_t - 1.0;
            comp[j * n_paths + b.index] = compensated_mortality(t, b.tau, params.mortality);
        }
    });

    MartingaleReport report;
    for (std::size_t j = 0; j < m; ++j) {
        MartingaleRow row;
        row.t = cfg.grid.time(nodes[j]);
        auto slice = [&](const std::vector<double>& v) {
            return std::span<const double>(v).subspan(j * n_paths, n_paths);
        };
        row.discounted_asset = summarize(slice(asset), cfg.seed);
        row.density = summarize(slice(density), cfg.seed);
        row.compensated = summarize(slice(comp), cfg.seed);
        row.pass_asset = within_three_se(row.discounted_asset.mean, row.discounted_asset.std_error);
        row.pass_density = within_three_se(row.density.mean, row.density.std_error);
        row.pass_compensated = within_three_se(row.compensated.mean, row.compensated.std_error);
        row.trivial_compensated = params.mortality.integral(0.0, row.t) == 0.0;
        report.rows.push_back(row);
    }
    return report;
}

BudgetReport budget_check(const ClosedFormSolution& solution, const SimConfig& config, const ModelParams& params) {
    return budget_identity_check(solution, params, config);
}

}  // namespace lifeopt
