#include "lifeopt/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "lifeopt/closedform.hpp"
#include "lifeopt/hjb.hpp"
#include "lifeopt/montecarlo.hpp"
#include "lifeopt/report.hpp"

namespace lifeopt {

namespace fs = std::filesystem;

namespace {

bool verbose() {
    const char* v = std::getenv("LIFEOPT_VERBOSE");
    return v != nullptr && *v != '\0' && std::string(v) != "0";
}

fs::path prepare_output(const RunConfig& cfg) {
    fs::path dir(cfg.output_dir);
    fs::create_directories(dir);
    return dir;
}

std::string label(const std::string& prefix, double v) { return prefix + format_number(v); }

std::string verdict(bool ok) { return ok ? "PASS" : "FAIL"; }

std::vector<double> x_grid(const SweepSettings& s) {
    std::vector<double> xs;
    for (std::size_t i = 0; i < s.x_points; ++i)
        xs.push_back(s.x_min + (s.x_max - s.x_min) * static_cast<double>(i) / static_cast<double>(s.x_points - 1));
    return xs;
}

void write_provenance(std::ostream& out, const RunConfig& cfg) {
    out << "config: " << cfg.source << '\n';
    out << "seed: " << cfg.mc.seed << '\n';
}

}  // namespace

int cmd_solve(const RunConfig& cfg, std::ostream& log) {
    const ModelParams& p = cfg.model;
    const fs::path dir = prepare_output(cfg);
    const ClosedFormSolution sol = solve(p, {cfg.solver.theta_max, cfg.solver.theta_points});
    const TimeGrid grid(0.0, p.horizon, cfg.solver.grid_steps);

    {
        CsvWriter csv(dir / "closed_form.csv", {"t", "g1", "g2", "w_hat"});
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double t = grid.time(i);
            csv.row(std::vector<double>{t, sol.g1_at(t), sol.g2_at(t), optimal_portfolio(t, p)});
        }
    }

    std::vector<ValueSurface> surfaces;
    for (double th : cfg.sweep.thetas) surfaces.push_back(solve_hjb(p, th, cfg.solver.grid_steps));
    {
        std::vector<std::string> header{"t", "A"};
        for (const auto& s : surfaces) header.push_back(label("B_theta_", s.theta));
        CsvWriter csv(dir / "hjb.csv", header);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            std::vector<double> row{grid.time(i), surfaces.empty() ? A_of_t(grid.time(i), p) : surfaces[0].A[i]};
            for (const auto& s : surfaces) row.push_back(s.B[i]);
            csv.row(row);
        }
    }

    const ValueSurface base = solve_hjb(p, 0.0, cfg.solver.grid_steps);
    const double v_hjb = value(0.0, p.initial_wealth, base);
    const double residual = std::abs(sol.value - v_hjb) / std::abs(v_hjb);
    const DerivedConstants d = derive(p);
    {
        std::ofstream out(dir / "summary.txt", std::ios::binary);
        write_provenance(out, cfg);
        out << "grid_steps: " << cfg.solver.grid_steps << '\n';
        out << "xi: " << format_number(d.xi) << '\n';
        out << "psi: " << format_number(d.psi) << '\n';
        out << "gamma: " << format_number(d.gamma) << '\n';
        out << "W0: " << format_number(p.initial_wealth) << '\n';
        out << "zeta_star: " << format_number(sol.zeta_star) << '\n';
        out << "theta_hat: " << format_number(sol.theta_hat) << '\n';
        out << "J_star: " << format_number(sol.value) << '\n';
        out << "V_hjb(0,W0): " << format_number(v_hjb) << '\n';
        out << "relative_residual: " << format_number(residual) << '\n';
        out << "cross_check: " << verdict(residual < cfg.solver.identity_tolerance) << '\n';
    }
    log << "theta_hat = " << format_number(sol.theta_hat) << ", J* = " << format_number(sol.value)
        << ", V(0,W0) = " << format_number(v_hjb) << ", relative residual = " << format_number(residual) << '\n';
    if (!(residual < cfg.solver.identity_tolerance)) {
        log << "cross-solver identity failed\n";
        return kExitSolver;
    }
    return kExitOk;
}

int cmd_sweep_theta(const RunConfig& cfg, std::ostream& log) {
    const ModelParams& p = cfg.model;
    const fs::path dir = prepare_output(cfg);
    const std::size_t steps = cfg.solver.grid_steps;

    const ValueSurface base = solve_hjb(p, 0.0, steps);
    const ValueSurface other = solve_hjb(p, cfg.sweep.compare_theta, steps);
    bool ordering = true;
    {
        CsvWriter csv(dir / "figure1a.csv", {"x", "V_theta0", label("V_theta", cfg.sweep.compare_theta)});
        for (double x : x_grid(cfg.sweep)) {
            const double v0 = value(0.0, x, base), v1 = value(0.0, x, other);
            ordering = ordering && v0 > v1;
            csv.row(std::vector<double>{x, v0, v1});
        }
    }

    std::vector<double> thetas = cfg.sweep.thetas;
    std::sort(thetas.begin(), thetas.end());
    std::vector<std::vector<double>> table;
    {
        std::vector<std::string> header{"theta"};
        for (double x : cfg.sweep.x_values) header.push_back(label("V_x", x));
        CsvWriter csv(dir / "figure1b.csv", header);
        for (double th : thetas) {
            const ValueSurface s = solve_hjb(p, th, steps);
            std::vector<double> row{th};
            for (double x : cfg.sweep.x_values) row.push_back(value(0.0, x, s));
            csv.row(row);
            table.push_back(row);
        }
    }

    log << "figure1a-ordering (V^0 > V^" << format_number(cfg.sweep.compare_theta) << "): " << verdict(ordering) << '\n';
    if (thetas.size() < 2) {
        log << "theta-monotonicity: SKIPPED (single theta)\n";
        return kExitOk;
    }
    bool monotone = true;
    std::string first_violation;
    for (std::size_t k = 1; k < table.size(); ++k)
        for (std::size_t j = 1; j < table[k].size(); ++j)
            if (table[k][j] > table[k - 1][j]) {
                if (monotone) {
                    std::ostringstream ss;
                    ss << " (first violation: theta " << format_number(table[k - 1][0]) << " -> "
                       << format_number(table[k][0]) << " at x = " << format_number(cfg.sweep.x_values[j - 1]) << ')';
                    first_violation = ss.str();
                }
                monotone = false;
            }
    log << "theta-monotonicity: " << verdict(monotone) << first_violation << '\n';
    return kExitOk;
}

int cmd_indifference(const RunConfig& cfg, std::ostream& log) {
    const ModelParams& p = cfg.model;
    const fs::path dir = prepare_output(cfg);
    const std::size_t steps = cfg.solver.grid_steps;
    const ValueSurface base = solve_hjb(p, 0.0, steps);

    CsvWriter csv(dir / "indifference.csv", {"theta", "h", "max_bisection_gap", "self_check"});
    bool all = true;
    for (double th : cfg.sweep.thetas) {
        const ValueSurface s = solve_hjb(p, th, steps);
        const double h = th == 0.0 ? 0.0 : (s.B[0] - base.B[0]) / base.A[0];
        double gap = 0.0;
        for (double x : cfg.sweep.x_values)
            gap = std::max(gap, std::abs(indifference_by_bisection(0.0, x, base, s) - h));
        const bool ok = gap < 1e-8;
        all = all && ok;
        csv.row(std::vector<std::string>{format_number(th), format_number(h), format_number(gap), verdict(ok)});
        log << "theta = " << format_number(th) << ": h = " << format_number(h) << ", self-check " << verdict(ok)
            << '\n';
    }
    return all ? kExitOk : kExitSolver;
}

int cmd_validate(const RunConfig& cfg, std::ostream& log) {
    const ModelParams& p = cfg.model;
    const fs::path dir = prepare_output(cfg);
    const bool loud = verbose();

    SimConfig check;
    check.n_paths = cfg.mc.paths;
    check.grid = TimeGrid::with_step(p.horizon, cfg.mc.check_dt);
    check.seed = cfg.mc.seed;
    check.workers = cfg.mc.workers;
    check.mu_shift = cfg.mc.mu_shift;

    std::ostringstream rep;
    rep << std::setprecision(17);
    write_provenance(rep, cfg);
    rep << "paths: " << cfg.mc.paths << '\n';
    bool all = true;

    if (loud) log << "martingale check...\n";
    const MartingaleReport mart = martingale_check(cfg.mc.martingale_times, check, p);
    rep << "\n[martingale] physical measure, dt = " << format_number(check.grid.dt()) << '\n';
    for (const auto& row : mart.rows) {
        auto line = [&](const char* name, const EstimatorResult& e, bool ok, bool trivial) {
            rep << "t = " << format_number(row.t) << "  " << name << ": mean = " << format_number(e.mean)
                << ", se = " << format_number(e.std_error) << "  " << verdict(ok)
                << (trivial ? " (trivial: zero hazard)" : "") << '\n';
        };
        line("phi*S1 - S1(0)", row.discounted_asset, row.pass_asset, false);
        line("phi/beta - 1", row.density, row.pass_density, false);
        line("M_lambda", row.compensated, row.pass_compensated, row.trivial_compensated);
    }
    rep << "martingale: " << verdict(mart.pass()) << '\n';
    all = all && mart.pass();

    if (loud) log << "budget check...\n";
    const ClosedFormSolution sol = solve(p, {cfg.solver.theta_max, cfg.solver.theta_points});
    SimConfig pricing = check;
    pricing.measure = Measure::pricing_vstar;
    const BudgetReport budget = budget_check(sol, pricing, p);
    rep << "\n[budget] pricing-v-star measure, dt = " << format_number(pricing.grid.dt()) << '\n';
    rep << "discrepancy: " << format_number(budget.estimate) << ", se = " << format_number(budget.std_error) << '\n';
    rep << "premium_term: " << format_number(budget.premium_term) << '\n';
    rep << "negative_consumption_fraction: " << format_number(budget.negative_consumption_fraction) << '\n';
    rep << "budget: " << verdict(budget.pass) << '\n';
    all = all && budget.pass;

    SimConfig sim;
    sim.n_paths = cfg.mc.paths;
    sim.grid = TimeGrid::with_step(p.horizon, cfg.mc.dt);
    sim.seed = cfg.mc.seed;
    sim.workers = cfg.mc.workers;
    sim.mu_shift = cfg.mc.mu_shift;
    sim.dynamics = parse_dynamics(cfg.mc.dynamics);
    rep << "\n[utility] " << to_string(sim.dynamics) << " dynamics, dt = " << format_number(sim.grid.dt()) << '\n';
    for (double th : cfg.mc.utility_thetas) {
        if (loud) log << "utility check theta = " << th << "...\n";
        const ValueSurface s = solve_hjb(p, th, cfg.solver.grid_steps);
        const UtilityEstimate u = estimate_utility(sim, p, FeedbackControls(s, p));
        const double target = value(0.0, p.initial_wealth, s);
        const bool ok = within_three_se(u.result.mean - target, u.result.std_error);
        rep << "theta = " << format_number(th) << ": estimate = " << format_number(u.result.mean)
            << ", se = " << format_number(u.result.std_error) << ", V(0,W0) = " << format_number(target)
            << ", negative_consumption_fraction = " << format_number(u.negative_consumption_fraction) << "  "
            << verdict(ok) << '\n';
        all = all && ok;
    }
    rep << "\noverall: " << verdict(all) << '\n';

    std::ofstream(dir / "validation.txt", std::ios::binary) << rep.str();
    log << rep.str();
    return all ? kExitOk : kExitValidation;
}

int run_command(const std::string& command, const RunConfig& config, std::ostream& log, std::ostream& err) {
    try {
        if (command == "solve") return cmd_solve(config, log);
        if (command == "sweep-theta") return cmd_sweep_theta(config, log);
        if (command == "indifference") return cmd_indifference(config, log);
        if (command == "validate") return cmd_validate(config, log);
        err << "unknown command '" << command << "'\n";
        return kExitConfig;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ParameterError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "solver failure: " << e.what() << '\n';
        return kExitSolver;
    }
}

}  // namespace lifeopt
