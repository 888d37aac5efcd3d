#include "lifeopt/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace lifeopt {

namespace {

using nlohmann::json;

const json& require(const json& section, const std::string& key, const std::string& where) {
    auto it = section.find(key);
    if (it == section.end()) throw ConfigError("missing required key '" + key + "' in " + where);
    return *it;
}

double number(const json& v, const std::string& key) {
    if (!v.is_number()) throw ConfigError("key '" + key + "' must be a number");
    return v.get<double>();
}

template <class T>
void optional(const json& section, const std::string& key, T& out) {
    auto it = section.find(key);
    if (it == section.end()) return;
    try {
        out = it->get<T>();
    } catch (const json::exception&) {
        throw ConfigError("key '" + key + "' has the wrong type");
    }
}

PiecewiseConstant piecewise(const json& v, const std::string& key) {
    if (v.is_number()) return PiecewiseConstant(v.get<double>());
    if (!v.is_object()) throw ConfigError("key '" + key + "' must be a number or {breaks, values}");
    std::vector<double> breaks, values;
    optional(v, "breaks", breaks);
    values = require(v, "values", key).get<std::vector<double>>();
    try {
        return PiecewiseConstant(std::move(breaks), std::move(values));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(key + ": " + e.what());
    }
}

std::vector<double> theta_range(const json& v) {
    if (v.is_array()) return v.get<std::vector<double>>();
    const double lo = number(require(v, "min", "sweep.thetas"), "min");
    const double hi = number(require(v, "max", "sweep.thetas"), "max");
    const double step = number(require(v, "step", "sweep.thetas"), "step");
    if (!(step > 0.0) || hi < lo) throw ConfigError("sweep.thetas range needs step > 0 and max >= min");
    std::vector<double> out;
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
    for (std::size_t k = 0; k <= n; ++k) out.push_back(lo + step * static_cast<double>(k));
    return out;
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& source) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(source + ": " + e.what());
    }
    RunConfig cfg;
    cfg.source = source;

    const json& m = require(doc, "model", "config");
    ModelParams p;
    p.r = number(require(m, "r", "model"), "r");
    p.mu = number(require(m, "mu", "model"), "mu");
    p.sigma = number(require(m, "sigma", "model"), "sigma");
    p.rho = number(require(m, "rho", "model"), "rho");
    p.alpha = number(require(m, "alpha", "model"), "alpha");
    p.delta = number(require(m, "delta", "model"), "delta");
    p.horizon = number(require(m, "horizon", "model"), "horizon");
    p.initial_wealth = 1.0;
    optional(m, "initial_wealth", p.initial_wealth);
    p.mortality = piecewise(require(m, "mortality", "model"), "mortality");
    p.income = piecewise(require(m, "income", "model"), "income");
    cfg.model = validate(p);

    if (auto it = doc.find("solver"); it != doc.end()) {
        optional(*it, "grid_steps", cfg.solver.grid_steps);
        optional(*it, "theta_max", cfg.solver.theta_max);
        optional(*it, "theta_points", cfg.solver.theta_points);
        optional(*it, "identity_tolerance", cfg.solver.identity_tolerance);
    }
    if (auto it = doc.find("mc"); it != doc.end()) {
        optional(*it, "paths", cfg.mc.paths);
        optional(*it, "dt", cfg.mc.dt);
        optional(*it, "check_dt", cfg.mc.check_dt);
        optional(*it, "seed", cfg.mc.seed);
        optional(*it, "workers", cfg.mc.workers);
        optional(*it, "mu_shift", cfg.mc.mu_shift);
        optional(*it, "dynamics", cfg.mc.dynamics);
        optional(*it, "martingale_times", cfg.mc.martingale_times);
        optional(*it, "utility_thetas", cfg.mc.utility_thetas);
    }
    if (auto it = doc.find("sweep"); it != doc.end()) {
        if (auto t = it->find("thetas"); t != it->end()) cfg.sweep.thetas = theta_range(*t);
        optional(*it, "compare_theta", cfg.sweep.compare_theta);
        optional(*it, "x_min", cfg.sweep.x_min);
        optional(*it, "x_max", cfg.sweep.x_max);
        optional(*it, "x_points", cfg.sweep.x_points);
        optional(*it, "x_values", cfg.sweep.x_values);
    }
    if (auto it = doc.find("output"); it != doc.end()) optional(*it, "dir", cfg.output_dir);

    if (cfg.solver.grid_steps < 2) throw ConfigError("solver.grid_steps must be at least 2");
    if (cfg.mc.paths < 1) throw ConfigError("mc.paths must be at least 1");
    if (!(cfg.mc.dt > 0.0) || !(cfg.mc.check_dt > 0.0)) throw ConfigError("mc.dt and mc.check_dt must be positive");
    if (cfg.sweep.x_points < 2) throw ConfigError("sweep.x_points must be at least 2");
    for (double th : cfg.sweep.thetas)
        if (th < 0.0) throw ConfigError("sweep.thetas must be non-negative");
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

std::vector<double> parse_theta_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const double v = std::stod(item, &used);
            if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
            if (v < 0.0) throw ConfigError("theta values must be non-negative");
            out.push_back(v);
        } catch (const std::logic_error&) {
            throw ConfigError("cannot parse theta list '" + text + "'");
        }
    }
    if (out.empty()) throw ConfigError("empty theta list");
    return out;
}

}  // namespace lifeopt
