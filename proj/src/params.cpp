#include "lifeopt/params.hpp"

#include <algorithm>
#include <cmath>

namespace lifeopt {

TimeGrid::TimeGrid(double start, double end, std::size_t steps) : t0(start), t1(end), n_steps(steps) {
    if (!(end > start)) throw ParameterError("time grid needs t0 < t1");
    if (steps < 1) throw ParameterError("time grid needs at least one step");
}

TimeGrid TimeGrid::with_step(double horizon, double dt) {
    if (!(dt > 0.0)) throw ParameterError("dt must be positive");
    const auto n = static_cast<std::size_t>(std::max(1.0, std::round(horizon / dt)));
    return TimeGrid(0.0, horizon, n);
}

std::size_t TimeGrid::nearest(double t) const {
    const double k = std::round((t - t0) / dt());
    if (k <= 0.0) return 0;
    return std::min(n_steps, static_cast<std::size_t>(k));
}

ModelParams validate(ModelParams raw) {
    auto finite = [](double v, const char* name) {
        if (!std::isfinite(v)) throw ParameterError(std::string(name) + " must be finite");
    };
    finite(raw.r, "r");
    finite(raw.mu, "mu");
    finite(raw.sigma, "sigma");
    finite(raw.rho, "rho");
    finite(raw.alpha, "alpha");
    finite(raw.delta, "delta");
    finite(raw.horizon, "T");
    finite(raw.initial_wealth, "W0");
    if (!(raw.sigma > 0.0)) throw ParameterError("sigma must be positive");
    if (!(raw.alpha > 0.0)) throw ParameterError("alpha must be positive");
    if (!(raw.delta > 0.0)) throw ParameterError("delta must be positive");
    if (!(raw.horizon > 0.0)) throw ParameterError("T must be positive");
    for (double v : raw.mortality.values())
        if (!(v >= 0.0) || !std::isfinite(v)) throw ParameterError("lambda_fn must be non-negative on every segment");
    for (double v : raw.income.values())
        if (!(v >= 0.0) || !std::isfinite(v)) throw ParameterError("y_fn must be non-negative on every segment");
    return raw;
}

DerivedConstants derive(const ModelParams& params) {
    DerivedConstants d;
    d.xi = (params.mu - params.r) / params.sigma;
    d.psi = params.r / params.delta;
    d.gamma = params.rho - params.r + 0.5 * d.xi * d.xi;
    return d;
}

ModelParams baseline_params(double initial_wealth) {
    ModelParams p;
    p.alpha = 0.5;
    p.income = 10.0;
    p.mortality = 0.01;
    p.delta = 100.0;
    p.rho = 0.2;
    p.r = 0.2;
    p.mu = 0.3;
    p.sigma = 0.25;
    p.horizon = 10.0;
    p.initial_wealth = initial_wealth;
    return validate(p);
}

}  // namespace lifeopt
