#include "lifeopt/stateprice.hpp"

#include <cmath>
#include <stdexcept>

namespace lifeopt {

double survival_probability(double t, const PiecewiseConstant& lambda) {
    return std::exp(-lambda.integral(0.0, t));
}

double next_arrival(const PiecewiseConstant& lambda, double from, double uniform_draw, double horizon) {
    return lambda.inverse_cumulative(from, -std::log(uniform_draw), horizon);
}

MortalityDraw sample_tau(const PiecewiseConstant& lambda, double uniform_draw, double horizon) {
    MortalityDraw d;
    d.tau = next_arrival(lambda, 0.0, uniform_draw, horizon);
    d.survived = !(d.tau <= horizon);
    return d;
}

std::vector<double> phi_Z(std::span<const double> dZ, double xi, double dt) {
    std::vector<double> out(dZ.size() + 1);
    out[0] = 1.0;
    const double drift = -0.5 * xi * xi * dt;
    double log_phi = 0.0;
    for (std::size_t i = 0; i < dZ.size(); ++i) {
        log_phi += -xi * dZ[i] + drift;
        out[i + 1] = std::exp(log_phi);
    }
    return out;
}

double phi_N(double t, const MortalityDraw& tau, const PiecewiseConstant& psi, const PiecewiseConstant& lambda) {
    if (tau.tau <= t) {
        const double lam = lambda(tau.tau);
        if (lam == 0.0) throw std::domain_error("phi_N undefined: death at a time with zero hazard");
        const double exponent = lambda.integral(0.0, tau.tau) - psi.integral(0.0, tau.tau);
        return psi(tau.tau) / lam * std::exp(exponent);
    }
    return std::exp(lambda.integral(0.0, t) - psi.integral(0.0, t));
}

double compensated_mortality(double t, const MortalityDraw& tau, const PiecewiseConstant& lambda) {
    if (tau.tau <= t) return 1.0 - lambda.integral(0.0, tau.tau);
    return -lambda.integral(0.0, t);
}

PiecewiseConstant pricing_intensity(const ModelParams& params) {
    const double psi = params.r / params.delta;
    std::vector<double> breaks(params.mortality.breaks().begin(), params.mortality.breaks().end());
    std::vector<double> values;
    for (double lam : params.mortality.values()) values.push_back(lam > 0.0 ? psi : 0.0);
    return PiecewiseConstant(std::move(breaks), std::move(values));
}

}  // namespace lifeopt
