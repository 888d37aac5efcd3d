#include "lifeopt/closedform.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lifeopt/quadrature.hpp"

namespace lifeopt {

namespace {

// (1 - e^{-x}) / x
double annuity_factor(double x) {
    if (x == 0.0) return 1.0;
    return -std::expm1(-x) / x;
}

// (1 - e^{-x}(1 + x)) / x^2
double second_moment_factor(double x) {
    if (std::abs(x) < 1e-2) {
        // sum_{n>=2} (-1)^n (n-1)/n! x^{n-2}
        double term_fact = 2.0;  // n!
        double xp = 1.0;
        double sum = 0.0;
        for (int n = 2; n <= 12; ++n) {
            if (n > 2) term_fact *= n;
            sum += ((n % 2 == 0) ? 1.0 : -1.0) * (n - 1) / term_fact * xp;
            xp *= x;
        }
        return sum;
    }
    return (-std::expm1(-x) - x * std::exp(-x)) / (x * x);
}

double g1_impl(double t, double r, double horizon) {
    const double tau = horizon - t;
    return tau * annuity_factor(r * tau) + std::exp(-r * tau);
}

double g2_impl(double t, double r, double horizon) {
    const double tau = horizon - t;
    return tau * std::exp(-r * tau) + tau * tau * second_moment_factor(r * tau);
}

// psi ln(psi/lambda) + lambda - psi, zero at psi = 0 by convention
double log_penalty(double psi, double lambda) {
    if (psi == 0.0) return 0.0;
    if (lambda == 0.0) throw std::domain_error("dual objective undefined: psi_v > 0 where lambda = 0");
    return psi * std::log(psi / lambda) + lambda - psi;
}

}  // namespace

double g1(double t, const ModelParams& params) { return g1_impl(t, params.r, params.horizon); }
double g2(double t, const ModelParams& params) { return g2_impl(t, params.r, params.horizon); }

double ClosedFormSolution::g1_at(double t) const { return g1_impl(t, r, horizon); }
double ClosedFormSolution::g2_at(double t) const { return g2_impl(t, r, horizon); }

double income_value(double t, const ModelParams& params) {
    return params.income.discounted_integral(t, params.horizon, params.r);
}

double zeta_of_theta(double theta, const ModelParams& params) {
    const DerivedConstants d = derive(params);
    const double T = params.horizon;
    const double premium_value = params.r * theta * T * annuity_factor(params.r * T);
    const double bracket = d.gamma * g2(0.0, params) +
                           params.alpha * (income_value(0.0, params) - premium_value) +
                           params.alpha * params.initial_wealth;
    return std::exp(-bracket / g1(0.0, params));
}

double value_at_theta(double theta, const ModelParams& params) {
    return -(zeta_of_theta(theta, params) / params.alpha) * g1(0.0, params);
}

double dual_objective(const DualObjectiveInputs& inputs, const ModelParams& params, std::size_t n_intervals) {
    if (!(inputs.zeta > 0.0)) throw std::invalid_argument("zeta must be positive");
    if (inputs.theta < 0.0) throw std::invalid_argument("theta must be non-negative");
    if (inputs.psi_v.min_value() < 0.0) throw std::invalid_argument("psi_v must be non-negative");

    const double T = params.horizon;
    const double r = params.r;
    const double alpha = params.alpha;
    const double gamma = derive(params).gamma;
    const double log_zeta = std::log(inputs.zeta);
    const PiecewiseConstant& psi = inputs.psi_v;

    std::vector<double> cuts{0.0, T};
    for (auto fn : {&psi, &params.mortality, &params.income})
        for (double b : fn->breaks())
            if (b > 0.0 && b < T) cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto Psi = [&](double u) { return psi.integral(0.0, u); };

    double L = 0.0;      // integral_0^s log_penalty e^{-Psi}
    double outer = 0.0;  // integral_0^s e^{-rs} (h - f)
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double lo = cuts[k], hi = cuts[k + 1];
        const auto panels = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::ceil(static_cast<double>(n_intervals) * (hi - lo) / T)));
        const double mid_piece = 0.5 * (lo + hi);
        const double psi_p = psi(mid_piece);
        const double lam_p = params.mortality(mid_piece);
        const double y_p = params.income(mid_piece);
        const double pen = log_penalty(psi_p, lam_p);
        const double income_rate = alpha * (y_p - (r - psi_p * params.delta) * inputs.theta);

        auto inner = [&](double u) { return pen * std::exp(-Psi(u)); };
        auto integrand = [&](double s, double L_s) {
            const double h = 1.0 - log_zeta - gamma * s - L_s;
            const double f = income_rate * std::exp(-Psi(s));
            return std::exp(-r * s) * (h - f);
        };

        const double step = (hi - lo) / static_cast<double>(panels);
        for (std::size_t i = 0; i < panels; ++i) {
            const double a = lo + step * static_cast<double>(i);
            const double b = (i + 1 == panels) ? hi : a + step;
            const double m = 0.5 * (a + b);
            const double L_m = L + simpson_panel(inner, a, m);
            const double L_b = L + simpson_panel(inner, a, b);
            outer += (b - a) / 6.0 * (integrand(a, L) + 4.0 * integrand(m, L_m) + integrand(b, L_b));
            L = L_b;
        }
    }
    const double h_T = 1.0 - log_zeta - gamma * T - L;
    const double bracket = outer + std::exp(-r * T) * h_T - alpha * params.initial_wealth;
    return -(inputs.zeta / alpha) * bracket;
}

ClosedFormSolution solve(const ModelParams& params, const SolveOptions& options) {
    ClosedFormSolution sol;
    sol.r = params.r;
    sol.horizon = params.horizon;
    sol.theta_hat = 0.0;
    sol.zeta_star = zeta_of_theta(0.0, params);
    sol.value = -(sol.zeta_star / params.alpha) * g1(0.0, params);

    const std::size_t n = std::max<std::size_t>(options.theta_points, 2);
    double prev = sol.value;
    for (std::size_t k = 1; k < n; ++k) {
        const double theta = options.theta_max * static_cast<double>(k) / static_cast<double>(n - 1);
        const double J = value_at_theta(theta, params);
        const bool ok = params.r > 0.0 ? J < prev : J <= sol.value;
        if (!ok)
            throw SolverError("objective does not decrease in the premium amount at theta = " +
                              std::to_string(theta));
        prev = J;
    }
    return sol;
}

double optimal_consumption(double t, double phi_vstar_t, double zeta_star, const ModelParams& params) {
    if (!(phi_vstar_t > 0.0))
        throw std::domain_error("optimal consumption is only defined before death (phi_v* > 0)");
    return -(std::log(zeta_star * phi_vstar_t) + params.rho * t) / params.alpha;
}

double wealth_identity(double t, double c_hat_t, const ModelParams& params) {
    const double gamma = derive(params).gamma;
    return c_hat_t * g1(t, params) - gamma / params.alpha * g2(t, params) - income_value(t, params);
}

double optimal_portfolio(double t, const ModelParams& params) {
    return (params.mu - params.r) / (params.sigma * params.sigma * params.alpha) * g1(t, params);
}

double vstar_density(double t, double phiZ_t, bool alive, const ModelParams& params) {
    if (!alive) return 0.0;
    return std::exp(-params.r * t) * phiZ_t;
}

}  // namespace lifeopt
