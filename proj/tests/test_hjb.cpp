#include <cmath>

#include "doctest.h"
#include "lifeopt/closedform.hpp"
#include "lifeopt/hjb.hpp"
#include "oracles.hpp"

using namespace lifeopt;

namespace {

// HJB residual of V at (t, x) by central differences, relative to |V|.
double pde_residual(double t, double x, double theta, const ValueSurface& s, const ModelParams& p) {
    const double ht = 1e-4, hx = 1e-3;
    const double xi = (p.mu - p.r) / p.sigma;
    const double V = value(t, x, s);
    const double Vt = (value(t + ht, x, s) - value(t - ht, x, s)) / (2 * ht);
    const double Vx = (value(t, x + hx, s) - value(t, x - hx, s)) / (2 * hx);
    const double Vxx = (value(t, x + hx, s) - 2 * V + value(t, x - hx, s)) / (hx * hx);
    const double consumption = Vx * (std::log(Vx) - 1.0) / p.alpha;
    const double investment = -0.5 * xi * xi * Vx * Vx / Vxx;
    const double drift = (p.r * x + p.income(t) - theta * p.r) * Vx;
    const double jump = p.mortality(t) * (value(t, x + theta * p.delta, s) - V);
    return (Vt - p.rho * V + consumption + investment + drift + jump) / std::abs(V);
}

}  // namespace

TEST_CASE("A coefficient") {
    const ModelParams p = baseline_params();
    CHECK(A_of_t(p.horizon, p) == p.alpha);
    CHECK(A_of_t(0.0, p) == doctest::Approx(0.5 / (5.0 * (1.0 - std::exp(-2.0)) + std::exp(-2.0))).epsilon(1e-15));
    for (double t : {0.0, 3.3, 9.0}) CHECK(A_of_t(t, p) * g1(t, p) == doctest::Approx(p.alpha).epsilon(1e-15));
    ModelParams flat = p;
    flat.r = 0.0;
    CHECK(A_of_t(4.0, flat) == doctest::Approx(0.5 / 7.0).epsilon(1e-15));
}

TEST_CASE("B coefficient against an RK4 integration of the ODE pair") {
    const ModelParams p = baseline_params();
    for (double theta : {0.0, 0.25, 1.0, 2.0}) {
        CHECK(B_of_t(p.horizon, theta, p) == std::log(p.alpha));
        for (double t : {0.0, 5.0}) {
            const auto [A, B] = oracle::hjb_ode(t, theta, p, 20000);
            CHECK(A_of_t(t, p) == doctest::Approx(A).epsilon(1e-10));
            CHECK(B_of_t(t, theta, p) == doctest::Approx(B).epsilon(1e-9));
        }
    }
    CHECK(B_of_t(0.0, 0.0, p) == doctest::Approx(2.950965894420408).epsilon(1e-12));
    CHECK(B_of_t(0.0, 1.0, p) == doctest::Approx(2.8903420067596497).epsilon(1e-12));
}

TEST_CASE("tabulated surface") {
    const ModelParams p = baseline_params();
    const ValueSurface s = solve_hjb(p, 1.0, 2000);
    CHECK(s.A.size() == 2001);
    CHECK(s.A.back() == p.alpha);
    CHECK(s.B.back() == std::log(p.alpha));
    for (std::size_t i : {0u, 700u, 1999u}) {
        const double t = s.grid.time(i);
        CHECK(s.A[i] == doctest::Approx(A_of_t(t, p)).epsilon(1e-14));
        CHECK(s.B[i] == doctest::Approx(B_of_t(t, 1.0, p, 2000 - i)).epsilon(1e-10));
    }
    CHECK(s.A_at(s.grid.time(5)) == s.A[5]);
}

TEST_CASE("grid halving leaves B(0) unchanged") {
    const ModelParams p = baseline_params();
    for (double theta : {0.0, 1.0}) {
        const double fine = B_of_t(0.0, theta, p, 10000);
        const double coarse = B_of_t(0.0, theta, p, 5000);
        CHECK(std::abs(fine - coarse) < 1e-8 * std::abs(fine));
    }
}

TEST_CASE("value function agrees with the closed form at zero premium") {
    for (double w0 : {0.0, 1.0, 5.0}) {
        const ModelParams p = baseline_params(w0);
        const double V = value(0.0, w0, solve_hjb(p, 0.0));
        const double J = solve(p).value;
        CHECK(std::abs(J - V) / std::abs(V) < 1e-6);
    }
}

TEST_CASE("value function shape") {
    const ModelParams p = baseline_params();
    const ValueSurface s = solve_hjb(p, 0.0, 1000);
    double prev = value(0.0, 0.0, s);
    CHECK(prev < 0.0);
    for (int i = 1; i <= 10; ++i) {
        const double v = value(0.0, i, s);
        CHECK(v > prev);
        prev = v;
    }
    CHECK(value(2.0, 3.0, s) > 0.5 * (value(2.0, 2.0, s) + value(2.0, 4.0, s)));
}

TEST_CASE("HJB residual") {
    const ModelParams p = baseline_params();
    for (double theta : {0.0, 1.0}) {
        const ValueSurface s = solve_hjb(p, theta, 10000);
        for (double t : {1.0, 5.0, 9.0})
            for (double x : {0.0, 2.0, 8.0}) CHECK(std::abs(pde_residual(t, x, theta, s, p)) < 1e-4);
    }
}

TEST_CASE("feedback controls") {
    const ModelParams p = baseline_params();
    const ValueSurface s = solve_hjb(p, 0.0, 10000);
    const FeedbackControls fc(s, p);
    for (double t : {0.0, 4.0, 10.0}) CHECK(fc.w_of(t) == doctest::Approx(optimal_portfolio(t, p)).epsilon(1e-12));

    // first-order condition u1'(c) = V_x
    for (double x : {-1.0, 1.0, 6.0}) {
        const double c = fc.c_of(3.0, x);
        const double Vx = s.A_at(3.0) * std::exp(-s.A_at(3.0) * x - s.B_at(3.0));
        CHECK(std::abs(std::exp(-p.alpha * c) - Vx) < 1e-12 * Vx);
    }
    const ClosedFormSolution cf = solve(p);
    CHECK(fc.c_of(0.0, p.initial_wealth) ==
          doctest::Approx(optimal_consumption(0.0, 1.0, cf.zeta_star, p)).epsilon(1e-9));
}

TEST_CASE("indifference price") {
    const ModelParams p = baseline_params();
    CHECK(indifference_price(0.0, 0.0, p) == 0.0);
    const double h = indifference_price(0.0, 1.0, p);
    CHECK(h == doctest::Approx(-0.5406024685477967).epsilon(1e-10));

    const ValueSurface base = solve_hjb(p, 0.0);
    const ValueSurface insured = solve_hjb(p, 1.0);
    for (double x : {1.0, 5.0, 10.0}) {
        CHECK(std::abs(indifference_by_bisection(0.0, x, base, insured) - h) < 1e-8);
        CHECK(value(0.0, x, base) == doctest::Approx(value(0.0, x - h, insured)).epsilon(1e-12));
    }
}
