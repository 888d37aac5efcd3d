#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace lifeopt {

/// Composite Simpson rule with n intervals (rounded up to even) on [a, b].
template <class F>
double simpson(F&& f, double a, double b, std::size_t n) {
    if (n < 2) n = 2;
    if (n % 2 != 0) ++n;
    const double h = (b - a) / static_cast<double>(n);
    double odd = 0.0, even = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double x = a + h * static_cast<double>(i);
        (i % 2 != 0 ? odd : even) += f(x);
    }
    return h / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even);
}

/// Composite Simpson on [a, b] split at every breakpoint inside (a, b).
///
/// The n intervals are shared between pieces in proportion to their length,
/// so a piecewise-smooth integrand keeps fourth-order convergence.
template <class F>
double simpson_aligned(F&& f, double a, double b, std::size_t n, std::span<const double> breaks) {
    std::vector<double> cuts{a};
    for (double x : breaks)
        if (x > a && x < b) cuts.push_back(x);
    cuts.push_back(b);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double len = cuts[i + 1] - cuts[i];
        const auto share = static_cast<std::size_t>(std::ceil(static_cast<double>(n) * len / (b - a)));
        total += simpson(f, cuts[i], cuts[i + 1], share);
    }
    return total;
}

/// Simpson on a single panel [a, b] using the midpoint.
template <class F>
double simpson_panel(F&& f, double a, double b) {
    return (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
}

/// Simpson over equally spaced samples (odd number of points). Falls back to
/// the trapezoid rule on the last interval when the count is even.
inline double simpson_samples(std::span<const double> y, double h) {
    const std::size_t n = y.size();
    if (n < 2) return 0.0;
    if (n == 2) return 0.5 * h * (y[0] + y[1]);
    const std::size_t last = (n % 2 == 1) ? n - 1 : n - 2;
    double s = y[0] + y[last];
    for (std::size_t i = 1; i < last; ++i) s += (i % 2 != 0 ? 4.0 : 2.0) * y[i];
    double total = s * h / 3.0;
    if (last != n - 1) total += 0.5 * h * (y[n - 2] + y[n - 1]);
    return total;
}

/// Pairwise summation; result depends only on the order of the input.
inline double pairwise_sum(std::span<const double> x) {
    if (x.size() <= 16) {
        double s = 0.0;
        for (double v : x) s += v;
        return s;
    }
    const std::size_t half = x.size() / 2;
    return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

}  // namespace lifeopt
