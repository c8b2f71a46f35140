#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace clark::ode {

/// Explicit embedded Runge–Kutta pair.  `b` advances the solution, `b_low`
/// is the embedded lower-order estimate used for the error.
struct Tableau {
    static constexpr std::size_t kMaxStages = 7;
    std::size_t stages = 0;
    int order = 0;  // order of the propagated solution
    std::array<double, kMaxStages> c{};
    std::array<std::array<double, kMaxStages>, kMaxStages> a{};
    std::array<double, kMaxStages> b{};
    std::array<double, kMaxStages> b_low{};
};

/// Bogacki–Shampine 3(2).  The propagated weights (2/9, 1/3, 4/9) are
/// nonnegative, so ‖y₁ − y₀‖ ≤ h·max‖f‖.
inline constexpr Tableau bogacki_shampine() {
    Tableau t;
    t.stages = 4;
    t.order = 3;
    t.c = {0.0, 0.5, 0.75, 1.0};
    t.a[1] = {0.5};
    t.a[2] = {0.0, 0.75};
    t.a[3] = {2.0 / 9.0, 1.0 / 3.0, 4.0 / 9.0};
    t.b = {2.0 / 9.0, 1.0 / 3.0, 4.0 / 9.0, 0.0};
    t.b_low = {7.0 / 24.0, 0.25, 1.0 / 3.0, 0.125};
    return t;
}

/// Dormand–Prince 5(4).
inline constexpr Tableau dormand_prince() {
    Tableau t;
    t.stages = 7;
    t.order = 5;
    t.c = {0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0};
    t.a[1] = {0.2};
    t.a[2] = {3.0 / 40.0, 9.0 / 40.0};
    t.a[3] = {44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0};
    t.a[4] = {19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0};
    t.a[5] = {9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0};
    t.a[6] = {35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0};
    t.b = {35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0};
    t.b_low = {5179.0 / 57600.0,    0.0,          7571.0 / 16695.0, 393.0 / 640.0,
               -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0};
    return t;
}

struct StepOutcome {
    std::vector<double> y;  // propagated solution at t + h
    double error = 0.0;     // max-norm of the embedded difference
};

/// One step of size h from (t, y) for y′ = rhs(t, y).  `rhs` has signature
/// std::vector<double>(double, std::span<const double>).
template <typename Rhs>
StepOutcome step(const Tableau& tab, Rhs&& rhs, double t, std::span<const double> y, double h) {
    const std::size_t n = y.size();
    std::array<std::vector<double>, Tableau::kMaxStages> k;
    std::vector<double> stage(n);
    for (std::size_t s = 0; s < tab.stages; ++s) {
        for (std::size_t i = 0; i < n; ++i) {
            double acc = y[i];
            for (std::size_t r = 0; r < s; ++r) acc += h * tab.a[s][r] * k[r][i];
            stage[i] = acc;
        }
        k[s] = rhs(t + tab.c[s] * h, std::span<const double>(stage));
    }
    StepOutcome out;
    out.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double high = 0.0;
        double low = 0.0;
        for (std::size_t s = 0; s < tab.stages; ++s) {
            high += tab.b[s] * k[s][i];
            low += tab.b_low[s] * k[s][i];
        }
        out.y[i] = y[i] + h * high;
        out.error = std::max(out.error, std::abs(h * (high - low)));
    }
    return out;
}

/// Standard step-size update for an error estimate of order `order`.
inline double next_step(double h, double error, double tol, int order) {
    if (error <= 0.0) return 4.0 * h;
    const double factor = 0.9 * std::pow(tol / error, 1.0 / static_cast<double>(order));
    return h * std::clamp(factor, 0.2, 4.0);
}

}  // namespace clark::ode
