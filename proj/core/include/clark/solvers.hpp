#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "clark/critical_point.hpp"
#include "clark/functional.hpp"
#include "clark/model.hpp"
#include "clark/topology.hpp"

namespace clark {

struct SolveConfig {
    double residual_tol = 1e-12;
    double max_flow_time = 1e7;
    double step_cap = 1.0;        // largest accepted time step
    std::uint64_t seed_rng = 0;
    double error_tol = 1e-6;      // Heun/Euler local error bound, relative to 1 + ‖u‖
    double energy_slack = 1e-10;  // largest accepted energy increase per step
    std::size_t max_steps = 5'000'000;
    std::size_t threads = 1;
    bool record_trace = false;

    /// Throws PreconditionError on nonpositive tolerances or step cap.
    void validate() const;
};

enum class SolveStatus { Converged, NonConvergence };

struct FlowSolveResult {
    SolveStatus status = SolveStatus::NonConvergence;
    CriticalPoint point;  // terminal point when converged, best iterate otherwise
    double flow_time = 0.0;
    std::size_t steps = 0;
    std::size_t rejected = 0;
    double max_energy_increase = 0.0;
    std::vector<double> energy_trace;  // filled when cfg.record_trace

    [[nodiscard]] bool converged() const noexcept { return status == SolveStatus::Converged; }
};

/// Integrates du/dτ = −∇I(u) from `seed` with adaptive Heun steps (embedded
/// Euler error estimate, h·L < 0.8 for the local Lipschitz constant L along the
/// step) until ‖∇I‖ < residual_tol or the time budget is spent.
FlowSolveResult gradient_flow_solve(const Functional& f, const Point& seed, const SolveConfig& cfg);

enum class StructuredStatus { Found, NonIsolated, NoSolution };

struct StructuredResult {
    StructuredStatus status = StructuredStatus::NoSolution;
    CriticalPoint point;
    std::vector<double> roots;  // every t ∈ [−2,2] with ∂_t I(t, x(t)) = 0
};

/// Closed-form branch x(t) for `pattern` plus a root scan of ∂_t I(t, x(t))
/// over [−2,2] (bisection to 1e−12).  Returns the root with the largest t.
StructuredResult structured_solve(const ModelParams& params, const std::vector<Sign>& pattern);

/// Axis-aligned seed box; coordinates flagged in `zeroable` are set to 0
/// with probability `zero_probability`.
struct SeedBox {
    std::vector<double> lo;
    std::vector<double> hi;
    std::vector<bool> zeroable;
    double zero_probability = 0.0;
};

/// t ∈ [−1.5, 1.5], x_j ∈ [−18·3^{−2j}, 18·3^{−2j}], x-coordinates zeroed with probability 1/2.
SeedBox model_seed_box(const ModelParams& params);

/// Draws `count` seeds from one generator seeded with `rng_seed`.
std::vector<Point> draw_seeds(const Space& space, const SeedBox& box, std::size_t count,
                              std::uint64_t rng_seed);

struct AccumulationReport {
    std::vector<CriticalPoint> found;
    std::vector<double> distances_to_K0hat;
    std::pair<double, double> window{0.0, 0.0};
    std::size_t attempted = 0;
    std::size_t converged = 0;
};

using Classifier = std::function<CriticalLabel(const Point&)>;

/// Gradient-flow solves from `seeds` random points of `box`; keeps converged
/// points with value in (lo, hi) and records their distance to K0hat_cloud.
/// Found points are ordered by value, then lexicographically by coordinates.
AccumulationReport accumulation_scan(const Functional& f, const Cloud& K0hat_cloud,
                                     std::pair<double, double> window, std::size_t seeds,
                                     const SolveConfig& cfg, const SeedBox& box,
                                     const Classifier& classify_point = {});

}  // namespace clark
