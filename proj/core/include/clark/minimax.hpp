#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "clark/functional.hpp"
#include "clark/solvers.hpp"

namespace clark {

/// Spheres {anchor + (offset + ρ)·Σ cᵢ bᵢ : |c| = 1} in the span of an
/// orthonormal basis.  Such a sphere has genus k = basis.size().
struct SphereFamily {
    Point anchor;
    std::vector<Point> basis;
    double radius_offset = 0.0;
    std::string name;

    [[nodiscard]] std::size_t k() const noexcept { return basis.size(); }
    [[nodiscard]] double radius(double rho) const noexcept { return radius_offset + rho; }
    /// anchor + radius(ρ)·Σ cᵢ bᵢ; c need not be normalized.
    [[nodiscard]] Point embed(const std::vector<double>& c, double rho) const;
};

/// Default family for f:
///  - model: span of x_1..x_k at t = 0, radius ρ;
///  - wrapper: first k discrete sine modes, radius 1 + ρ;
///  - anything else: first k coordinates (unit-normalized), radius ρ.
/// Throws DimensionError when k is zero or exceeds the available directions.
SphereFamily sphere_family(const Functional& f, std::size_t k);

struct SupBudget {
    std::size_t samples = 256;  // quasi-random sphere points (plus the 2k axis points)
    std::size_t starts = 16;    // best samples refined by projected ascent
    std::size_t iters = 200;
    std::uint64_t seed = 1;
    std::size_t threads = 1;

    [[nodiscard]] std::string describe() const;
};

struct SphereSup {
    double sup = 0.0;  // largest value found: a lower bound of the true sup
    Point witness;
    double rho = 0.0;
};

/// Sampled sup of f over the radius-ρ sphere of `family`.
SphereSup sphere_sup(const Functional& f, const SphereFamily& family, double rho,
                     const SupBudget& budget);
SphereSup sphere_sup(const Functional& f, std::size_t k, double rho, const SupBudget& budget);

struct MinimaxEstimate {
    std::size_t j = 0;
    double rho_star = 0.0;
    double upper_bound = 0.0;
    std::vector<std::pair<double, double>> sphere_sup_trace;  // (ρ, sup) in evaluation order
    Point witness;
    std::string budget;
};

/// 24 log-spaced radii in [1e−4·3^{−2(j−1)}, 1].
std::vector<double> default_rho_grid(std::size_t j);

/// min over ρ of the sphere sup: grid scan, then golden-section refinement in
/// log ρ around the best grid radius.  Throws NoNegativeCertificate when no
/// evaluated sup is negative.
MinimaxEstimate cj_upper_bound(const Functional& f, std::size_t j, const std::vector<double>& rho_grid,
                               const SupBudget& budget);

struct MinimaxSweep {
    std::vector<MinimaxEstimate> estimates;  // j = 1..jmax
    bool monotone = false;                   // bounds non-decreasing in j
};

/// cj_upper_bound for j = 1..jmax on the default grids and one budget.
MinimaxSweep minimax_sweep(const Functional& f, std::size_t jmax, const SupBudget& budget);

/// Smallest critical value reached by gradient flow from `seeds` points of
/// `box`; bounds every c_j from below.
double global_min_estimate(const Functional& f, const SeedBox& box, std::size_t seeds,
                           const SolveConfig& cfg);

}  // namespace clark
