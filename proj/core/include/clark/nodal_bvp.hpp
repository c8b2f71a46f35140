#pragma once

#include <cstddef>
#include <vector>

#include "clark/point.hpp"

namespace clark {

/// Accepted integration nodes of u″ = −|u|^{p−1}u, u(0) = 0, u′(0) = slope.
/// State per node: u, u′, ∫₀ᵗ u′², ∫₀ᵗ |u|^{p+1}.
class Trajectory {
public:
    Trajectory(double p, std::vector<double> times, std::vector<std::vector<double>> states);

    [[nodiscard]] double p() const noexcept { return p_; }
    [[nodiscard]] const std::vector<double>& times() const noexcept { return times_; }
    [[nodiscard]] const std::vector<std::vector<double>>& states() const noexcept { return states_; }
    [[nodiscard]] double end_time() const { return times_.back(); }

    /// Full state at time t ∈ [0, end_time()]: one Dormand–Prince step from
    /// the last node before t.  Throws PreconditionError outside the range.
    [[nodiscard]] std::vector<double> state(double t) const;
    [[nodiscard]] double u(double t) const { return state(t)[0]; }

private:
    double p_;
    std::vector<double> times_;
    std::vector<std::vector<double>> states_;
};

struct ShootResult {
    double p = 0.0;
    double slope = 0.0;
    Trajectory trajectory;
    std::vector<double> crossings;   // zero times, localized to 1e−12
    double max_energy_drift = 0.0;   // max |E(t) − E(0)|, E = ½u′² + |u|^{p+1}/(p+1)
};

/// Integrates until the `crossings`-th zero of u (Dormand–Prince 5(4), local
/// error 1e−10).  Requires p ∈ (0,1) and slope ≠ 0; throws NoCrossing when
/// fewer zeros occur before t_max.
ShootResult shoot(double p, double slope, double t_max, std::size_t crossings = 1);

struct NodalSolution {
    double p = 0.0;
    std::size_t k = 0;
    int sign = 1;                  // sign of u on the first nodal domain
    Point grid_values;             // H01Grid samples
    double energy_norm_sq = 0.0;   // ∫u′², by integrating along the shot
    double power_integral = 0.0;   // ∫|u|^{p+1}, same way
    double j_value = 0.0;          // ½‖u‖² − power_integral/(p+1)
    double nehari_residual = 0.0;  // |‖u‖² − ∫|u|^{p+1}| / ‖u‖²
    double grid_energy_norm_sq = 0.0;
    double grid_nehari_residual = 0.0;
    double discrete_residual = 0.0;  // max|strong residual| / max|u|^p on the grid
    double sup_norm = 0.0;
    std::vector<double> zeros;     // interior zeros
    double slope = 0.0;            // u′(0)
};

/// k = 1 member: shoot with slope 1 and rescale so the first zero lands at 1.
NodalSolution base_solution(double p, const Space& grid);

/// u_k(x) = ±(−1)^i k^{2/(p−1)} u₁(kx − i) on [i/k, (i+1)/k].
NodalSolution nodal_solution(double p, std::size_t k, const Space& grid, int sign = 1);

/// Direct shooting: finds the slope whose k-th zero is at x = 1 and samples
/// that trajectory on the grid.  Cross-check for nodal_solution.
NodalSolution reshoot_nodal(double p, std::size_t k, const Space& grid, int sign = 1);

/// Least-squares slope of log y against log x.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace clark
