#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "clark/critical_point.hpp"
#include "clark/functional.hpp"

namespace clark {

/// Transition profile μ(t) = sin(πt/2) on [−1,1], ±1 outside.  Odd, C¹,
/// strictly increasing on (−1,1), with μ′(±1) = 0.
double mu(double t);
double mu_prime(double t);
inline double a_plus(double t) { return 2.0 + mu(t); }
inline double a_minus(double t) { return 2.0 - mu(t); }
/// Penalty φ: 0 on [−1,1], (t−1)² above, (t+1)² below.
double phi(double t);
double phi_prime(double t);

struct ModelParams {
    std::size_t n = 4;  // number of x-coordinates kept; points are (t, x_1..x_n)
};

/// I(t,x) = ½Σx_j² − (2/3)Σ3^{−j}(a₊(t)(x_j)₊^{3/2} + a₋(t)(x_j)₋^{3/2}) + φ(t)
/// on L2Truncation(n+1), coordinate 0 holding t.
class ClarkModel final : public Functional {
public:
    explicit ClarkModel(ModelParams params);

    [[nodiscard]] const Space& space() const override { return space_; }
    [[nodiscard]] double value(const Point& u) const override;
    [[nodiscard]] Point grad(const Point& u) const override;
    [[nodiscard]] Smoothness smoothness() const override { return Smoothness::C1NotC2; }
    [[nodiscard]] bool even() const override { return true; }
    [[nodiscard]] std::string name() const override { return "clark_model"; }
    [[nodiscard]] double kink_distance(const Point& u, std::size_t coord) const override;

    [[nodiscard]] const ModelParams& params() const noexcept { return params_; }

    /// (t, x_1, …) padded with zeros to n coordinates.
    [[nodiscard]] Point make_point(double t, const std::vector<double>& x) const;

    /// ∂_t I along the branch x_j(t) selected by `pattern` (zeros beyond its length).
    [[nodiscard]] double branch_t_derivative(double t, const std::vector<Sign>& pattern) const;
    /// The point (t, x(t)) with x_j(t) = 0, 3^{−2j}a₊(t)², or −3^{−2j}a₋(t)².
    [[nodiscard]] Point branch_point(double t, const std::vector<Sign>& pattern) const;

private:
    ModelParams params_;
    Space space_;
    std::vector<double> weights_;  // 3^{−j}, j = 1..n
};

/// Throws InvalidParams when n < 1.
std::shared_ptr<const ClarkModel> clark_model(const ModelParams& params);

/// Positive-branch value at t = 1: 9·3^{−2j}.  Negative branch: −3^{−2j}.
double branch_plus(std::size_t j);
double branch_minus(std::size_t j);

/// Classifies a (near-)critical point of the model within `tol`.
CriticalLabel classify(const Point& u, double tol = 1e-6);

/// ‖(x_1..x_n)‖ of a model point.
double x_norm(const Point& u);

/// N (3ⁿ points at t = 1), −N (their negations, same order) and `z_samples`
/// evenly spaced points of Z, in that order.  N is in lexicographic sign
/// order with 0 < + < −, x_1 most significant.
std::vector<CriticalPoint> enumerate_critical_set(const ModelParams& params, std::size_t z_samples);

struct InteriorGrid {
    double delta = 1e-3;        // interior means |t| < 1 − delta
    std::size_t t_count = 5;    // seeds in t across [−(1−δ), 1−δ]
    std::size_t x_count = 3;    // seeds per x-coordinate across |x_j| ≤ 9·3^{−2j}
    std::size_t tail_j0_max = 6;
    double x_tol = 1e-6;
};

struct TailBoundRow {
    std::size_t j0 = 0;
    double tail = 0.0;          // Σ_{j>j0} 27·3^{−4j} (infinite series)
    double two_thirds = 0.0;    // (2/3)·3^{−4j0}
    double lower = 0.0;         // 3^{−j0}(3^{−2j0})^{3/2} = 3^{−4j0}
    double margin = 0.0;        // 1 − tail/lower
    bool holds = false;         // tail < two_thirds < lower
};

struct InteriorReport {
    std::vector<TailBoundRow> tail_bounds;
    std::size_t seeds = 0;
    std::size_t converged = 0;
    std::size_t not_converged = 0;
    std::size_t interior_converged = 0;
    double max_interior_x_norm = 0.0;
    std::vector<Point> violations;
    [[nodiscard]] bool ok() const;
};

struct SolveConfig;

/// Tail-bound inequality for j0 = 1..tail_j0_max plus a solver sweep from a
/// grid of interior seeds: every converged point with |t| < 1 − δ must have
/// ‖x‖ ≤ x_tol.
InteriorReport verify_no_interior_negatives(const ModelParams& params, const InteriorGrid& grid,
                                            const SolveConfig& cfg);

}  // namespace clark
