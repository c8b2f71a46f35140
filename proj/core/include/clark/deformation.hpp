#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "clark/errors.hpp"
#include "clark/functional.hpp"
#include "clark/solvers.hpp"
#include "clark/topology.hpp"

namespace clark {

/// Even test functional on R²:  I(x, y) = −x²(x² − q²)² + y².
/// Zero-value critical points at 0 and ±(q, 0); negative minima at
/// (±q/√3, 0) with value −4q⁶/27.
FunctionalPtr two_cluster_functional(double q = 1.0);

struct SampleSpec {
    std::vector<double> lo;  // sampling box
    std::vector<double> hi;
    std::size_t count = 20000;
    std::uint64_t seed = 1;
    double rho = 0.1;              // starting band depth [−ρ, 0]
    bool shrink_rho = true;        // halve ρ until the band is critical-point free
    std::size_t polish_starts = 8; // lowest-gradient samples refined by descent and residual minimization
    double safety = 0.9;
};

struct BoundsSample {
    Point point;
    double energy = 0.0;
    double grad_norm = 0.0;
    double dist_K0 = 0.0;
    double dist_K0e = 0.0;
};

/// Sampled (empirical, not certified) constants ρ, ν and ν_ε(ε).
struct BoundsEstimate {
    double rho = 0.0;
    double nu = 0.0;
    double r = 0.0;
    double safety = 0.9;
    std::vector<BoundsSample> samples;

    /// safety × inf ‖∇I‖ over sampled [−ρ ≤ I ≤ −ε] ∖ N_r(K_{0,e}), capped at ν.
    [[nodiscard]] double nu_eps(double eps) const;
};

/// Throws SetupInconsistent when a critical point is found in
/// [−ρ ≤ I ≤ 0] ∖ N_r(K₀) (after shrinking ρ, if allowed).
BoundsEstimate estimate_bounds(const Functional& f, const Cloud& K0_cloud, const Cloud& K0e_cloud,
                               double r, const SampleSpec& spec);

/// Constants and clouds of one deformation.  Immutable after construction.
struct DeformationSetup {
    FunctionalPtr f;
    Cloud K0i_cloud;
    Cloud K0e_cloud;
    double r = 0.0;
    double rho = 0.0;
    double nu = 0.0;
    double nu_eps = 0.0;
    double d = 0.0;
    double eps = 0.0;
    double delta0 = 0.0;

    [[nodiscard]] double flow_time() const { return 2.0 * d / nu_eps; }
};

/// Computes d = min(ρ, νr)/3 and validates r ∈ (0, δ₀/3], ε ∈ (0, d/2],
/// ν_ε ∈ (0, ν], dist(K_{0,i}, K_{0,e}) ≥ 2δ₀ and symmetry of K_{0,e}.
DeformationSetup make_deformation_setup(FunctionalPtr f, Cloud K0i_cloud, Cloud K0e_cloud,
                                        double delta0, double r, double rho, double nu,
                                        double nu_eps, double eps);

/// φ₁: 0 on [I ≤ −2d], 1 on [I ≥ −d], linear in I between.
double energy_cutoff(const DeformationSetup& setup, double energy);
/// φ₂: 0 on N_r(K_{0,e}), 1 outside N_{2r}(K_{0,e}), linear in distance between.
double distance_cutoff(const DeformationSetup& setup, double dist);

/// Ṽ(u) = φ₁(u)φ₂(u)∇I(u)/‖∇I(u)‖.  Requires I(u) < 0.
Point pseudo_gradient(const DeformationSetup& setup, const Point& u);

struct FlowTrace {
    std::vector<double> times;
    std::vector<Point> points;
    std::vector<double> energies;
};

class FlowIntegrationError : public IntegrationError {
public:
    FlowIntegrationError(const std::string& what, FlowTrace partial)
        : IntegrationError(what), trace(std::move(partial)) {}
    FlowTrace trace;
};

/// Integrates dη/dt = −Ṽ(η) on [0, T] with Bogacki–Shampine steps (local
/// error 1e−10, step ≤ 0.01·r); steps that raise the energy are rejected.
FlowTrace flow(const DeformationSetup& setup, const Point& u, double T);

class DeformationFailure : public Error {
public:
    DeformationFailure(const std::string& what, FlowTrace t) : Error(what), trace(std::move(t)) {}
    FlowTrace trace;
};

/// η(T_ε, u) with T_ε = 2d/ν_ε.  Requires I(u) ≤ −ε; throws DeformationFailure
/// when the end point lies neither in [I ≤ −d] nor in N_{3r}(K_{0,e}).
Point eta_epsilon(const DeformationSetup& setup, const Point& u);

struct RetryResult {
    Point point;
    double nu_eps_used = 0.0;
    std::size_t retries = 0;
};

/// eta_epsilon, halving ν_ε after each DeformationFailure (at most `max_retries` times).
RetryResult eta_epsilon_with_retry(const DeformationSetup& setup, const Point& u,
                                   std::size_t max_retries = 4);

struct AnnulusCrossing {
    double t0 = 0.0;  // last time at distance ≤ 2r before the exit
    double t1 = 0.0;  // first time at distance ≥ 3r
    double energy_drop = 0.0;
};

/// Passages of the trace from within N̄_{2r}(K_{0,e}) out to distance ≥ 3r.
std::vector<AnnulusCrossing> annulus_crossings(const DeformationSetup& setup, const FlowTrace& trace);

/// Two-cluster scenario on R²: K_{0,i} = {0}, K_{0,e} = {±(q,0)}, with ρ, ν
/// and ν_ε sampled by estimate_bounds on the box [−1.5q, 1.5q] × [−q, q].
struct SyntheticSpec {
    double q = 1.0;
    double delta0 = 0.5;
    double r = 0.1;
    double eps_fraction = 0.25;  // ε = eps_fraction · d
    std::size_t bound_samples = 20000;
    std::uint64_t seed = 1;
};

struct SyntheticDeformation {
    DeformationSetup setup;
    BoundsEstimate bounds;
};

SyntheticDeformation synthetic_two_cluster_setup(const SyntheticSpec& spec);

/// `count` points of [I ≤ −ε] drawn uniformly from the box by rejection; a
/// `band_fraction` share is taken from the active band [−2d ≤ I ≤ −ε].
/// Throws PreconditionError when the rejection budget runs out.
std::vector<Point> sample_sublevel(const DeformationSetup& setup, const std::vector<double>& lo,
                                   const std::vector<double>& hi, std::size_t count,
                                   std::uint64_t seed, double band_fraction = 0.5);

struct ContractReport {
    std::size_t samples = 0;
    std::size_t inclusion_failures = 0;  // DeformationFailure after all retries
    std::size_t retried = 0;             // samples that needed a smaller ν_ε
    double max_odd_error = 0.0;          // ‖η_ε(−u) + η_ε(u)‖
    double max_speed_ratio = 0.0;        // max ‖Δη‖/Δt over every trace step
    double max_energy_increase = 0.0;    // max E_{k+1} − E_k over every trace
    std::size_t crossings = 0;           // annulus crossings with end energy > −d
    std::size_t crossing_violations = 0; // of those, energy drop < ν·r/2

    [[nodiscard]] bool ok() const;
};

/// Runs η_ε (with retry) on every point and on its negation and checks the
/// inclusion, oddness, speed bound, energy monotonicity and annulus drop.
ContractReport verify_deformation_contract(const DeformationSetup& setup, const std::vector<Point>& points,
                                           std::size_t threads = 1);

}  // namespace clark
