#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "clark/point.hpp"

namespace clark {

/// Finite sample of a compact set.  When `symmetric` is set, the negation of
/// every point is also present (to 1e−12); `make_cloud` enforces this.
struct Cloud {
    std::vector<Point> points;
    bool symmetric = false;

    [[nodiscard]] bool empty() const noexcept { return points.empty(); }
    [[nodiscard]] std::size_t size() const noexcept { return points.size(); }
};

Cloud make_cloud(std::vector<Point> points, bool symmetric = false);

/// True when every point's negation is in the cloud within `tol`.
bool is_symmetric(const std::vector<Point>& points, double tol = 1e-12);

/// dist(u, cloud) = min over cloud points.  Throws EmptyInput on an empty cloud.
double distance_to(const Point& u, const Cloud& cloud);

/// Disjoint-set forest with path halving and union by size.
class UnionFind {
public:
    explicit UnionFind(std::size_t n);
    std::size_t find(std::size_t i);
    bool unite(std::size_t a, std::size_t b);

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;
};

/// Index partition.  Each block is sorted; blocks are ordered by their
/// smallest index.
using Partition = std::vector<std::vector<std::size_t>>;

/// Components of N_δ(cloud) traced on the cloud: i ~ j iff ‖p_i − p_j‖ < 2δ,
/// closed under chaining.  Throws PreconditionError for δ ≤ 0.
Partition components(const Cloud& cloud, double delta);

/// Indices of the block containing the point nearest the origin (which must
/// be within 1e−12 of 0, else OriginMissing).
std::vector<std::size_t> component_of_origin_indices(const Cloud& cloud, double delta);
Cloud component_of_origin(const Cloud& cloud, double delta);

struct Lemma21Level {
    double delta = 0.0;
    std::vector<std::size_t> origin_component;
    bool nested_in_previous = true;
};

struct Lemma21Report {
    std::vector<Lemma21Level> levels;
    /// Origin component at the finest δ (the sampled approximation of D̂).
    std::vector<std::size_t> stabilized;
    /// First schedule index from which the origin component no longer changes.
    std::size_t stabilized_from = 0;
    /// Finest-level set agrees with an independent breadth-first search.
    bool matches_direct_search = false;
};

/// Origin components along a strictly decreasing schedule, checking nesting
/// (a violation is an InternalError).
Lemma21Report lemma21_check(const Cloud& cloud, const std::vector<double>& delta_schedule);

/// Hausdorff distance max(sup_a d(a,B), sup_b d(b,A)).  Throws EmptyInput.
double hausdorff(const Cloud& a, const Cloud& b);

/// Description of a closed symmetric set with a certified genus.
struct SetSpec {
    enum class Kind { CoordinateSphere, FinitePairCloud, Union, SymmetricNeighborhood };

    Kind kind = Kind::CoordinateSphere;
    std::size_t k = 0;  // sphere dimension count (S^{k−1} ⊂ R^k)
    double radius = 0.0;
    Cloud cloud;
    std::shared_ptr<const SetSpec> left;
    std::shared_ptr<const SetSpec> right;

    static SetSpec coordinate_sphere(std::size_t k, double radius);
    static SetSpec pair_cloud(Cloud cloud);
    static SetSpec union_of(SetSpec a, SetSpec b);
    static SetSpec neighborhood(Cloud cloud, double radius);
};

struct GenusCertificate {
    int lower = 1;
    int upper = 1;
    std::string lower_witness;
    std::string upper_witness;
};

/// Genus bounds for the certified families.  Throws NotInGenusFamily when the
/// set contains the origin or is not symmetric.
GenusCertificate genus_certificate(const SetSpec& spec);

}  // namespace clark
