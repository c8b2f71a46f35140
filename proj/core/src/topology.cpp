#include "clark/topology.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <sstream>

#include "clark/errors.hpp"

namespace clark {

namespace {

constexpr double kOriginTol = 1e-12;

std::size_t nearest_to_origin(const Cloud& cloud) {
    std::size_t best = 0;
    double best_norm = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const double n = norm(cloud.points[i]);
        if (n < best_norm) {
            best_norm = n;
            best = i;
        }
    }
    if (!(best_norm <= kOriginTol)) throw OriginMissing("cloud does not contain the origin");
    return best;
}

Partition collect(UnionFind& uf, std::size_t n) {
    std::vector<std::size_t> block_of(n, std::numeric_limits<std::size_t>::max());
    Partition blocks;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t root = uf.find(i);
        if (block_of[root] == std::numeric_limits<std::size_t>::max()) {
            block_of[root] = blocks.size();
            blocks.emplace_back();
        }
        blocks[block_of[root]].push_back(i);
    }
    return blocks;
}

// Components of the closed r-neighbourhood: links with distance ≤ 2r.
Partition closed_components(const Cloud& cloud, double r) {
    UnionFind uf(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        for (std::size_t j = i + 1; j < cloud.size(); ++j) {
            if (distance(cloud.points[i], cloud.points[j]) <= 2.0 * r) uf.unite(i, j);
        }
    }
    return collect(uf, cloud.size());
}

void require_genus_cloud(const Cloud& cloud) {
    if (cloud.empty()) throw EmptyInput("genus of an empty set is 0, outside the certified families");
    if (!is_symmetric(cloud.points)) throw NotInGenusFamily("cloud is not symmetric about 0");
    for (const Point& p : cloud.points) {
        if (norm(p) <= kOriginTol) throw NotInGenusFamily("cloud contains the origin");
    }
}

// Direction w with ⟨w, p⟩ ≠ 0 on the whole cloud; coordinate axes first, then
// a deterministic sequence of generic directions.
std::vector<double> separating_direction(const Cloud& cloud) {
    const std::size_t dim = cloud.points.front().size();
    auto separates = [&](const std::vector<double>& w) {
        for (const Point& p : cloud.points) {
            double dot = 0.0;
            for (std::size_t i = 0; i < dim; ++i) dot += w[i] * p[i];
            if (std::abs(dot) <= 1e-12) return false;
        }
        return true;
    };
    std::vector<double> w(dim, 0.0);
    for (std::size_t axis = 0; axis < dim; ++axis) {
        std::fill(w.begin(), w.end(), 0.0);
        w[axis] = 1.0;
        if (separates(w)) return w;
    }
    for (int attempt = 1; attempt < 10000; ++attempt) {
        for (std::size_t i = 0; i < dim; ++i) {
            w[i] = std::sin(1.0 + 0.7548776662466927 * attempt * static_cast<double>(i + 1) +
                            0.5698402909980532 * attempt);
        }
        if (separates(w)) return w;
    }
    throw InternalError("no separating direction found for a finite origin-free cloud");
}

}  // namespace

Cloud make_cloud(std::vector<Point> points, bool symmetric) {
    for (std::size_t i = 1; i < points.size(); ++i) require_same_space(points[0], points[i]);
    if (symmetric && !is_symmetric(points)) {
        throw PreconditionError("cloud declared symmetric but a negation is missing");
    }
    return Cloud{std::move(points), symmetric};
}

bool is_symmetric(const std::vector<Point>& points, double tol) {
    for (const Point& p : points) {
        const Point neg = -p;
        const bool found = std::any_of(points.begin(), points.end(),
                                       [&](const Point& q) { return distance(q, neg) <= tol; });
        if (!found) return false;
    }
    return true;
}

double distance_to(const Point& u, const Cloud& cloud) {
    if (cloud.empty()) throw EmptyInput("distance to an empty cloud");
    double best = std::numeric_limits<double>::infinity();
    for (const Point& p : cloud.points) best = std::min(best, distance(u, p));
    return best;
}

UnionFind::UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t UnionFind::find(std::size_t i) {
    while (parent_[i] != i) {
        parent_[i] = parent_[parent_[i]];
        i = parent_[i];
    }
    return i;
}

bool UnionFind::unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
}

Partition components(const Cloud& cloud, double delta) {
    if (!(delta > 0.0)) throw PreconditionError("components: delta must be positive");
    UnionFind uf(cloud.size());
    const double link = 2.0 * delta;
    // Sweep in the first coordinate: only pairs closer than `link` there can link.
    std::vector<std::size_t> order(cloud.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto first = [&](std::size_t i) { return cloud.points[i].size() == 0 ? 0.0 : cloud.points[i][0]; };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return first(a) < first(b); });
    for (std::size_t a = 0; a < order.size(); ++a) {
        for (std::size_t b = a + 1; b < order.size() && first(order[b]) - first(order[a]) < link; ++b) {
            if (distance(cloud.points[order[a]], cloud.points[order[b]]) < link) uf.unite(order[a], order[b]);
        }
    }
    return collect(uf, cloud.size());
}

std::vector<std::size_t> component_of_origin_indices(const Cloud& cloud, double delta) {
    if (cloud.empty()) throw OriginMissing("empty cloud has no origin component");
    const std::size_t origin = nearest_to_origin(cloud);
    for (auto& block : components(cloud, delta)) {
        if (std::binary_search(block.begin(), block.end(), origin)) return block;
    }
    throw InternalError("origin index missing from partition");
}

Cloud component_of_origin(const Cloud& cloud, double delta) {
    Cloud out;
    for (std::size_t i : component_of_origin_indices(cloud, delta)) {
        out.points.push_back(cloud.points[i]);
    }
    out.symmetric = cloud.symmetric && is_symmetric(out.points);
    return out;
}

Lemma21Report lemma21_check(const Cloud& cloud, const std::vector<double>& delta_schedule) {
    if (delta_schedule.empty()) throw PreconditionError("lemma21_check: empty schedule");
    for (std::size_t i = 0; i < delta_schedule.size(); ++i) {
        if (!(delta_schedule[i] > 0.0)) throw PreconditionError("schedule entries must be positive");
        if (i > 0 && !(delta_schedule[i] < delta_schedule[i - 1])) {
            throw PreconditionError("schedule must be strictly decreasing");
        }
    }

    Lemma21Report report;
    for (double delta : delta_schedule) {
        Lemma21Level level;
        level.delta = delta;
        level.origin_component = component_of_origin_indices(cloud, delta);
        if (!report.levels.empty()) {
            const auto& prev = report.levels.back().origin_component;
            level.nested_in_previous = std::includes(prev.begin(), prev.end(),
                                                     level.origin_component.begin(),
                                                     level.origin_component.end());
            if (!level.nested_in_previous) {
                throw InternalError("origin component grew when delta shrank");
            }
        }
        report.levels.push_back(std::move(level));
    }

    report.stabilized = report.levels.back().origin_component;
    report.stabilized_from = report.levels.size() - 1;
    while (report.stabilized_from > 0 &&
           report.levels[report.stabilized_from - 1].origin_component == report.stabilized) {
        --report.stabilized_from;
    }

    // Independent breadth-first search at the finest delta.
    const double link = 2.0 * delta_schedule.back();
    const std::size_t origin = nearest_to_origin(cloud);
    std::vector<bool> seen(cloud.size(), false);
    std::deque<std::size_t> queue{origin};
    seen[origin] = true;
    while (!queue.empty()) {
        const std::size_t i = queue.front();
        queue.pop_front();
        for (std::size_t j = 0; j < cloud.size(); ++j) {
            if (!seen[j] && distance(cloud.points[i], cloud.points[j]) < link) {
                seen[j] = true;
                queue.push_back(j);
            }
        }
    }
    std::vector<std::size_t> reached;
    for (std::size_t j = 0; j < cloud.size(); ++j) {
        if (seen[j]) reached.push_back(j);
    }
    report.matches_direct_search = reached == report.stabilized;
    return report;
}

double hausdorff(const Cloud& a, const Cloud& b) {
    if (a.empty() || b.empty()) throw EmptyInput("hausdorff distance needs nonempty clouds");
    double out = 0.0;
    for (const Point& p : a.points) out = std::max(out, distance_to(p, b));
    for (const Point& q : b.points) out = std::max(out, distance_to(q, a));
    return out;
}

SetSpec SetSpec::coordinate_sphere(std::size_t k, double radius) {
    SetSpec s;
    s.kind = Kind::CoordinateSphere;
    s.k = k;
    s.radius = radius;
    return s;
}

SetSpec SetSpec::pair_cloud(Cloud cloud) {
    SetSpec s;
    s.kind = Kind::FinitePairCloud;
    s.cloud = std::move(cloud);
    return s;
}

SetSpec SetSpec::union_of(SetSpec a, SetSpec b) {
    SetSpec s;
    s.kind = Kind::Union;
    s.left = std::make_shared<const SetSpec>(std::move(a));
    s.right = std::make_shared<const SetSpec>(std::move(b));
    return s;
}

SetSpec SetSpec::neighborhood(Cloud cloud, double radius) {
    SetSpec s;
    s.kind = Kind::SymmetricNeighborhood;
    s.cloud = std::move(cloud);
    s.radius = radius;
    return s;
}

GenusCertificate genus_certificate(const SetSpec& spec) {
    GenusCertificate cert;
    switch (spec.kind) {
        case SetSpec::Kind::CoordinateSphere: {
            if (spec.k == 0) throw InvalidParams("coordinate sphere needs k >= 1");
            if (!(spec.radius > 0.0)) throw NotInGenusFamily("sphere of radius <= 0 meets the origin");
            const int k = static_cast<int>(spec.k);
            cert = {k, k, "Borsuk-Ulam: no odd map S^" + std::to_string(k - 1) + " -> R^" +
                              std::to_string(k - 1) + "\\{0}",
                    "identity map into R^" + std::to_string(k) + "\\{0}"};
            break;
        }
        case SetSpec::Kind::FinitePairCloud: {
            require_genus_cloud(spec.cloud);
            const auto w = separating_direction(spec.cloud);
            std::ostringstream os;
            os << "odd map x -> <w,x> into R\\{0}, w = (";
            for (std::size_t i = 0; i < w.size(); ++i) os << (i ? ", " : "") << w[i];
            os << ")";
            cert = {1, 1, "nonempty symmetric set", os.str()};
            break;
        }
        case SetSpec::Kind::Union: {
            if (!spec.left || !spec.right) throw InvalidParams("union needs two operands");
            const auto a = genus_certificate(*spec.left);
            const auto b = genus_certificate(*spec.right);
            cert.lower = std::max(a.lower, b.lower);
            cert.upper = a.upper + b.upper;
            cert.lower_witness = "monotonicity: max of operand lower bounds";
            cert.upper_witness = "subadditivity: " + a.upper_witness + " + " + b.upper_witness;
            break;
        }
        case SetSpec::Kind::SymmetricNeighborhood: {
            require_genus_cloud(spec.cloud);
            if (!(spec.radius > 0.0)) throw InvalidParams("neighbourhood radius must be positive");
            const Point origin = Point::zero(spec.cloud.points.front().space());
            if (distance_to(origin, spec.cloud) <= spec.radius) {
                throw NotInGenusFamily("closed neighbourhood contains the origin");
            }
            bool antipodal_link = false;
            for (const auto& block : closed_components(spec.cloud, spec.radius)) {
                for (std::size_t i : block) {
                    const Point neg = -spec.cloud.points[i];
                    for (std::size_t j : block) {
                        antipodal_link = antipodal_link ||
                                         distance(spec.cloud.points[j], neg) <= kOriginTol;
                    }
                }
            }
            cert.lower = 1;
            cert.lower_witness = "monotonicity: contains a pair {q, -q}";
            if (!antipodal_link) {
                cert.upper = 1;
                cert.upper_witness =
                    "sign map: +1 on one member of each antipodal pair of components, -1 on the other";
            } else {
                cert.upper = static_cast<int>(spec.cloud.points.front().size());
                cert.upper_witness = "identity map into R^" + std::to_string(cert.upper) + "\\{0}";
            }
            break;
        }
    }
    return cert;
}

}  // namespace clark
