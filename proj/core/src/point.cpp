#include "clark/point.hpp"

#include <cmath>
#include <sstream>

#include "clark/errors.hpp"

namespace clark {

Space Space::l2(std::size_t dim) {
    if (dim == 0) throw InvalidParams("L2Truncation needs at least one coordinate");
    return Space{Kind::L2Truncation, dim, 0.0};
}

Space Space::h01(std::size_t interior) {
    if (interior == 0) throw InvalidParams("H01Grid needs at least one interior node");
    return Space{Kind::H01Grid, interior, 1.0 / static_cast<double>(interior + 1)};
}

std::string Space::describe() const {
    std::ostringstream os;
    if (kind == Kind::L2Truncation) {
        os << "L2Truncation(" << dim << ")";
    } else {
        os << "H01Grid(" << dim << ", h=" << mesh_width << ")";
    }
    return os.str();
}

Point::Point(Space space, std::vector<double> coords) : space_(space), coords_(std::move(coords)) {
    if (coords_.size() != space_.dim) {
        throw DimensionError("point has " + std::to_string(coords_.size()) +
                             " coordinates, space " + space_.describe() + " expects " +
                             std::to_string(space_.dim));
    }
    if (!all_finite()) throw InvalidPoint("point has non-finite coordinates");
}

Point::Point(Space space, std::initializer_list<double> coords)
    : Point(space, std::vector<double>(coords)) {}

Point Point::zero(Space space) { return Point(space, std::vector<double>(space.dim, 0.0)); }

bool Point::all_finite() const noexcept {
    for (double c : coords_) {
        if (!std::isfinite(c)) return false;
    }
    return true;
}

Point& Point::operator+=(const Point& other) {
    require_same_space(*this, other);
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += other.coords_[i];
    return *this;
}

Point& Point::operator-=(const Point& other) {
    require_same_space(*this, other);
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= other.coords_[i];
    return *this;
}

Point& Point::operator*=(double s) noexcept {
    for (double& c : coords_) c *= s;
    return *this;
}

Point axpy(double a, const Point& x, const Point& y) {
    require_same_space(x, y);
    Point out = y;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += a * x[i];
    return out;
}

void require_same_space(const Point& a, const Point& b) {
    if (!(a.space() == b.space())) {
        throw DimensionError("space mismatch: " + a.space().describe() + " vs " +
                             b.space().describe());
    }
}

double inner(const Point& a, const Point& b) {
    require_same_space(a, b);
    const auto& s = a.space();
    if (s.kind == Space::Kind::L2Truncation) {
        double acc = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
        return acc;
    }
    // Differences include the pinned boundary values u_0 = u_{m+1} = 0.
    double acc = 0.0;
    double pa = 0.0;
    double pb = 0.0;
    for (std::size_t i = 0; i <= a.size(); ++i) {
        const double ca = i < a.size() ? a[i] : 0.0;
        const double cb = i < b.size() ? b[i] : 0.0;
        acc += (ca - pa) * (cb - pb);
        pa = ca;
        pb = cb;
    }
    return acc / s.mesh_width;
}

double norm_sq(const Point& u) { return inner(u, u); }

double norm(const Point& u) { return std::sqrt(norm_sq(u)); }

double distance(const Point& a, const Point& b) {
    require_same_space(a, b);
    return norm(a - b);
}

std::vector<double> to_covector(const Point& g) {
    const auto& s = g.space();
    std::vector<double> c(g.values());
    if (s.kind == Space::Kind::L2Truncation) return c;
    const std::size_t m = g.size();
    for (std::size_t i = 0; i < m; ++i) {
        const double left = i > 0 ? g[i - 1] : 0.0;
        const double right = i + 1 < m ? g[i + 1] : 0.0;
        c[i] = (2.0 * g[i] - left - right) / s.mesh_width;
    }
    return c;
}

Point from_covector(const Space& space, std::span<const double> c) {
    if (c.size() != space.dim) throw DimensionError("covector size does not match space");
    if (space.kind == Space::Kind::L2Truncation) {
        return Point(space, std::vector<double>(c.begin(), c.end()));
    }
    // Solve T g = h c with T = tridiag(-1, 2, -1) (Thomas algorithm).
    const std::size_t m = c.size();
    const double h = space.mesh_width;
    std::vector<double> diag(m), rhs(m);
    diag[0] = 2.0;
    rhs[0] = h * c[0];
    for (std::size_t i = 1; i < m; ++i) {
        const double w = -1.0 / diag[i - 1];
        diag[i] = 2.0 + w;
        rhs[i] = h * c[i] - w * rhs[i - 1];
    }
    std::vector<double> g(m);
    g[m - 1] = rhs[m - 1] / diag[m - 1];
    for (std::size_t i = m - 1; i-- > 0;) g[i] = (rhs[i] + g[i + 1]) / diag[i];
    return Point(space, std::move(g));
}

double unit_coordinate_norm(const Space& space) {
    if (space.kind == Space::Kind::L2Truncation) return 1.0;
    return std::sqrt(2.0 / space.mesh_width);
}

}  // namespace clark
