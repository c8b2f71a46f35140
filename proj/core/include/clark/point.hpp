#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace clark {

/// Coordinate space a Point lives in.
///
/// `L2Truncation` is a finite section of ℓ² with the Euclidean inner product.
/// `H01Grid` holds the interior nodal values of a function on a uniform grid
/// over (0,1) with zero boundary values; its inner product is the discrete
/// Dirichlet form  ⟨u,v⟩ = Σ_{i=0}^{m} (u_{i+1}−u_i)(v_{i+1}−v_i)/h.
struct Space {
    enum class Kind { L2Truncation, H01Grid };

    Kind kind = Kind::L2Truncation;
    std::size_t dim = 0;      // number of stored coordinates
    double mesh_width = 0.0;  // h = 1/(dim+1) for H01Grid, unused otherwise

    static Space l2(std::size_t dim);
    /// Grid with `interior` unknowns, h = 1/(interior+1).
    static Space h01(std::size_t interior);

    [[nodiscard]] std::string describe() const;

    friend bool operator==(const Space&, const Space&) = default;
};

/// Finite coordinate vector tagged with its space.  Public constructors reject
/// non-finite coordinates; arithmetic results are not re-validated.
class Point {
public:
    Point() = default;
    Point(Space space, std::vector<double> coords);
    Point(Space space, std::initializer_list<double> coords);

    static Point zero(Space space);

    [[nodiscard]] const Space& space() const noexcept { return space_; }
    [[nodiscard]] std::size_t size() const noexcept { return coords_.size(); }
    [[nodiscard]] std::span<const double> coords() const noexcept { return coords_; }
    [[nodiscard]] std::span<double> coords() noexcept { return coords_; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return coords_; }

    double& operator[](std::size_t i) { return coords_[i]; }
    double operator[](std::size_t i) const { return coords_[i]; }

    [[nodiscard]] bool all_finite() const noexcept;

    Point& operator+=(const Point& other);
    Point& operator-=(const Point& other);
    Point& operator*=(double s) noexcept;

    friend Point operator+(Point a, const Point& b) { return a += b; }
    friend Point operator-(Point a, const Point& b) { return a -= b; }
    friend Point operator*(double s, Point a) { return a *= s; }
    friend Point operator*(Point a, double s) { return a *= s; }
    friend Point operator-(Point a) { return a *= -1.0; }

    friend bool operator==(const Point&, const Point&) = default;

private:
    Space space_{};
    std::vector<double> coords_;
};

/// Returns a·x + y.
Point axpy(double a, const Point& x, const Point& y);

/// Throws DimensionError unless both points share a space.
void require_same_space(const Point& a, const Point& b);

double inner(const Point& a, const Point& b);
double norm(const Point& u);
double norm_sq(const Point& u);
double distance(const Point& a, const Point& b);

/// Coordinates of the functional v ↦ ⟨g, v⟩ in the coordinate basis, i.e.
/// entry i is ⟨g, e_i⟩.  Identity on L2Truncation, T·g/h on H01Grid.
std::vector<double> to_covector(const Point& g);

/// Inverse of to_covector: the Point g with ⟨g, e_i⟩ = c_i for every i.
Point from_covector(const Space& space, std::span<const double> c);

/// Norm of the unit coordinate vector e_i in the space (the same for all i).
double unit_coordinate_norm(const Space& space);

}  // namespace clark
