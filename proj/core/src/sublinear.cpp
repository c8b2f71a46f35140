#include "clark/sublinear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "clark/errors.hpp"

namespace clark {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_grid(const Space& grid) {
    if (grid.kind != Space::Kind::H01Grid) throw InvalidParams("expected an H01Grid space");
}

void require_exponent(double p) {
    if (!(p > 0.0 && p < 1.0)) throw InvalidParams("sublinear exponent p must lie in (0,1)");
}

}  // namespace

SublinearEnergy::SublinearEnergy(double p, Space grid) : p_(p), space_(grid) {
    require_exponent(p);
    require_grid(grid);
}

std::shared_ptr<const SublinearEnergy> sublinear_energy(double p, const Space& grid) {
    return std::make_shared<const SublinearEnergy>(p, grid);
}

double SublinearEnergy::power_integral(const Point& u) const {
    double acc = 0.0;
    for (double c : u.coords()) acc += std::pow(std::abs(c), p_ + 1.0);
    return space_.mesh_width * acc;
}

double SublinearEnergy::value(const Point& u) const {
    return 0.5 * norm_sq(u) - power_integral(u) / (p_ + 1.0);
}

Point SublinearEnergy::grad(const Point& u) const {
    // Coordinate partials: (T u)_i / h − h·sign(u_i)|u_i|^p.
    auto c = to_covector(u);
    const double h = space_.mesh_width;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double a = std::abs(u[i]);
        const double f = a > 0.0 ? std::copysign(std::pow(a, p_), u[i]) : 0.0;
        c[i] -= h * f;
    }
    return from_covector(space_, c);
}

double SublinearEnergy::kink_distance(const Point& u, std::size_t coord) const {
    return std::abs(u[coord]);
}

std::vector<double> SublinearEnergy::strong_residual(const Point& u) const {
    validate_argument(*this, u);
    const double h = space_.mesh_width;
    const std::size_t m = u.size();
    std::vector<double> r(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double left = i > 0 ? u[i - 1] : 0.0;
        const double right = i + 1 < m ? u[i + 1] : 0.0;
        const double a = std::abs(u[i]);
        const double f = a > 0.0 ? std::copysign(std::pow(a, p_), u[i]) : 0.0;
        r[i] = -(left - 2.0 * u[i] + right) / (h * h) - f;
    }
    return r;
}

WrapperFunctional::WrapperFunctional(Space grid, double p) : space_(grid), energy_(p, grid) {}

std::shared_ptr<const WrapperFunctional> wrapper_functional(const Space& grid, double p) {
    return std::make_shared<const WrapperFunctional>(grid, p);
}

double WrapperFunctional::inner_value(const Point& u) const {
    return 1.0 - std::cos(kTwoPi * norm_sq(u));
}

Point WrapperFunctional::inner_grad(const Point& u) const {
    return (2.0 * std::numbers::pi * 2.0 * std::sin(kTwoPi * norm_sq(u))) * u;
}

double WrapperFunctional::outer_value(const Point& u) const {
    const double s = norm_sq(u);
    return energy_.value((s - 1.0) * u);
}

Point WrapperFunctional::outer_grad(const Point& u) const {
    // d/du J((s−1)u) = (s−1)∇J(w) + 2⟨∇J(w), u⟩u,  w = (s−1)u.
    const double s = norm_sq(u);
    const Point gw = energy_.grad((s - 1.0) * u);
    return axpy(2.0 * inner(gw, u), u, (s - 1.0) * gw);
}

double WrapperFunctional::value(const Point& u) const {
    return norm_sq(u) <= 1.0 ? inner_value(u) : outer_value(u);
}

Point WrapperFunctional::grad(const Point& u) const {
    return norm_sq(u) <= 1.0 ? inner_grad(u) : outer_grad(u);
}

double WrapperFunctional::kink_distance(const Point& u, std::size_t coord) const {
    const double seam = std::abs(norm(u) - 1.0) / unit_coordinate_norm(space_);
    if (norm_sq(u) <= 1.0) return seam;
    return std::min(seam, std::abs(u[coord]));
}

}  // namespace clark
