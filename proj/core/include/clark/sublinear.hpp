#pragma once

#include <memory>
#include <string>
#include <vector>

#include "clark/functional.hpp"

namespace clark {

/// Discrete J(u) = ½‖u‖_E² − (1/(p+1)) ∫|u|^{p+1} on an H01Grid (trapezoid
/// rule with zero boundary values).  Critical points solve
/// u_xx + |u|^{p−1}u = 0, u(0) = u(1) = 0 in the central-difference sense.
class SublinearEnergy final : public Functional {
public:
    SublinearEnergy(double p, Space grid);

    [[nodiscard]] const Space& space() const override { return space_; }
    [[nodiscard]] double value(const Point& u) const override;
    [[nodiscard]] Point grad(const Point& u) const override;
    [[nodiscard]] Smoothness smoothness() const override { return Smoothness::C1NotC2; }
    [[nodiscard]] bool even() const override { return true; }
    [[nodiscard]] std::string name() const override { return "sublinear_energy"; }
    [[nodiscard]] double kink_distance(const Point& u, std::size_t coord) const override;

    [[nodiscard]] double p() const noexcept { return p_; }

    /// h·Σ|u_i|^{p+1}.
    [[nodiscard]] double power_integral(const Point& u) const;

    /// Strong-form residual −u_xx − |u|^{p−1}u at each interior node.
    [[nodiscard]] std::vector<double> strong_residual(const Point& u) const;

private:
    double p_;
    Space space_;
};

/// Throws InvalidParams unless p ∈ (0,1) and the space is an H01Grid.
std::shared_ptr<const SublinearEnergy> sublinear_energy(double p, const Space& grid);

/// I(u) = 1 − cos(2π‖u‖²) for ‖u‖ ≤ 1 and J((‖u‖²−1)u) beyond.
class WrapperFunctional final : public Functional {
public:
    WrapperFunctional(Space grid, double p);

    [[nodiscard]] const Space& space() const override { return space_; }
    [[nodiscard]] double value(const Point& u) const override;
    [[nodiscard]] Point grad(const Point& u) const override;
    [[nodiscard]] Smoothness smoothness() const override { return Smoothness::C1NotC2; }
    [[nodiscard]] bool even() const override { return true; }
    [[nodiscard]] std::string name() const override { return "wrapper_functional"; }
    [[nodiscard]] double kink_distance(const Point& u, std::size_t coord) const override;

    /// The two pieces, each evaluated regardless of ‖u‖ (for seam checks).
    [[nodiscard]] double inner_value(const Point& u) const;
    [[nodiscard]] Point inner_grad(const Point& u) const;
    [[nodiscard]] double outer_value(const Point& u) const;
    [[nodiscard]] Point outer_grad(const Point& u) const;

    [[nodiscard]] const SublinearEnergy& inner_energy() const noexcept { return energy_; }

private:
    Space space_;
    SublinearEnergy energy_;
};

std::shared_ptr<const WrapperFunctional> wrapper_functional(const Space& grid, double p = 0.5);

}  // namespace clark
