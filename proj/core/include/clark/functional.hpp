#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "clark/point.hpp"

namespace clark {

enum class Smoothness { C1, C1NotC2 };

/// An energy on a finite-dimensional space together with its gradient.
///
/// `gradient` returns the Riesz representative of the derivative under the
/// inner product of `space()`: for every v, I′(u)v = ⟨gradient(u), v⟩.
/// Implementations may assume the argument has already been validated
/// (right space, finite coordinates); use the free functions `evaluate` and
/// `gradient` from client code.
class Functional {
public:
    virtual ~Functional() = default;

    [[nodiscard]] virtual const Space& space() const = 0;
    [[nodiscard]] virtual double value(const Point& u) const = 0;
    [[nodiscard]] virtual Point grad(const Point& u) const = 0;

    [[nodiscard]] virtual Smoothness smoothness() const { return Smoothness::C1; }
    [[nodiscard]] virtual bool even() const { return false; }
    [[nodiscard]] virtual std::string name() const { return "functional"; }

    /// Lower bound on the distance along coordinate `coord` from u to the
    /// nearest locus where the functional fails to be C².  Finite-difference
    /// checks skip coordinates closer than 10·h.
    [[nodiscard]] virtual double kink_distance(const Point& /*u*/, std::size_t /*coord*/) const {
        return std::numeric_limits<double>::infinity();
    }
};

using FunctionalPtr = std::shared_ptr<const Functional>;

/// Functional assembled from callables; used for synthetic test problems.
class LambdaFunctional final : public Functional {
public:
    using ValueFn = std::function<double(const Point&)>;
    using GradFn = std::function<Point(const Point&)>;

    LambdaFunctional(Space space, ValueFn value, GradFn grad, std::string name,
                     bool even = false, Smoothness smoothness = Smoothness::C1);

    [[nodiscard]] const Space& space() const override { return space_; }
    [[nodiscard]] double value(const Point& u) const override { return value_(u); }
    [[nodiscard]] Point grad(const Point& u) const override { return grad_(u); }
    [[nodiscard]] Smoothness smoothness() const override { return smoothness_; }
    [[nodiscard]] bool even() const override { return even_; }
    [[nodiscard]] std::string name() const override { return name_; }

private:
    Space space_;
    ValueFn value_;
    GradFn grad_;
    std::string name_;
    bool even_;
    Smoothness smoothness_;
};

/// Throws DimensionError / InvalidPoint if u cannot be fed to f.
void validate_argument(const Functional& f, const Point& u);

double evaluate(const Functional& f, const Point& u);
Point gradient(const Functional& f, const Point& u);

/// ‖∇I(u)‖ in the space norm (equals the dual norm of I′(u)).
double residual(const Functional& f, const Point& u);

struct RelErrorReport {
    double max_rel_error = 0.0;
    std::vector<double> fd_covector;        // central differences, per coordinate
    std::vector<double> analytic_covector;  // ⟨∇I(u), e_i⟩
    std::vector<std::size_t> checked;
    std::vector<std::size_t> skipped;       // coordinates within 10·h of a kink
};

/// Compares central differences of step h with the analytic gradient,
/// coordinate by coordinate, through the dual pairing ⟨∇I(u), e_i⟩.
/// The error is max_i |fd_i − an_i| / max(‖fd‖_∞, ‖an‖_∞) over checked
/// coordinates (0 when both vanish).
RelErrorReport fd_gradient_check(const Functional& f, const Point& u, double h);

struct PSReport {
    double target_level = 0.0;
    std::vector<double> value_trace;
    std::vector<double> residual_trace;
    std::vector<Point> cluster_points;
    bool has_convergent_subsequence = false;
    bool is_ps_sequence = false;
    std::string note;
};

/// Palais–Smale diagnostic for a finite sequence.  The tail is the last
/// ⌈len/4⌉ elements; the sequence counts as a PS sequence at level c when
/// every tail value is within tol of c and every tail residual is ≤ tol.
/// Clusters are chain components of the tail (links shorter than tol) with at
/// least two members (one for a single-element tail); a cluster makes the
/// subsequence convergent when all its members lie within tol of its centroid.
PSReport ps_diagnostic(const Functional& f, const std::vector<Point>& seq, double c, double tol);

}  // namespace clark
