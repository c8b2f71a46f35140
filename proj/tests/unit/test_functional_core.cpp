#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "clark/clark.hpp"
#include "helpers.hpp"

using namespace clark;

namespace {

// Model energy written out directly from its formula.
double model_by_hand(double t, const std::vector<double>& x) {
    const double m = t >= 1 ? 1.0 : (t <= -1 ? -1.0 : std::sin(std::numbers::pi * t / 2));
    const double ap = 2 + m;
    const double am = 2 - m;
    double v = 0.0;
    for (std::size_t j = 1; j <= x.size(); ++j) {
        const double xj = x[j - 1];
        const double w = std::pow(3.0, -static_cast<double>(j));
        v += 0.5 * xj * xj;
        if (xj > 0) v -= (2.0 / 3.0) * w * ap * std::pow(xj, 1.5);
        if (xj < 0) v -= (2.0 / 3.0) * w * am * std::pow(-xj, 1.5);
    }
    if (t > 1) v += (t - 1) * (t - 1);
    if (t < -1) v += (t + 1) * (t + 1);
    return v;
}

}  // namespace

TEST_CASE("point construction validates coordinates and spaces") {
    CHECK_THROWS_AS(Point(Space::l2(2), {1.0, std::nan("")}), InvalidPoint);
    CHECK_THROWS_AS(Point(Space::l2(2), {1.0, INFINITY}), InvalidPoint);
    CHECK_THROWS_AS(Point(Space::l2(3), {1.0, 2.0}), DimensionError);
    const Point a(Space::l2(2), {1.0, 2.0});
    const Point b(Space::h01(2), {1.0, 2.0});
    CHECK_THROWS_AS(inner(a, b), DimensionError);
    CHECK_THROWS_AS(distance(a, b), DimensionError);
}

TEST_CASE("norm axioms on random samples") {
    std::mt19937_64 rng(7);
    for (const Space s : {Space::l2(6), Space::h01(9)}) {
        for (int i = 0; i < 100; ++i) {
            const Point u = testutil::random_point(s, rng, -2, 2);
            const Point v = testutil::random_point(s, rng, -2, 2);
            const double a = std::uniform_real_distribution<double>(-5, 5)(rng);
            CHECK(std::abs(norm(a * u) - std::abs(a) * norm(u)) <= 1e-12 * (1 + std::abs(a) * norm(u)));
            CHECK(norm(u + v) <= norm(u) + norm(v) + 1e-12);
            CHECK(norm_sq(u) >= 0.0);
        }
    }
}

TEST_CASE("H01 inner product is the discrete Dirichlet form") {
    std::mt19937_64 rng(3);
    const Space s = Space::h01(12);
    CHECK(s.mesh_width == doctest::Approx(1.0 / 13.0));
    for (int i = 0; i < 20; ++i) {
        const Point u = testutil::random_point(s, rng, -1, 1);
        CHECK(norm_sq(u) == doctest::Approx(testutil::dirichlet_norm_sq(u.values(), s.mesh_width)).epsilon(1e-13));
        const Point back = from_covector(s, to_covector(u));
        CHECK(testutil::max_abs_diff(back, u) < 1e-12);
        for (std::size_t k = 0; k < s.dim; ++k) {
            std::vector<double> e(s.dim, 0.0);
            e[k] = 1.0;
            CHECK(to_covector(u)[k] == doctest::Approx(inner(u, Point(s, e))).epsilon(1e-12));
        }
    }
}

TEST_CASE("model values at hand-computed points") {
    const auto m = clark_model(ModelParams{3});
    CHECK(evaluate(*m, m->make_point(0.0, {})) == 0.0);
    CHECK(evaluate(*m, m->make_point(1.0, {1.0})) == doctest::Approx(-1.0 / 6.0).epsilon(1e-15));
    CHECK(evaluate(*m, m->make_point(2.0, {})) == doctest::Approx(1.0).epsilon(1e-15));
    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
        const Point u = testutil::random_point(m->space(), rng, -1.6, 1.6);
        const std::vector<double> x(u.values().begin() + 1, u.values().end());
        CHECK(evaluate(*m, u) == doctest::Approx(model_by_hand(u[0], x)).epsilon(1e-13));
    }
}

TEST_CASE("model partial derivative in x1") {
    const auto m = clark_model(ModelParams{3});
    const Point g = gradient(*m, m->make_point(1.0, {0.25}));
    CHECK(g[1] == doctest::Approx(-0.25).epsilon(1e-14));
}

TEST_CASE("gradient vanishes on the enumerated critical set") {
    for (std::size_t n : {1u, 2u, 4u}) {
        const auto m = clark_model(ModelParams{n});
        for (const auto& cp : enumerate_critical_set(ModelParams{n}, 11)) {
            CHECK(residual(*m, cp.point) < 1e-12);
        }
    }
}

TEST_CASE("argument validation") {
    const auto m = clark_model(ModelParams{2});
    CHECK_THROWS_AS(evaluate(*m, Point(Space::l2(2), {0.0, 0.0})), DimensionError);
    CHECK_THROWS_AS(gradient(*m, Point(Space::h01(3), {0.0, 0.0, 0.0})), DimensionError);
    Point bad = m->make_point(0.0, {});
    bad[1] = std::nan("");
    CHECK_THROWS_AS(evaluate(*m, bad), InvalidPoint);
    CHECK_THROWS_AS(residual(*m, bad), InvalidPoint);
}

TEST_CASE("finite-difference check of the model") {
    const auto m = clark_model(ModelParams{4});
    const auto rep = fd_gradient_check(*m, m->make_point(0.3, {0.5, -0.4, 0.2, 0.0}), 1e-6);
    CHECK(rep.max_rel_error < 1e-6);
    // x_4 = 0 is on a kink and must be reported, not silently checked.
    CHECK(std::find(rep.skipped.begin(), rep.skipped.end(), 4u) != rep.skipped.end());
    CHECK(rep.checked.size() + rep.skipped.size() == 5);
}

TEST_CASE("wrapper gradient inside the unit ball") {
    const Space g = Space::h01(10);
    const auto w = wrapper_functional(g);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 10; ++i) {
        Point u = testutil::random_point(g, rng, -1, 1);
        u *= 0.5 / norm(u);  // ‖u‖² = 0.25
        const double s = norm_sq(u);
        const Point expected = (4.0 * std::numbers::pi * std::sin(2.0 * std::numbers::pi * s)) * u;
        CHECK(norm(gradient(*w, u) - expected) <= 1e-12 * norm(expected));
        CHECK(fd_gradient_check(*w, u, 1e-6).max_rel_error < 1e-6);
    }
}

TEST_CASE("constant functional has zero finite-difference gradient") {
    const Space s = Space::l2(3);
    LambdaFunctional c(s, [](const Point&) { return 3.5; }, [s](const Point&) { return Point::zero(s); }, "const");
    const auto rep = fd_gradient_check(c, Point(s, {0.1, -2.0, 4.0}), 1e-6);
    CHECK(rep.max_rel_error == 0.0);
    for (double v : rep.fd_covector) CHECK(v == 0.0);
}

TEST_CASE("evenness of the shipped functionals") {
    std::mt19937_64 rng(21);
    const Space grid = Space::h01(15);
    const std::vector<FunctionalPtr> fs{clark_model(ModelParams{5}), wrapper_functional(grid),
                                        sublinear_energy(0.5, grid)};
    for (const auto& f : fs) {
        CHECK(f->even());
        for (int i = 0; i < 100; ++i) {
            const Point u = testutil::random_point(f->space(), rng, -1.5, 1.5);
            CHECK(std::abs(evaluate(*f, u) - evaluate(*f, -u)) <= 1e-12);
            CHECK(norm(gradient(*f, u) + gradient(*f, -u)) <= 1e-10);
        }
    }
}

TEST_CASE("gradient consistency at random kink-free points") {
    std::mt19937_64 rng(99);
    const Space grid = Space::h01(10);
    const std::vector<FunctionalPtr> fs{clark_model(ModelParams{4}), wrapper_functional(grid),
                                        sublinear_energy(0.5, grid)};
    for (const auto& f : fs) {
        int checked = 0;
        while (checked < 100) {
            const Point u = testutil::random_point(f->space(), rng, -1.2, 1.2);
            const auto rep = fd_gradient_check(*f, u, 1e-6);
            if (!rep.skipped.empty()) continue;
            CHECK(rep.max_rel_error < 1e-5);
            ++checked;
        }
    }
}

TEST_CASE("PS diagnostic on the structured sequence") {
    const auto m = clark_model(ModelParams{8});
    std::vector<Point> seq;
    for (std::size_t k = 1; k <= 8; ++k) {
        std::vector<double> x(k, 0.0);
        x[k - 1] = 9.0 * std::pow(3.0, -2.0 * static_cast<double>(k));
        seq.push_back(m->make_point(1.0, x));
    }
    const auto rep = ps_diagnostic(*m, seq, 0.0, 1e-4);
    REQUIRE(rep.value_trace.size() == 8);
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(rep.value_trace[i] < 0.0);
        CHECK(rep.residual_trace[i] < 1e-12);
        if (i > 0) CHECK(std::abs(rep.value_trace[i]) < std::abs(rep.value_trace[i - 1]));
    }
    CHECK(rep.is_ps_sequence);
    CHECK(rep.has_convergent_subsequence);
    REQUIRE(!rep.cluster_points.empty());
    CHECK(distance(rep.cluster_points.front(), m->make_point(1.0, {})) < 1e-4);
    CHECK(rep.note.find("runcation") != std::string::npos);
}

TEST_CASE("PS diagnostic on a constant and a non-PS sequence") {
    const auto m = clark_model(ModelParams{2});
    const Point crit = m->make_point(1.0, {1.0});
    const auto constant = ps_diagnostic(*m, std::vector<Point>(6, crit), -1.0 / 6.0, 1e-9);
    CHECK(constant.is_ps_sequence);
    CHECK(constant.has_convergent_subsequence);
    for (double r : constant.residual_trace) CHECK(r < 1e-12);

    // Values tend to 0 while every residual equals 0.1.
    const Space s = Space::l2(1);
    LambdaFunctional tilt(s, [](const Point& u) { return 0.1 * u[0]; },
                          [s](const Point&) { return Point(s, {0.1}); }, "tilt");
    std::vector<Point> seq;
    for (int k = 1; k <= 8; ++k) seq.emplace_back(s, std::vector<double>{std::pow(0.5, k)});
    const auto rep = ps_diagnostic(tilt, seq, 0.0, 1e-2);
    CHECK_FALSE(rep.is_ps_sequence);
    CHECK(rep.note.find("not a PS sequence at level c") != std::string::npos);

    CHECK_THROWS_AS(ps_diagnostic(*m, {}, 0.0, 1e-3), EmptyInput);
}
