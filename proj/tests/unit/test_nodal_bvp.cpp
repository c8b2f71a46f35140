#include <doctest.h>

#include <cmath>

#include "clark/clark.hpp"

using namespace clark;

namespace {

// First zero of u'' = -|u|^{p-1}u, u(0) = 0, u'(0) = 1, from the energy
// integral: T = 2A·B(1/(p+1), 1/2)/(p+1) with A = ((p+1)/2)^{1/(p+1)}.
double first_zero(double p) {
    const double a = std::pow((p + 1.0) / 2.0, 1.0 / (p + 1.0));
    return 2.0 * a * std::beta(1.0 / (p + 1.0), 0.5) / (p + 1.0);
}

}  // namespace

TEST_CASE("shooting matches the energy-integral quadrature") {
    for (double p : {0.3, 0.5, 0.7}) {
        const auto s = shoot(p, 1.0, 20.0);
        REQUIRE(s.crossings.size() == 1);
        CHECK(s.crossings[0] == doctest::Approx(first_zero(p)).epsilon(1e-8));
        CHECK(s.max_energy_drift < 1e-8);
        CHECK(std::abs(s.trajectory.u(s.crossings[0])) < 1e-9);
    }
}

TEST_CASE("zero time scales with the slope") {
    const double p = 0.5;
    const double t1 = shoot(p, 1.0, 20.0).crossings[0];
    const double t8 = shoot(p, 8.0, 40.0).crossings[0];
    // T ∝ s^{(1-p)/(1+p)} = s^{1/3}.
    CHECK(t8 / t1 == doctest::Approx(2.0).epsilon(1e-8));
    const auto three = shoot(p, 1.0, 20.0, 3);
    REQUIRE(three.crossings.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(three.crossings[i] == doctest::Approx((i + 1) * t1).epsilon(1e-8));
}

TEST_CASE("shooting errors") {
    CHECK_THROWS_AS(shoot(0.5, 1.0, 1.0), NoCrossing);
    CHECK_THROWS_AS(shoot(0.5, 0.0, 10.0), PreconditionError);
    CHECK_THROWS_AS(shoot(1.0, 1.0, 10.0), InvalidParams);
    CHECK_THROWS_AS(shoot(0.0, 1.0, 10.0), InvalidParams);
    const auto s = shoot(0.5, 1.0, 20.0);
    CHECK_THROWS_AS((void)s.trajectory.state(s.trajectory.end_time() + 1.0), PreconditionError);
    CHECK_THROWS_AS(nodal_solution(0.5, 0, Space::h01(50)), PreconditionError);
    CHECK_THROWS_AS(nodal_solution(0.5, 1, Space::l2(50)), InvalidParams);
}

TEST_CASE("base solution") {
    const Space g = Space::h01(2000);
    for (double p : {0.3, 0.5, 0.7}) {
        const auto u = base_solution(p, g);
        CHECK(u.k == 1);
        CHECK(u.nehari_residual < 1e-6);
        CHECK(u.j_value == doctest::Approx(-(1.0 - p) / (2.0 * (p + 1.0)) * u.energy_norm_sq).epsilon(1e-6));
        CHECK(u.zeros.empty());
        for (std::size_t i = 0; i < g.dim; ++i) CHECK(u.grid_values[i] > 0.0);
        CHECK(u.grid_nehari_residual < 1e-5);
    }
}

TEST_CASE("nodal family: Nehari identity, zeros and scaling") {
    const Space g = Space::h01(2000);
    for (double p : {0.3, 0.5, 0.7}) {
        const auto u1 = nodal_solution(p, 1, g);
        std::vector<double> ks;
        std::vector<double> norms;
        double prev_j = -INFINITY;
        for (std::size_t k = 1; k <= 6; ++k) {
            const auto u = nodal_solution(p, k, g);
            const double kd = static_cast<double>(k);
            CHECK(u.nehari_residual < 1e-6);
            REQUIRE(u.zeros.size() == k - 1);
            for (std::size_t i = 0; i + 1 < k; ++i) CHECK(u.zeros[i] == doctest::Approx((i + 1.0) / kd).epsilon(1e-12));
            // Grid maximum: the node nearest the peak moves with k, an O(h²) offset.
            CHECK(u.sup_norm == doctest::Approx(std::pow(kd, 2.0 / (p - 1.0)) * u1.sup_norm).epsilon(1e-4));
            CHECK(u.j_value == doctest::Approx(std::pow(kd, (2.0 * p + 2.0) / (p - 1.0)) * u1.j_value).epsilon(1e-9));
            CHECK(u.j_value < 0.0);
            CHECK(u.j_value > prev_j);
            prev_j = u.j_value;
            ks.push_back(kd);
            norms.push_back(u.energy_norm_sq);
        }
        CHECK(log_log_slope(ks, norms) == doctest::Approx((2.0 * p + 2.0) / (p - 1.0)).epsilon(1e-6));
    }
}

TEST_CASE("negated family members carry the same energies") {
    const Space g = Space::h01(500);
    for (std::size_t k : {1u, 2u, 5u}) {
        const auto a = nodal_solution(0.5, k, g, 1);
        const auto b = nodal_solution(0.5, k, g, -1);
        CHECK(b.sign == -1);
        CHECK(b.energy_norm_sq == a.energy_norm_sq);
        CHECK(b.j_value == a.j_value);
        for (std::size_t i = 0; i < g.dim; ++i) CHECK(b.grid_values[i] == -a.grid_values[i]);
        // Same value under the (even) discrete energy.
        const auto j = sublinear_energy(0.5, g);
        CHECK(evaluate(*j, a.grid_values) == evaluate(*j, b.grid_values));
    }
}

TEST_CASE("direct shooting reproduces the rescaled members") {
    const Space g = Space::h01(2000);
    for (std::size_t k : {2u, 3u}) {
        const auto a = nodal_solution(0.5, k, g);
        const auto b = reshoot_nodal(0.5, k, g);
        double diff = 0.0;
        for (std::size_t i = 0; i < g.dim; ++i) diff = std::max(diff, std::abs(a.grid_values[i] - b.grid_values[i]));
        CHECK(diff < 1e-5);
        CHECK(b.nehari_residual < 1e-6);
    }
}

TEST_CASE("discrete residual grows mildly with k on node-aligned grids") {
    // 1680 intervals: every zero i/k with k <= 8 is a grid node.
    const Space g = Space::h01(1679);
    for (double p : {0.3, 0.5, 0.7}) {
        const double base = nodal_solution(p, 1, g).discrete_residual;
        CHECK(base < 1e-2);
        for (std::size_t k = 2; k <= 8; ++k) CHECK(nodal_solution(p, k, g).discrete_residual < 10.0 * base);
    }
}

TEST_CASE("least-squares log-log slope") {
    std::vector<double> x;
    std::vector<double> y;
    for (int k = 1; k <= 6; ++k) {
        x.push_back(k);
        y.push_back(3.0 * std::pow(k, -6.0));
    }
    CHECK(log_log_slope(x, y) == doctest::Approx(-6.0).epsilon(1e-12));
    CHECK_THROWS_AS(log_log_slope({1.0}, {1.0}), PreconditionError);
    CHECK_THROWS_AS(log_log_slope({1.0, 2.0}, {1.0}), DimensionError);
}
