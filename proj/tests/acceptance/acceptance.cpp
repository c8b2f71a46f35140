// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "clark/clark.hpp"

using namespace clark;

namespace {

struct Verdict {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (pass) detail << "first failure: " << what << "; ";
            pass = false;
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Point random_direction(const Space& s, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    std::vector<double> c(s.dim);
    for (auto& v : c) v = g(rng);
    Point p(s, std::move(c));
    p *= 1.0 / norm(p);
    return p;
}

Cloud line_cloud(const std::vector<double>& xs) {
    std::vector<Point> pts;
    for (double x : xs) pts.emplace_back(Space::l2(1), std::vector<double>{x});
    return make_cloud(pts);
}

// 1. Solver agrees with the enumerated critical set at n = 3.
Verdict criterion1() {
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    const ModelParams mp{3};
    const auto model = clark_model(mp);
    const auto set = enumerate_critical_set(mp, 3);
    const auto seeds = draw_seeds(model->space(), model_seed_box(mp), 2000, 2024);
    std::size_t converged = 0;
    double worst = 0.0;
    for (const auto& s : seeds) {
        const auto res = gradient_flow_solve(*model, s, SolveConfig{});
        if (!(res.point.residual < 1e-8)) continue;
        ++converged;
        const Point& u = res.point.point;
        double d = x_norm(u) + std::max(0.0, std::abs(u[0]) - 1.0);
        for (const auto& cp : set) d = std::min(d, distance(u, cp.point));
        worst = std::max(worst, d);
    }
    const double secs = seconds_since(t0);
    v.require(converged > 0, "no converged solve");
    v.require(worst <= 1e-6, "converged point farther than 1e-6 from the critical set");
    v.require(secs < 30.0, "runtime above 30 s");
    v.detail << "converged " << converged << "/2000, max distance " << worst << ", " << secs << " s";
    return v;
}

// 2. Closed-form critical values.
Verdict criterion2() {
    Verdict v;
    const auto model = clark_model(ModelParams{4});
    const double base = evaluate(*model, model->make_point(1.0, {1.0, 0.0, 0.0}));
    v.require(std::abs(base + 1.0 / 6.0) <= 1e-12, "I(1,1,0,0) != -1/6");
    double worst = std::abs(base + 1.0 / 6.0);
    for (std::size_t j = 1; j <= 4; ++j) {
        std::vector<double> x(j, 0.0);
        x[j - 1] = 9.0 * std::pow(3.0, -2.0 * static_cast<double>(j));
        const double got = evaluate(*model, model->make_point(1.0, x));
        const double want = -13.5 * std::pow(3.0, -4.0 * static_cast<double>(j));
        worst = std::max(worst, std::abs(got - want));
        v.require(std::abs(got - want) <= 1e-12, "single-coordinate value off for j=" + std::to_string(j));
    }
    v.detail << "max abs error " << worst;
    return v;
}

// 3. Interior exclusion and tail bound.
Verdict criterion3() {
    Verdict v;
    InteriorGrid grid;
    grid.delta = 1e-3;
    grid.t_count = 9;
    grid.x_count = 3;
    const auto rep = verify_no_interior_negatives(ModelParams{3}, grid, SolveConfig{});
    v.require(rep.violations.empty(), "interior converged point with nonzero x-part");
    v.require(rep.max_interior_x_norm <= 1e-6, "interior x-norm above 1e-6");
    double min_margin = 1.0;
    for (const auto& row : rep.tail_bounds) {
        v.require(row.holds, "tail bound fails at j0=" + std::to_string(row.j0));
        min_margin = std::min(min_margin, row.margin);
    }
    v.require(rep.tail_bounds.size() == 6, "tail bound rows missing");
    v.require(min_margin >= 0.25, "tail-bound margin below 25%");

    // Same check on random seeds.
    const ModelParams mp{3};
    const auto model = clark_model(mp);
    std::size_t interior = 0;
    for (const auto& s : draw_seeds(model->space(), model_seed_box(mp), 400, 77)) {
        const auto res = gradient_flow_solve(*model, s, SolveConfig{});
        if (!res.converged() || std::abs(res.point.point[0]) > 0.999) continue;
        ++interior;
        v.require(x_norm(res.point.point) <= 1e-6, "random-seed interior point with nonzero x-part");
    }
    v.detail << "grid seeds " << rep.seeds << ", interior converged " << rep.interior_converged + interior
             << ", min tail margin " << min_margin;
    return v;
}

// 4. Structured sequence approaching ±(1, 0, ...).
Verdict criterion4() {
    Verdict v;
    const auto model = clark_model(ModelParams{8});
    const Cloud z = make_cloud({model->make_point(-1.0, {}), model->make_point(1.0, {})}, true);
    double prev_value = -INFINITY;
    double prev_dist = INFINITY;
    for (std::size_t k = 1; k <= 8; ++k) {
        std::vector<double> x(k, 0.0);
        x[k - 1] = 9.0 * std::pow(3.0, -2.0 * static_cast<double>(k));
        const Point vk = model->make_point(1.0, x);
        const double val = evaluate(*model, vk);
        const double dist = x_norm(vk);
        v.require(val < 0.0, "I(v_k) >= 0");
        v.require(std::abs(val) <= 13.5 * std::pow(3.0, -4.0 * static_cast<double>(k)) + 1e-12, "value bound");
        v.require(dist <= 9.0 * std::pow(3.0, -2.0 * static_cast<double>(k)) + 1e-12, "distance bound");
        v.require(std::abs(distance_to(vk, z) - dist) <= 1e-12, "distance to Z differs from x-norm");
        v.require(val > prev_value && dist < prev_dist, "no decay at k=" + std::to_string(k));
        prev_value = val;
        prev_dist = dist;
    }
    v.detail << "|I(v_8)| = " << -prev_value << ", dist(v_8, Z) = " << prev_dist;
    return v;
}

// 5. Deformation contract on the two-cluster functional.
Verdict criterion5() {
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    const auto syn = synthetic_two_cluster_setup(SyntheticSpec{});
    const auto& s = syn.setup;
    const auto pts = sample_sublevel(s, {-1.5, -1.0}, {1.5, 1.0}, 500, 5);
    const auto rep = verify_deformation_contract(s, pts);
    const double secs = seconds_since(t0);
    v.require(rep.samples == 500, "sample count");
    v.require(rep.inclusion_failures == 0, "inclusion failed");
    v.require(rep.max_odd_error <= 1e-8, "oddness");
    v.require(rep.max_speed_ratio <= 1.0 + 1e-8, "speed bound");
    v.require(rep.max_energy_increase <= 1e-10, "energy monotonicity");
    v.require(rep.crossing_violations == 0, "annulus energy drop");
    v.require(secs < 60.0, "runtime above 60 s");
    v.detail << "d=" << s.d << " eps=" << s.eps << " nu=" << s.nu << " nu_eps=" << s.nu_eps << "; retried "
             << rep.retried << ", odd " << rep.max_odd_error << ", speed " << rep.max_speed_ratio << ", rise "
             << rep.max_energy_increase << ", " << secs << " s";
    return v;
}

// 6. Origin-component stabilization and nesting.
Verdict criterion6() {
    Verdict v;
    std::vector<double> gap{0.0};
    for (int i = 50; i <= 100; ++i) gap.push_back(i / 100.0);
    const auto g = lemma21_check(line_cloud(gap), {0.3, 0.2, 0.1, 0.05});
    v.require(g.stabilized == std::vector<std::size_t>{0}, "gap example does not stabilize to {0}");
    v.require(g.matches_direct_search, "gap example direct search");

    std::vector<double> seg;
    for (int i = -100; i <= 100; ++i) seg.push_back(i / 100.0);
    const auto sg = lemma21_check(line_cloud(seg), {0.3, 0.2, 0.1, 0.05});
    v.require(sg.stabilized.size() == seg.size(), "segment example does not keep the whole cloud");

    const auto model_pts = enumerate_critical_set(ModelParams{2}, 20001);
    std::vector<Point> pts;
    for (const auto& cp : model_pts) pts.push_back(cp.point);
    const auto md = lemma21_check(make_cloud(pts, true), {0.1, 0.03, 0.01, 3e-3, 1e-3, 3e-4, 1e-4});
    // The Z segment: the samples plus the zero-pattern members of N and −N at (±1, 0).
    std::vector<std::size_t> on_z;
    for (std::size_t i = 0; i < model_pts.size(); ++i)
        if (x_norm(model_pts[i].point) == 0.0) on_z.push_back(i);
    const bool only_z = md.stabilized == on_z && on_z.size() == 20003;
    v.require(only_z, "model example does not stabilize to the Z samples");
    v.require(md.matches_direct_search, "model example direct search");

    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::size_t nested_levels = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t dim = 1 + trial % 3;
        const std::size_t n = 20 + static_cast<std::size_t>(trial);
        std::vector<Point> cloud{Point::zero(Space::l2(dim))};
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<double> c(dim);
            for (auto& x : c) x = unit(rng);
            cloud.emplace_back(Space::l2(dim), std::move(c));
        }
        std::vector<double> sched{std::uniform_real_distribution<double>(0.2, 1.0)(rng)};
        const std::size_t len = 3 + trial % 6;
        while (sched.size() < len) sched.push_back(sched.back() * std::uniform_real_distribution<double>(0.2, 0.95)(rng));
        try {
            const auto rep = lemma21_check(make_cloud(cloud), sched);
            v.require(rep.matches_direct_search, "random cloud direct search");
            for (std::size_t k = 1; k < rep.levels.size(); ++k) {
                const std::set<std::size_t> prev(rep.levels[k - 1].origin_component.begin(),
                                                 rep.levels[k - 1].origin_component.end());
                for (std::size_t i : rep.levels[k].origin_component) v.require(prev.count(i) == 1, "nesting violated");
                ++nested_levels;
            }
        } catch (const InternalError& e) {
            v.require(false, std::string("nesting violated: ") + e.what());
        }
    }
    v.detail << "gap stabilized from level " << g.stabilized_from << ", model from level " << md.stabilized_from
             << ", " << nested_levels << " random nested level pairs";
    return v;
}

// 7. Minimax upper bounds on the model at n = 8.
Verdict criterion7() {
    Verdict v;
    const auto model = clark_model(ModelParams{8});
    SupBudget budget;
    const auto sweep = minimax_sweep(*model, 6, budget);
    v.require(sweep.estimates.size() == 6, "missing estimates");
    for (const auto& e : sweep.estimates) v.require(e.upper_bound < 0.0, "nonnegative bound j=" + std::to_string(e.j));
    v.require(sweep.monotone, "bounds not non-decreasing");
    const double c1 = sweep.estimates.front().upper_bound;
    const double c6 = sweep.estimates.back().upper_bound;
    v.require(std::abs(c6) < std::abs(c1) / 50.0, "|c6| >= |c1|/50");
    v.require(c1 <= -8.0 / 243.0 + 1e-9, "c1 above -8/243");
    v.require(c1 >= -1.0 / 6.0 - 1e-6, "c1 below -1/6");
    const double gmin = global_min_estimate(*model, model_seed_box(ModelParams{8}), 200, SolveConfig{});
    // Every coordinate on its positive branch: −(27/2)·Σ_{j≤8} 3^{−4j}.
    double floor = 0.0;
    for (int j = 1; j <= 8; ++j) floor -= 13.5 * std::pow(3.0, -4.0 * j);
    v.require(gmin >= floor - 1e-6, "global minimum below the all-positive pattern value");
    v.require(c1 >= gmin - 1e-12, "c1 below the global minimum");
    for (const auto& e : sweep.estimates)
        v.require(evaluate(*model, e.witness) <= e.upper_bound + 1e-12, "witness does not attain bound");
    v.detail << "c1=" << c1 << " c6=" << c6 << " global min=" << gmin << " budget " << budget.describe();
    return v;
}

// 8. The zero critical point of the wrapper is isolated.
Verdict criterion8() {
    Verdict v;
    const Space grid = Space::h01(10);
    const auto w = wrapper_functional(grid);
    SolveConfig cfg;
    cfg.residual_tol = 1e-8;
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::size_t near_zero = 0;
    double max_terminal = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double r = 0.3 * std::pow(unit(rng), 1.0 / static_cast<double>(grid.dim));
        const Point seed = r * random_direction(grid, rng);
        const auto res = gradient_flow_solve(*w, seed, cfg);
        v.require(res.converged(), "ball seed did not converge");
        max_terminal = std::max(max_terminal, norm(res.point.point));
        near_zero += norm(res.point.point) < 1e-2 ? 1 : 0;
    }
    v.require(near_zero == 200, "ball seed converged away from 0");

    std::size_t others = 0;
    double min_other = INFINITY;
    for (int i = 0; i < 100; ++i) {
        const double r = 2.0 * unit(rng);
        const auto res = gradient_flow_solve(*w, r * random_direction(grid, rng), cfg);
        if (!res.converged()) continue;
        const double nu = norm(res.point.point);
        if (nu < 1e-2) continue;
        ++others;
        min_other = std::min(min_other, nu);
        v.require(nu >= 1.0 / std::sqrt(2.0) - 1e-6, "nonzero critical point inside radius 1/sqrt(2)");
    }
    v.detail << "ball: " << near_zero << "/200 to 0 (max terminal norm " << max_terminal << "); " << others
             << " other critical points, min norm " << min_other;
    return v;
}

// 9. Nodal family for p = 1/2 on the grid with 2000 interior nodes.
Verdict criterion9() {
    Verdict v;
    const double p = 0.5;
    const Space grid = Space::h01(2000);
    std::vector<double> ks;
    std::vector<double> norms;
    double worst_nehari = 0.0;
    double worst_j = 0.0;
    for (std::size_t k = 1; k <= 6; ++k) {
        const auto u = nodal_solution(p, k, grid);
        worst_nehari = std::max(worst_nehari, u.nehari_residual);
        const double jrel = std::abs(u.j_value + u.energy_norm_sq / 6.0) / (u.energy_norm_sq / 6.0);
        worst_j = std::max(worst_j, jrel);
        ks.push_back(static_cast<double>(k));
        norms.push_back(u.energy_norm_sq);
    }
    const double slope = log_log_slope(ks, norms);
    v.require(worst_nehari < 1e-6, "Nehari residual");
    v.require(worst_j <= 1e-6, "J != -|u|^2/6");
    v.require(std::abs(slope + 6.0) <= 0.01, "log-log slope");

    const auto a = nodal_solution(p, 2, grid);
    const auto b = reshoot_nodal(p, 2, grid);
    double diff = 0.0;
    for (std::size_t i = 0; i < grid.dim; ++i) diff = std::max(diff, std::abs(a.grid_values[i] - b.grid_values[i]));
    v.require(diff < 1e-5, "re-shot u_2 differs");
    v.detail << "max Nehari " << worst_nehari << ", slope " << slope << ", max J rel error " << worst_j
             << ", reshoot sup diff " << diff;
    return v;
}

// 10. Finite-difference gradient checks.
Verdict criterion10() {
    Verdict v;
    const Space grid = Space::h01(10);
    const std::vector<std::pair<std::string, FunctionalPtr>> fs{{"model", clark_model(ModelParams{4})},
                                                                {"wrapper", wrapper_functional(grid)},
                                                                {"sublinear", sublinear_energy(0.5, grid)}};
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> radius(0.05, 2.0);
    for (const auto& [name, f] : fs) {
        int checked = 0;
        double worst = 0.0;
        while (checked < 100) {
            const Point u = radius(rng) * random_direction(f->space(), rng);
            const auto rep = fd_gradient_check(*f, u, 1e-6);
            if (!rep.skipped.empty()) continue;
            worst = std::max(worst, rep.max_rel_error);
            ++checked;
        }
        v.require(worst < 1e-5, name + " FD check");
        v.detail << name << " " << worst << "; ";
    }
    return v;
}

}  // namespace

int main() {
    const std::vector<std::function<Verdict()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                         criterion6, criterion7, criterion8, criterion9, criterion10};
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        try {
            v = criteria[i]();
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail << "exception: " << e.what();
        }
        failures += v.pass ? 0 : 1;
        std::printf("criterion %zu: %s  %s\n", i + 1, v.pass ? "PASS" : "FAIL", v.detail.str().c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
