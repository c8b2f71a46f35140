#include "clark/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "clark/errors.hpp"
#include "clark/parallel.hpp"

namespace clark {

namespace {

constexpr double kStableHL = 0.8;

}  // namespace

void SolveConfig::validate() const {
    if (!(residual_tol > 0.0)) throw PreconditionError("residual_tol must be positive");
    if (!(step_cap > 0.0)) throw PreconditionError("step_cap must be positive");
    if (!(error_tol > 0.0)) throw PreconditionError("error_tol must be positive");
    if (!(max_flow_time > 0.0)) throw PreconditionError("max_flow_time must be positive");
}

FlowSolveResult gradient_flow_solve(const Functional& f, const Point& seed, const SolveConfig& cfg) {
    cfg.validate();
    validate_argument(f, seed);

    FlowSolveResult result;
    Point u = seed;
    double energy = f.value(u);
    Point g = f.grad(u);
    double res = norm(g);
    double u_norm = norm(u);
    if (cfg.record_trace) result.energy_trace.push_back(energy);

    Point best = u;
    double best_res = res;
    double best_energy = energy;

    double h = std::min(cfg.step_cap, 1e-3);
    double time = 0.0;
    std::size_t attempts = 0;

    while (res >= cfg.residual_tol && time < cfg.max_flow_time && attempts < cfg.max_steps) {
        ++attempts;
        h = std::min({h, cfg.step_cap, cfg.max_flow_time - time});

        Point heun = axpy(-h, g, u);
        Point dg = f.grad(heun);
        dg -= g;
        const double dg_norm = norm(dg);
        // Heun minus Euler is −½h·Δg.
        const double err = 0.5 * h * dg_norm;
        for (std::size_t i = 0; i < heun.size(); ++i) heun[i] -= 0.5 * h * dg[i];

        const double scale = cfg.error_tol * (1.0 + u_norm);
        const double next_energy = f.value(heun);
        const bool finite = heun.all_finite() && std::isfinite(next_energy);
        // Local Lipschitz constant along the step. Keeping h·L below 1 stops the
        // predictor from overshooting a stiff attracting direction.
        const double lip = h * res > 0.0 ? dg_norm / (h * res) : 0.0;
        const bool unstable = h * lip > kStableHL;

        if (!finite || err > scale || unstable || next_energy > energy + cfg.energy_slack) {
            ++result.rejected;
            if (finite && unstable && err <= scale) {
                h = 0.9 * kStableHL / lip;
                continue;
            }
            h *= err > scale && err > 0.0 ? std::max(0.1, 0.9 * std::sqrt(scale / err)) : 0.5;
            if (h < 1e-300) break;
            continue;
        }

        result.max_energy_increase = std::max(result.max_energy_increase, next_energy - energy);
        u = std::move(heun);
        u_norm = norm(u);
        energy = next_energy;
        time += h;
        g = f.grad(u);
        res = norm(g);
        ++result.steps;
        if (cfg.record_trace) result.energy_trace.push_back(energy);
        if (res < best_res) {
            best = u;
            best_res = res;
            best_energy = energy;
        }

        const double grow = err > 0.0 ? 0.9 * std::sqrt(scale / err) : 4.0;
        h *= std::clamp(grow, 0.2, 4.0);
        if (lip > 0.0) h = std::min(h, kStableHL / lip);
    }

    result.flow_time = time;
    if (res < cfg.residual_tol) {
        result.status = SolveStatus::Converged;
        result.point.point = u;
        result.point.value = energy;
        result.point.residual = res;
    } else {
        result.status = SolveStatus::NonConvergence;
        result.point.point = best;
        result.point.value = best_energy;
        result.point.residual = best_res;
        result.point.note = "time or step budget exhausted";
    }
    return result;
}

StructuredResult structured_solve(const ModelParams& params, const std::vector<Sign>& pattern) {
    const auto model = clark_model(params);
    if (pattern.size() > params.n) throw PreconditionError("pattern longer than the truncation");

    StructuredResult result;
    const bool all_zero =
        std::all_of(pattern.begin(), pattern.end(), [](Sign s) { return s == Sign::Zero; });

    auto finish = [&](double t) {
        CriticalPoint cp;
        cp.point = model->branch_point(t, pattern);
        cp.value = model->value(cp.point);
        cp.residual = norm(model->grad(cp.point));
        cp.label = classify(cp.point);
        cp.pattern = pattern;
        cp.pattern.resize(params.n, Sign::Zero);
        return cp;
    };

    if (all_zero) {
        result.status = StructuredStatus::NonIsolated;
        result.point = finish(0.0);
        result.point.note = "non-isolated: the whole segment Z is stationary";
        result.roots = {-1.0, 1.0};
        return result;
    }

    // Grid on [-2, 2] containing t = ±1 exactly.
    constexpr int kCells = 400;
    auto grid_t = [](int i) { return -2.0 + 4.0 * static_cast<double>(i) / kCells; };
    auto g = [&](double t) { return model->branch_t_derivative(t, pattern); };

    double prev_t = grid_t(0);
    double prev_g = g(prev_t);
    if (prev_g == 0.0) result.roots.push_back(prev_t);
    for (int i = 1; i <= kCells; ++i) {
        const double t = grid_t(i);
        const double gt = g(t);
        if (gt == 0.0) {
            result.roots.push_back(t);
        } else if (prev_g != 0.0 && (prev_g < 0.0) != (gt < 0.0)) {
            double lo = prev_t;
            double hi = t;
            double glo = prev_g;
            while (hi - lo > 1e-12) {
                const double mid = 0.5 * (lo + hi);
                const double gm = g(mid);
                if (gm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if ((gm < 0.0) == (glo < 0.0)) {
                    lo = mid;
                    glo = gm;
                } else {
                    hi = mid;
                }
            }
            result.roots.push_back(0.5 * (lo + hi));
        }
        prev_t = t;
        prev_g = gt;
    }

    if (result.roots.empty()) {
        result.status = StructuredStatus::NoSolution;
        return result;
    }
    result.status = StructuredStatus::Found;
    result.point = finish(*std::max_element(result.roots.begin(), result.roots.end()));
    return result;
}

SeedBox model_seed_box(const ModelParams& params) {
    SeedBox box;
    box.lo.push_back(-1.5);
    box.hi.push_back(1.5);
    box.zeroable.push_back(false);
    for (std::size_t j = 1; j <= params.n; ++j) {
        const double half = 2.0 * branch_plus(j);
        box.lo.push_back(-half);
        box.hi.push_back(half);
        box.zeroable.push_back(true);
    }
    box.zero_probability = 0.5;
    return box;
}

std::vector<Point> draw_seeds(const Space& space, const SeedBox& box, std::size_t count,
                              std::uint64_t rng_seed) {
    if (box.lo.size() != space.dim || box.hi.size() != space.dim) {
        throw DimensionError("seed box does not match the space");
    }
    std::mt19937_64 rng(rng_seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Point> seeds;
    seeds.reserve(count);
    for (std::size_t s = 0; s < count; ++s) {
        std::vector<double> c(space.dim);
        for (std::size_t i = 0; i < space.dim; ++i) {
            c[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * unit(rng);
            const bool zeroable = i < box.zeroable.size() && box.zeroable[i];
            if (zeroable && box.zero_probability > 0.0 && unit(rng) < box.zero_probability) c[i] = 0.0;
        }
        seeds.emplace_back(space, std::move(c));
    }
    return seeds;
}

AccumulationReport accumulation_scan(const Functional& f, const Cloud& K0hat_cloud,
                                     std::pair<double, double> window, std::size_t seeds,
                                     const SolveConfig& cfg, const SeedBox& box,
                                     const Classifier& classify_point) {
    const auto [lo, hi] = window;
    if (!(hi <= 0.0) || !(lo < hi)) {
        throw PreconditionError("accumulation window needs lo < hi <= 0");
    }
    if (K0hat_cloud.empty()) throw PreconditionError("K0hat cloud is empty");
    cfg.validate();

    const auto starts = draw_seeds(f.space(), box, seeds, cfg.seed_rng);
    std::vector<FlowSolveResult> results(starts.size());
    parallel_for(starts.size(), cfg.threads,
                 [&](std::size_t i) { results[i] = gradient_flow_solve(f, starts[i], cfg); });

    AccumulationReport report;
    report.window = window;
    report.attempted = starts.size();
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (!results[i].converged()) continue;
        ++report.converged;
        const double v = results[i].point.value;
        if (v > lo && v < hi) kept.push_back(i);
    }
    std::stable_sort(kept.begin(), kept.end(), [&](std::size_t a, std::size_t b) {
        const auto& pa = results[a].point;
        const auto& pb = results[b].point;
        if (pa.value != pb.value) return pa.value < pb.value;
        return pa.point.values() < pb.point.values();
    });
    for (std::size_t i : kept) {
        CriticalPoint cp = results[i].point;
        cp.label = classify_point ? classify_point(cp.point) : CriticalLabel::Other;
        report.distances_to_K0hat.push_back(distance_to(cp.point, K0hat_cloud));
        report.found.push_back(std::move(cp));
    }
    return report;
}

}  // namespace clark
