#include "clark/minimax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "clark/errors.hpp"
#include "clark/model.hpp"
#include "clark/parallel.hpp"
#include "clark/sublinear.hpp"

namespace clark {

namespace {

double euclid(const std::vector<double>& c) {
    double acc = 0.0;
    for (double v : c) acc += v * v;
    return std::sqrt(acc);
}

void normalize(std::vector<double>& c) {
    const double n = euclid(c);
    for (double& v : c) v /= n;
}

struct Candidate {
    std::vector<double> c;
    double value = -std::numeric_limits<double>::infinity();
};

Candidate ascend(const Functional& f, const SphereFamily& fam, double rho, Candidate start,
                 std::size_t iters) {
    const double radius = fam.radius(rho);
    double step = 0.1;
    for (std::size_t it = 0; it < iters && step > 1e-12; ++it) {
        const Point g = f.grad(fam.embed(start.c, rho));
        std::vector<double> tangent(fam.k());
        double radial = 0.0;
        for (std::size_t i = 0; i < fam.k(); ++i) {
            tangent[i] = radius * inner(g, fam.basis[i]);
            radial += tangent[i] * start.c[i];
        }
        for (std::size_t i = 0; i < fam.k(); ++i) tangent[i] -= radial * start.c[i];
        const double tn = euclid(tangent);
        if (!(tn > 1e-14)) break;

        // Backtrack along the tangent direction until the value improves.
        bool moved = false;
        while (step > 1e-12) {
            Candidate trial{start.c, 0.0};
            for (std::size_t i = 0; i < fam.k(); ++i) trial.c[i] += step * tangent[i] / tn;
            normalize(trial.c);
            trial.value = f.value(fam.embed(trial.c, rho));
            if (trial.value > start.value) {
                start = std::move(trial);
                step *= 1.5;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved) break;
    }
    return start;
}

}  // namespace

Point SphereFamily::embed(const std::vector<double>& c, double rho) const {
    Point u = anchor;
    const double r = radius(rho);
    for (std::size_t i = 0; i < basis.size(); ++i) u += (r * c[i]) * basis[i];
    return u;
}

SphereFamily sphere_family(const Functional& f, std::size_t k) {
    if (k == 0) throw DimensionError("sphere family needs k >= 1");
    const Space& space = f.space();
    SphereFamily fam;
    fam.anchor = Point::zero(space);

    if (const auto* model = dynamic_cast<const ClarkModel*>(&f)) {
        if (k > model->params().n) throw DimensionError("k exceeds the model truncation");
        for (std::size_t i = 1; i <= k; ++i) {
            Point e = Point::zero(space);
            e[i] = 1.0;
            fam.basis.push_back(std::move(e));
        }
        fam.name = "model x-sphere at t=0";
        return fam;
    }

    if (k > space.dim) throw DimensionError("k exceeds the ambient dimension");
    if (dynamic_cast<const WrapperFunctional*>(&f) != nullptr) {
        const double h = space.mesh_width;
        for (std::size_t mode = 1; mode <= k; ++mode) {
            Point s = Point::zero(space);
            for (std::size_t i = 0; i < space.dim; ++i) {
                s[i] = std::sin(std::numbers::pi * static_cast<double>(mode) * h * static_cast<double>(i + 1));
            }
            s *= 1.0 / norm(s);
            fam.basis.push_back(std::move(s));
        }
        fam.radius_offset = 1.0;
        fam.name = "sine-mode sphere of radius 1+rho";
        return fam;
    }

    const double unit = unit_coordinate_norm(space);
    for (std::size_t i = 0; i < k; ++i) {
        Point e = Point::zero(space);
        e[i] = 1.0 / unit;
        fam.basis.push_back(std::move(e));
    }
    // Coordinate vectors of an H01 grid are not orthogonal; orthonormalize.
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < i; ++j) fam.basis[i] -= inner(fam.basis[i], fam.basis[j]) * fam.basis[j];
        fam.basis[i] *= 1.0 / norm(fam.basis[i]);
    }
    fam.name = "coordinate sphere";
    return fam;
}

std::string SupBudget::describe() const {
    std::ostringstream os;
    os << "samples=" << samples << ";starts=" << starts << ";iters=" << iters << ";seed=" << seed;
    return os.str();
}

SphereSup sphere_sup(const Functional& f, const SphereFamily& family, double rho,
                     const SupBudget& budget) {
    if (!(rho > 0.0)) throw PreconditionError("sphere radius must be positive");
    if (family.k() == 0) throw DimensionError("empty sphere family");
    const std::size_t k = family.k();

    std::vector<Candidate> pool;
    pool.reserve(2 * k + budget.samples);
    for (std::size_t i = 0; i < k; ++i) {
        for (double s : {1.0, -1.0}) {
            Candidate c{std::vector<double>(k, 0.0), 0.0};
            c.c[i] = s;
            pool.push_back(std::move(c));
        }
    }
    std::mt19937_64 rng(budget.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (std::size_t s = 0; s < budget.samples; ++s) {
        Candidate c{std::vector<double>(k), 0.0};
        do {
            for (double& v : c.c) v = gauss(rng);
        } while (!(euclid(c.c) > 1e-12));
        normalize(c.c);
        pool.push_back(std::move(c));
    }
    for (auto& c : pool) c.value = f.value(family.embed(c.c, rho));

    std::vector<std::size_t> order(pool.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return pool[a].value > pool[b].value; });
    const std::size_t starts = std::min(budget.starts, order.size());
    std::vector<Candidate> refined(starts);
    parallel_for(starts, budget.threads, [&](std::size_t i) {
        refined[i] = ascend(f, family, rho, pool[order[i]], budget.iters);
    });

    Candidate best = pool[order.front()];
    for (const auto& c : refined) {
        if (c.value > best.value) best = c;
    }
    return SphereSup{best.value, family.embed(best.c, rho), rho};
}

SphereSup sphere_sup(const Functional& f, std::size_t k, double rho, const SupBudget& budget) {
    return sphere_sup(f, sphere_family(f, k), rho, budget);
}

std::vector<double> default_rho_grid(std::size_t j) {
    if (j == 0) throw DimensionError("j must be at least 1");
    constexpr std::size_t kCount = 24;
    const double lo = std::log(1e-4) - 2.0 * static_cast<double>(j - 1) * std::log(3.0);
    std::vector<double> grid(kCount);
    for (std::size_t i = 0; i < kCount; ++i) {
        grid[i] = std::exp(lo + (0.0 - lo) * static_cast<double>(i) / static_cast<double>(kCount - 1));
    }
    return grid;
}

MinimaxEstimate cj_upper_bound(const Functional& f, std::size_t j, const std::vector<double>& rho_grid,
                               const SupBudget& budget) {
    if (rho_grid.empty()) throw PreconditionError("rho grid is empty");
    for (double r : rho_grid) {
        if (!(r > 0.0) || !std::isfinite(r)) throw PreconditionError("rho grid must be positive");
    }
    const SphereFamily family = sphere_family(f, j);

    MinimaxEstimate est;
    est.j = j;
    est.budget = budget.describe();
    est.upper_bound = std::numeric_limits<double>::infinity();

    auto eval = [&](double rho) {
        SphereSup s = sphere_sup(f, family, rho, budget);
        est.sphere_sup_trace.emplace_back(rho, s.sup);
        if (s.sup < est.upper_bound) {
            est.upper_bound = s.sup;
            est.rho_star = rho;
            est.witness = std::move(s.witness);
        }
        return est.sphere_sup_trace.back().second;
    };

    std::vector<double> grid = rho_grid;
    std::sort(grid.begin(), grid.end());
    std::size_t best = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        eval(grid[i]);
        if (est.sphere_sup_trace.back().second <= est.sphere_sup_trace[best].second) best = i;
    }

    if (grid.size() >= 2) {
        // Golden-section search on log ρ inside the neighbouring grid cells.
        double a = std::log(grid[best == 0 ? 0 : best - 1]);
        double b = std::log(grid[std::min(best + 1, grid.size() - 1)]);
        const double g = (std::sqrt(5.0) - 1.0) / 2.0;
        double x1 = b - g * (b - a);
        double x2 = a + g * (b - a);
        double f1 = eval(std::exp(x1));
        double f2 = eval(std::exp(x2));
        for (int it = 0; it < 40 && b - a > 1e-6; ++it) {
            if (f1 <= f2) {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - g * (b - a);
                f1 = eval(std::exp(x1));
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + g * (b - a);
                f2 = eval(std::exp(x2));
            }
        }
    }

    if (!(est.upper_bound < 0.0)) {
        throw NoNegativeCertificate("no negative sphere sup for j = " + std::to_string(j));
    }
    return est;
}

MinimaxSweep minimax_sweep(const Functional& f, std::size_t jmax, const SupBudget& budget) {
    if (jmax == 0) throw PreconditionError("jmax must be at least 1");
    MinimaxSweep sweep;
    for (std::size_t j = 1; j <= jmax; ++j) {
        sweep.estimates.push_back(cj_upper_bound(f, j, default_rho_grid(j), budget));
    }
    sweep.monotone = true;
    for (std::size_t i = 1; i < sweep.estimates.size(); ++i) {
        if (sweep.estimates[i].upper_bound < sweep.estimates[i - 1].upper_bound) sweep.monotone = false;
    }
    return sweep;
}

double global_min_estimate(const Functional& f, const SeedBox& box, std::size_t seeds,
                           const SolveConfig& cfg) {
    const auto starts = draw_seeds(f.space(), box, seeds, cfg.seed_rng);
    std::vector<FlowSolveResult> results(starts.size());
    parallel_for(starts.size(), cfg.threads,
                 [&](std::size_t i) { results[i] = gradient_flow_solve(f, starts[i], cfg); });
    double best = std::numeric_limits<double>::infinity();
    for (const auto& r : results) {
        if (r.converged()) best = std::min(best, r.point.value);
    }
    if (!std::isfinite(best)) throw EmptyInput("no seed converged to a critical point");
    return best;
}

}  // namespace clark
