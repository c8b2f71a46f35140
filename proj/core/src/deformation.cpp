#include "clark/deformation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>

#include "clark/ode.hpp"
#include "clark/parallel.hpp"

namespace clark {

FunctionalPtr two_cluster_functional(double q) {
    if (!(q > 0.0)) throw InvalidParams("two_cluster_functional needs q > 0");
    const double q2 = q * q;
    auto value = [q2](const Point& u) {
        const double x = u[0];
        const double y = u[1];
        const double w = x * x - q2;
        return -x * x * w * w + y * y;
    };
    auto grad = [q2](const Point& u) {
        const double x = u[0];
        const double y = u[1];
        const double w = x * x - q2;
        return Point(u.space(), {-2.0 * x * w * w - 4.0 * x * x * x * w, 2.0 * y});
    };
    return std::make_shared<const LambdaFunctional>(Space::l2(2), value, grad, "two_cluster",
                                                    /*even=*/true);
}

double BoundsEstimate::nu_eps(double eps) const {
    double inf = std::numeric_limits<double>::infinity();
    for (const auto& s : samples) {
        if (s.energy >= -rho && s.energy <= -eps && s.dist_K0e >= r) {
            inf = std::min(inf, s.grad_norm);
        }
    }
    if (!std::isfinite(inf)) return nu;
    return std::min(nu, safety * inf);
}

namespace {

// Descent on ½‖∇I‖², which also reaches saddles. Hessian-vector products by
// central differences of the gradient.
std::optional<Point> residual_polish(const Functional& f, Point u) {
    constexpr double kTol = 1e-10;
    Point g = f.grad(u);
    double phi = 0.5 * norm_sq(g);
    for (int it = 0; it < 300; ++it) {
        const double ng = std::sqrt(2.0 * phi);
        if (ng < kTol) return u;
        const double h = 1e-6 * std::max(1.0, norm(u)) / ng;
        Point dir = f.grad(u + h * g) - f.grad(u - h * g);
        dir *= -1.0 / (2.0 * h);
        const double slope = -norm_sq(dir);
        if (!(slope < 0.0)) return std::nullopt;
        double step = 1.0;
        bool moved = false;
        for (int bt = 0; bt < 60; ++bt, step *= 0.5) {
            Point trial = u + step * dir;
            Point tg = f.grad(trial);
            const double tphi = 0.5 * norm_sq(tg);
            if (tphi <= phi + 1e-4 * step * slope) {
                u = std::move(trial);
                g = std::move(tg);
                phi = tphi;
                moved = true;
                break;
            }
        }
        if (!moved) break;
    }
    if (std::sqrt(2.0 * phi) < kTol) return u;
    return std::nullopt;
}

}  // namespace

BoundsEstimate estimate_bounds(const Functional& f, const Cloud& K0_cloud, const Cloud& K0e_cloud,
                               double r, const SampleSpec& spec) {
    if (K0_cloud.empty() || K0e_cloud.empty()) throw PreconditionError("clouds must be nonempty");
    if (!(r > 0.0)) throw PreconditionError("r must be positive");
    if (spec.count == 0) throw PreconditionError("sampling budget is empty");
    if (spec.lo.size() != f.space().dim || spec.hi.size() != f.space().dim) {
        throw DimensionError("sampling box does not match the space");
    }

    BoundsEstimate est;
    est.r = r;
    est.safety = spec.safety;

    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    est.samples.reserve(spec.count);
    for (std::size_t s = 0; s < spec.count; ++s) {
        std::vector<double> c(spec.lo.size());
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = spec.lo[i] + (spec.hi[i] - spec.lo[i]) * unit(rng);
        BoundsSample bs;
        bs.point = Point(f.space(), std::move(c));
        bs.energy = f.value(bs.point);
        bs.grad_norm = norm(f.grad(bs.point));
        bs.dist_K0 = distance_to(bs.point, K0_cloud);
        bs.dist_K0e = distance_to(bs.point, K0e_cloud);
        est.samples.push_back(std::move(bs));
    }

    SolveConfig polish;
    polish.residual_tol = 1e-10;
    polish.max_flow_time = 100.0;
    polish.max_steps = 20000;
    polish.step_cap = 0.1;

    double rho = spec.rho;
    for (int attempt = 0; attempt < 40; ++attempt, rho *= 0.5) {
        std::vector<std::size_t> region;
        for (std::size_t i = 0; i < est.samples.size(); ++i) {
            const auto& s = est.samples[i];
            if (s.energy >= -rho && s.energy <= 0.0 && s.dist_K0 >= r) region.push_back(i);
        }
        if (region.empty()) {
            throw SetupInconsistent("no samples fall in [-rho <= I <= 0] outside N_r(K0)");
        }
        std::sort(region.begin(), region.end(), [&](std::size_t a, std::size_t b) {
            return est.samples[a].grad_norm < est.samples[b].grad_norm;
        });
        const double inf = est.samples[region.front()].grad_norm;

        bool critical_in_band = !(inf > 0.0);
        const std::size_t polish_count = std::min(spec.polish_starts, region.size());
        auto in_band = [&](const Point& p) {
            const double v = f.value(p);
            return v >= -rho && v <= 1e-12 && distance_to(p, K0_cloud) >= r;
        };
        for (std::size_t k = 0; k < polish_count && !critical_in_band; ++k) {
            const Point& start = est.samples[region[k]].point;
            const auto res = gradient_flow_solve(f, start, polish);
            if (res.converged() && in_band(res.point.point)) critical_in_band = true;
            if (const auto saddle = residual_polish(f, start); saddle && in_band(*saddle)) critical_in_band = true;
        }

        if (!critical_in_band) {
            est.rho = rho;
            est.nu = spec.safety * inf;
            return est;
        }
        if (!spec.shrink_rho) {
            throw SetupInconsistent("critical point with value in [-rho, 0] outside N_r(K0)");
        }
    }
    throw SetupInconsistent("could not find a critical-point-free band [-rho, 0]");
}

DeformationSetup make_deformation_setup(FunctionalPtr f, Cloud K0i_cloud, Cloud K0e_cloud,
                                        double delta0, double r, double rho, double nu,
                                        double nu_eps, double eps) {
    if (!f) throw PreconditionError("setup needs a functional");
    if (K0i_cloud.empty() || K0e_cloud.empty()) throw PreconditionError("clouds must be nonempty");
    if (!(delta0 > 0.0)) throw PreconditionError("delta0 must be positive");
    if (!(r > 0.0 && r <= delta0 / 3.0)) throw PreconditionError("r must lie in (0, delta0/3]");
    if (!(rho > 0.0 && nu > 0.0)) throw PreconditionError("rho and nu must be positive");

    DeformationSetup s;
    s.d = std::min(rho, nu * r) / 3.0;
    if (!(eps > 0.0 && eps <= s.d / 2.0)) throw PreconditionError("eps must lie in (0, d/2]");
    if (!(nu_eps > 0.0 && nu_eps <= nu)) throw PreconditionError("nu_eps must lie in (0, nu]");

    double gap = std::numeric_limits<double>::infinity();
    for (const Point& a : K0i_cloud.points) gap = std::min(gap, distance_to(a, K0e_cloud));
    if (gap < 2.0 * delta0) throw PreconditionError("dist(K0i, K0e) < 2 delta0");
    if (!is_symmetric(K0e_cloud.points)) throw PreconditionError("K0e cloud must be symmetric");

    s.f = std::move(f);
    s.K0i_cloud = std::move(K0i_cloud);
    s.K0e_cloud = std::move(K0e_cloud);
    s.K0e_cloud.symmetric = true;
    s.r = r;
    s.rho = rho;
    s.nu = nu;
    s.nu_eps = nu_eps;
    s.eps = eps;
    s.delta0 = delta0;
    return s;
}

double energy_cutoff(const DeformationSetup& setup, double energy) {
    if (energy <= -2.0 * setup.d) return 0.0;
    if (energy >= -setup.d) return 1.0;
    return (energy + 2.0 * setup.d) / setup.d;
}

double distance_cutoff(const DeformationSetup& setup, double dist) {
    if (dist <= setup.r) return 0.0;
    if (dist >= 2.0 * setup.r) return 1.0;
    return (dist - setup.r) / setup.r;
}

namespace {

Point field(const DeformationSetup& setup, const Point& u) {
    const double c1 = energy_cutoff(setup, setup.f->value(u));
    if (c1 == 0.0) return Point::zero(u.space());
    const double c2 = distance_cutoff(setup, distance_to(u, setup.K0e_cloud));
    if (c2 == 0.0) return Point::zero(u.space());
    Point g = setup.f->grad(u);
    const double ng = norm(g);
    if (!(ng > 0.0)) throw SetupInconsistent("gradient vanishes where the pseudo-gradient is active");
    g *= c1 * c2 / ng;
    return g;
}

}  // namespace

Point pseudo_gradient(const DeformationSetup& setup, const Point& u) {
    validate_argument(*setup.f, u);
    if (!(setup.f->value(u) < 0.0)) throw PreconditionError("pseudo_gradient requires I(u) < 0");
    return field(setup, u);
}

FlowTrace flow(const DeformationSetup& setup, const Point& u, double T) {
    validate_argument(*setup.f, u);
    if (!(T >= 0.0)) throw PreconditionError("flow time must be nonnegative");
    const double e0 = setup.f->value(u);
    if (!(e0 < 0.0)) throw PreconditionError("flow requires I(u) < 0");

    constexpr double kTol = 1e-10;
    constexpr double kEnergySlack = 1e-13;
    const double max_step = 0.01 * setup.r;
    const auto tab = ode::bogacki_shampine();
    const Space space = u.space();

    auto rhs = [&](double, std::span<const double> y) {
        Point p(space, std::vector<double>(y.begin(), y.end()));
        Point v = field(setup, p);
        v *= -1.0;
        return v.values();
    };

    FlowTrace trace;
    trace.times.push_back(0.0);
    trace.points.push_back(u);
    trace.energies.push_back(e0);

    double t = 0.0;
    double h = max_step;
    Point y = u;
    double energy = e0;
    while (t < T) {
        h = std::min({h, max_step, T - t});
        const auto out = ode::step(tab, rhs, t, y.coords(), h);
        Point next(space, out.y);
        const double e_next = setup.f->value(next);
        if (out.error > kTol || e_next > energy + kEnergySlack) {
            h = out.error > kTol ? ode::next_step(h, out.error, kTol, tab.order) : 0.5 * h;
            if (h < 1e-14 * std::max(1.0, T)) {
                throw FlowIntegrationError("deformation flow step size underflow", std::move(trace));
            }
            continue;
        }
        t = (T - t <= h) ? T : t + h;
        y = std::move(next);
        energy = e_next;
        trace.times.push_back(t);
        trace.points.push_back(y);
        trace.energies.push_back(energy);
        h = ode::next_step(h, out.error, kTol, tab.order);
    }
    return trace;
}

Point eta_epsilon(const DeformationSetup& setup, const Point& u) {
    validate_argument(*setup.f, u);
    if (!(setup.f->value(u) <= -setup.eps)) throw PreconditionError("eta_epsilon requires I(u) <= -eps");
    FlowTrace trace = flow(setup, u, setup.flow_time());
    const Point& end = trace.points.back();
    const bool low = trace.energies.back() <= -setup.d;
    const bool near = distance_to(end, setup.K0e_cloud) < 3.0 * setup.r;
    if (!low && !near) {
        throw DeformationFailure("end point outside [I <= -d] and N_3r(K0e); nu_eps too large",
                                 std::move(trace));
    }
    return end;
}

RetryResult eta_epsilon_with_retry(const DeformationSetup& setup, const Point& u,
                                   std::size_t max_retries) {
    DeformationSetup current = setup;
    for (std::size_t attempt = 0;; ++attempt) {
        try {
            return RetryResult{eta_epsilon(current, u), current.nu_eps, attempt};
        } catch (const DeformationFailure&) {
            if (attempt >= max_retries) throw;
            current.nu_eps *= 0.5;
        }
    }
}

std::vector<AnnulusCrossing> annulus_crossings(const DeformationSetup& setup, const FlowTrace& trace) {
    std::vector<AnnulusCrossing> out;
    std::ptrdiff_t inside = -1;  // last index with distance ≤ 2r
    for (std::size_t k = 0; k < trace.points.size(); ++k) {
        const double dist = distance_to(trace.points[k], setup.K0e_cloud);
        if (dist <= 2.0 * setup.r) {
            inside = static_cast<std::ptrdiff_t>(k);
        } else if (dist >= 3.0 * setup.r && inside >= 0) {
            const auto i0 = static_cast<std::size_t>(inside);
            out.push_back({trace.times[i0], trace.times[k], trace.energies[i0] - trace.energies[k]});
            inside = -1;
        }
    }
    return out;
}

SyntheticDeformation synthetic_two_cluster_setup(const SyntheticSpec& spec) {
    if (!(spec.eps_fraction > 0.0 && spec.eps_fraction <= 0.5)) {
        throw PreconditionError("eps_fraction must lie in (0, 1/2]");
    }
    auto f = two_cluster_functional(spec.q);
    const Space space = f->space();
    const Point origin = Point::zero(space);
    const Point e(space, {spec.q, 0.0});
    Cloud K0 = make_cloud({origin, e, -e}, true);
    Cloud K0i = make_cloud({origin}, true);
    Cloud K0e = make_cloud({e, -e}, true);

    SampleSpec sample;
    sample.lo = {-1.5 * spec.q, -spec.q};
    sample.hi = {1.5 * spec.q, spec.q};
    sample.count = spec.bound_samples;
    sample.seed = spec.seed;
    sample.rho = 0.1 * std::pow(spec.q, 6.0);

    SyntheticDeformation out{DeformationSetup{}, estimate_bounds(*f, K0, K0e, spec.r, sample)};
    const BoundsEstimate& b = out.bounds;
    const double d = std::min(b.rho, b.nu * spec.r) / 3.0;
    const double eps = spec.eps_fraction * d;
    out.setup = make_deformation_setup(f, K0i, K0e, spec.delta0, spec.r, b.rho, b.nu, b.nu_eps(eps), eps);
    return out;
}

std::vector<Point> sample_sublevel(const DeformationSetup& setup, const std::vector<double>& lo,
                                   const std::vector<double>& hi, std::size_t count,
                                   std::uint64_t seed, double band_fraction) {
    const Space& space = setup.f->space();
    if (lo.size() != space.dim || hi.size() != space.dim) throw DimensionError("box does not match the space");
    if (!(band_fraction >= 0.0 && band_fraction <= 1.0)) throw PreconditionError("band_fraction must lie in [0,1]");
    const auto band_target = static_cast<std::size_t>(std::llround(band_fraction * static_cast<double>(count)));

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Point> band;
    std::vector<Point> rest;
    const std::size_t budget = 10'000'000;
    for (std::size_t draw = 0; draw < budget && (band.size() < band_target || rest.size() < count - band_target);
         ++draw) {
        std::vector<double> c(space.dim);
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = lo[i] + (hi[i] - lo[i]) * unit(rng);
        Point u(space, std::move(c));
        const double e = setup.f->value(u);
        if (e > -setup.eps) continue;
        if (e >= -2.0 * setup.d) {
            if (band.size() < band_target) band.push_back(std::move(u));
        } else if (rest.size() < count - band_target) {
            rest.push_back(std::move(u));
        }
    }
    if (band.size() < band_target || rest.size() < count - band_target) {
        throw PreconditionError("could not sample enough points of [I <= -eps]");
    }
    band.insert(band.end(), std::make_move_iterator(rest.begin()), std::make_move_iterator(rest.end()));
    return band;
}

bool ContractReport::ok() const {
    return inclusion_failures == 0 && max_odd_error <= 1e-8 && max_speed_ratio <= 1.0 + 1e-8 &&
           max_energy_increase <= 1e-10 && crossing_violations == 0;
}

ContractReport verify_deformation_contract(const DeformationSetup& setup, const std::vector<Point>& points,
                                           std::size_t threads) {
    struct Row {
        bool failed = false;
        bool retried = false;
        double odd = 0.0;
        double speed = 0.0;
        double rise = 0.0;
        std::size_t crossings = 0;
        std::size_t violations = 0;
    };
    std::vector<Row> rows(points.size());

    auto inspect = [&](const FlowTrace& trace, Row& row) {
        for (std::size_t k = 1; k < trace.points.size(); ++k) {
            const double dt = trace.times[k] - trace.times[k - 1];
            const double dx = distance(trace.points[k], trace.points[k - 1]);
            if (dt > 0.0) row.speed = std::max(row.speed, dx / dt);
            row.rise = std::max(row.rise, trace.energies[k] - trace.energies[k - 1]);
        }
        for (const auto& c : annulus_crossings(setup, trace)) {
            const auto it = std::lower_bound(trace.times.begin(), trace.times.end(), c.t1);
            const double end_energy = trace.energies[static_cast<std::size_t>(it - trace.times.begin())];
            if (end_energy <= -setup.d) continue;
            ++row.crossings;
            if (c.energy_drop < 0.5 * setup.nu * setup.r) ++row.violations;
        }
    };

    parallel_for(points.size(), threads, [&](std::size_t i) {
        Row& row = rows[i];
        const Point& u = points[i];
        try {
            const RetryResult plus = eta_epsilon_with_retry(setup, u);
            const RetryResult minus = eta_epsilon_with_retry(setup, -u);
            row.retried = plus.retries > 0;
            row.odd = norm(plus.point + minus.point);
            DeformationSetup used = setup;
            used.nu_eps = plus.nu_eps_used;
            inspect(flow(used, u, used.flow_time()), row);
        } catch (const DeformationFailure& failure) {
            row.failed = true;
            inspect(failure.trace, row);
        }
    });

    ContractReport report;
    report.samples = points.size();
    for (const Row& row : rows) {
        report.inclusion_failures += row.failed ? 1 : 0;
        report.retried += row.retried ? 1 : 0;
        report.max_odd_error = std::max(report.max_odd_error, row.odd);
        report.max_speed_ratio = std::max(report.max_speed_ratio, row.speed);
        report.max_energy_increase = std::max(report.max_energy_increase, row.rise);
        report.crossings += row.crossings;
        report.crossing_violations += row.violations;
    }
    return report;
}

}  // namespace clark
