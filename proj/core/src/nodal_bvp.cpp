#include "clark/nodal_bvp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "clark/errors.hpp"
#include "clark/ode.hpp"
#include "clark/sublinear.hpp"

namespace clark {

namespace {

constexpr double kTol = 1e-10;
constexpr double kEventTol = 1e-12;

void require_exponent(double p) {
    if (!(p > 0.0 && p < 1.0)) throw InvalidParams("sublinear exponent p must lie in (0,1)");
}

double signed_power(double u, double p) {
    const double a = std::abs(u);
    return a > 0.0 ? std::copysign(std::pow(a, p), u) : 0.0;
}

auto make_rhs(double p) {
    return [p](double, std::span<const double> y) {
        const double u = y[0];
        const double v = y[1];
        return std::vector<double>{v, -signed_power(u, p), v * v, std::pow(std::abs(u), p + 1.0)};
    };
}

double first_integral(const std::vector<double>& y, double p) {
    return 0.5 * y[1] * y[1] + std::pow(std::abs(y[0]), p + 1.0) / (p + 1.0);
}

bool changed_sign(double a, double b) { return b == 0.0 || (a < 0.0) != (b < 0.0); }

struct Base {
    ShootResult shot;
    double T1 = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
};

Base make_base(double p) {
    Base b{shoot(p, 1.0, 20.0, 1), 0.0, 0.0, 0.0};
    b.T1 = b.shot.crossings.front();
    b.beta = b.T1;
    b.alpha = std::pow(b.beta, 2.0 / (p - 1.0));
    return b;
}

void fill_grid_diagnostics(NodalSolution& s, const Space& grid) {
    const auto energy = sublinear_energy(s.p, grid);
    s.grid_energy_norm_sq = norm_sq(s.grid_values);
    const double pi = energy->power_integral(s.grid_values);
    s.grid_nehari_residual = std::abs(s.grid_energy_norm_sq - pi) / s.grid_energy_norm_sq;
    const auto r = energy->strong_residual(s.grid_values);
    double rmax = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        rmax = std::max(rmax, std::abs(r[i]));
        scale = std::max(scale, std::pow(std::abs(s.grid_values[i]), s.p));
    }
    s.discrete_residual = rmax / scale;
    s.sup_norm = 0.0;
    for (double v : s.grid_values.coords()) s.sup_norm = std::max(s.sup_norm, std::abs(v));
}

void require_grid(const Space& grid) {
    if (grid.kind != Space::Kind::H01Grid) throw InvalidParams("expected an H01Grid space");
    if (grid.dim < 2) throw InvalidParams("grid too coarse");
}

}  // namespace

Trajectory::Trajectory(double p, std::vector<double> times, std::vector<std::vector<double>> states)
    : p_(p), times_(std::move(times)), states_(std::move(states)) {
    if (times_.empty() || times_.size() != states_.size()) throw InternalError("malformed trajectory");
}

std::vector<double> Trajectory::state(double t) const {
    if (!(t >= times_.front() && t <= times_.back())) throw PreconditionError("time outside the trajectory");
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const auto k = static_cast<std::size_t>(std::distance(times_.begin(), it)) - 1;
    const double h = t - times_[k];
    if (h == 0.0) return states_[k];
    return ode::step(ode::dormand_prince(), make_rhs(p_), times_[k], states_[k], h).y;
}

ShootResult shoot(double p, double slope, double t_max, std::size_t crossings) {
    require_exponent(p);
    if (!(slope != 0.0) || !std::isfinite(slope)) throw PreconditionError("slope must be nonzero");
    if (!(t_max > 0.0)) throw PreconditionError("t_max must be positive");
    if (crossings == 0) throw PreconditionError("need at least one crossing");

    const auto tab = ode::dormand_prince();
    const auto rhs = make_rhs(p);
    const double max_step = t_max / 2000.0;

    std::vector<double> times{0.0};
    std::vector<std::vector<double>> states{{0.0, slope, 0.0, 0.0}};
    std::vector<double> found;
    const double e0 = first_integral(states.back(), p);
    double drift = 0.0;

    double t = 0.0;
    double h = max_step;
    while (found.size() < crossings) {
        if (t >= t_max) throw NoCrossing("fewer zero crossings than requested before t_max");
        h = std::min({h, max_step, t_max - t});
        const auto& y = states.back();
        auto out = ode::step(tab, rhs, t, y, h);
        if (out.error > kTol) {
            h = ode::next_step(h, out.error, kTol, tab.order);
            if (h < 1e-15) throw IntegrationError("shooting step size underflow");
            continue;
        }
        double advance = h;
        if (t > 0.0 && changed_sign(y[0], out.y[0])) {
            double lo = 0.0;
            double hi = h;
            while (hi - lo > kEventTol) {
                const double mid = 0.5 * (lo + hi);
                if (changed_sign(y[0], ode::step(tab, rhs, t, y, mid).y[0])) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            found.push_back(t + 0.5 * (lo + hi));
            advance = hi;
            out = ode::step(tab, rhs, t, y, hi);
        }
        t += advance;
        times.push_back(t);
        states.push_back(std::move(out.y));
        drift = std::max(drift, std::abs(first_integral(states.back(), p) - e0));
        h = ode::next_step(h, out.error, kTol, tab.order);
    }
    return ShootResult{p, slope, Trajectory(p, std::move(times), std::move(states)), std::move(found), drift};
}

NodalSolution base_solution(double p, const Space& grid) { return nodal_solution(p, 1, grid, 1); }

NodalSolution nodal_solution(double p, std::size_t k, const Space& grid, int sign) {
    require_exponent(p);
    require_grid(grid);
    if (k == 0) throw PreconditionError("k must be at least 1");
    if (sign != 1 && sign != -1) throw PreconditionError("sign must be +1 or -1");

    const Base base = make_base(p);
    const double kd = static_cast<double>(k);
    const double amp = std::pow(kd, 2.0 / (p - 1.0)) * base.alpha;  // total amplitude factor
    const double compress = kd * base.beta;                          // x ↦ shot time

    NodalSolution s;
    s.p = p;
    s.k = k;
    s.sign = sign;

    const auto& end = base.shot.trajectory.state(base.T1);
    // One compressed copy: ‖·‖² = amp²·compress·∫w′², ∫|·|^{p+1} = amp^{p+1}/compress·∫|w|^{p+1}.
    const double piece_norm = amp * amp * compress * end[2];
    const double piece_power = std::pow(amp, p + 1.0) / compress * end[3];
    s.energy_norm_sq = kd * piece_norm;
    s.power_integral = kd * piece_power;
    s.j_value = 0.5 * s.energy_norm_sq - s.power_integral / (p + 1.0);
    s.nehari_residual = std::abs(s.energy_norm_sq - s.power_integral) / s.energy_norm_sq;
    s.slope = sign * amp * compress;
    for (std::size_t i = 1; i < k; ++i) s.zeros.push_back(static_cast<double>(i) / kd);

    std::vector<double> values(grid.dim);
    for (std::size_t i = 0; i < grid.dim; ++i) {
        const double x = grid.mesh_width * static_cast<double>(i + 1);
        const double y = kd * x;
        const auto piece = std::min(static_cast<std::size_t>(std::floor(y)), k - 1);
        const double local = std::clamp((y - static_cast<double>(piece)) * base.beta, 0.0, base.T1);
        const double parity = piece % 2 == 0 ? 1.0 : -1.0;
        values[i] = sign * parity * amp * base.shot.trajectory.u(local);
    }
    s.grid_values = Point(grid, std::move(values));
    fill_grid_diagnostics(s, grid);
    return s;
}

NodalSolution reshoot_nodal(double p, std::size_t k, const Space& grid, int sign) {
    require_exponent(p);
    require_grid(grid);
    if (k == 0) throw PreconditionError("k must be at least 1");
    if (sign != 1 && sign != -1) throw PreconditionError("sign must be +1 or -1");

    // k-th zero time as a function of the slope; increasing in the slope for p < 1.
    auto kth_zero = [&](double slope) { return shoot(p, slope, 1e3, k).crossings.back(); };
    double lo = 1.0;
    double hi = 1.0;
    while (kth_zero(lo) > 1.0) lo *= 0.5;
    while (kth_zero(hi) < 1.0) hi *= 2.0;
    for (int it = 0; it < 100 && hi / lo - 1.0 > 1e-13; ++it) {
        const double mid = std::sqrt(lo * hi);
        if (kth_zero(mid) < 1.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double slope = std::sqrt(lo * hi);
    const ShootResult shot = shoot(p, sign * slope, 1e3, k);
    const double end_time = shot.crossings.back();

    NodalSolution s;
    s.p = p;
    s.k = k;
    s.sign = sign;
    s.slope = sign * slope;
    s.zeros.assign(shot.crossings.begin(), shot.crossings.end() - 1);
    const auto end = shot.trajectory.state(end_time);
    s.energy_norm_sq = end[2];
    s.power_integral = end[3];
    s.j_value = 0.5 * s.energy_norm_sq - s.power_integral / (p + 1.0);
    s.nehari_residual = std::abs(s.energy_norm_sq - s.power_integral) / s.energy_norm_sq;

    std::vector<double> values(grid.dim);
    for (std::size_t i = 0; i < grid.dim; ++i) {
        const double x = grid.mesh_width * static_cast<double>(i + 1);
        values[i] = shot.trajectory.u(std::min(x, end_time));
    }
    s.grid_values = Point(grid, std::move(values));
    fill_grid_diagnostics(s, grid);
    return s;
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw DimensionError("log_log_slope needs equal lengths");
    if (x.size() < 2) throw PreconditionError("log_log_slope needs at least two points");
    const std::size_t n = x.size();
    std::vector<double> lx(n);
    std::vector<double> ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(x[i] > 0.0 && y[i] > 0.0)) throw PreconditionError("log_log_slope needs positive data");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(n);
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(n);
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    if (!(sxx > 0.0)) throw PreconditionError("log_log_slope needs distinct x values");
    return sxy / sxx;
}

}  // namespace clark
