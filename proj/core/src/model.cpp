#include "clark/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "clark/errors.hpp"
#include "clark/solvers.hpp"

namespace clark {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

double pow3(double e) { return std::pow(3.0, e); }

double pos(double x) { return x > 0.0 ? x : 0.0; }
double neg(double x) { return x < 0.0 ? -x : 0.0; }

double pow32(double y) { return y * std::sqrt(y); }

}  // namespace

std::string to_string(CriticalLabel label) {
    switch (label) {
        case CriticalLabel::Z: return "Z";
        case CriticalLabel::N: return "N";
        case CriticalLabel::NegN: return "-N";
        case CriticalLabel::Other: return "other";
    }
    return "other";
}

char to_char(Sign s) {
    switch (s) {
        case Sign::Zero: return '0';
        case Sign::Plus: return '+';
        case Sign::Minus: return '-';
    }
    return '?';
}

std::string pattern_string(const std::vector<Sign>& pattern) {
    std::string out;
    out.reserve(pattern.size());
    for (Sign s : pattern) out.push_back(to_char(s));
    return out;
}

double mu(double t) {
    if (t >= 1.0) return 1.0;
    if (t <= -1.0) return -1.0;
    return std::sin(kHalfPi * t);
}

double mu_prime(double t) {
    if (t >= 1.0 || t <= -1.0) return 0.0;
    return kHalfPi * std::cos(kHalfPi * t);
}

double phi(double t) {
    if (t > 1.0) return (t - 1.0) * (t - 1.0);
    if (t < -1.0) return (t + 1.0) * (t + 1.0);
    return 0.0;
}

double phi_prime(double t) {
    if (t > 1.0) return 2.0 * (t - 1.0);
    if (t < -1.0) return 2.0 * (t + 1.0);
    return 0.0;
}

double branch_plus(std::size_t j) { return 9.0 * pow3(-2.0 * static_cast<double>(j)); }
double branch_minus(std::size_t j) { return -pow3(-2.0 * static_cast<double>(j)); }

ClarkModel::ClarkModel(ModelParams params) : params_(params), space_(Space::l2(params.n + 1)) {
    weights_.resize(params_.n);
    for (std::size_t j = 1; j <= params_.n; ++j) weights_[j - 1] = pow3(-static_cast<double>(j));
}

std::shared_ptr<const ClarkModel> clark_model(const ModelParams& params) {
    if (params.n < 1) throw InvalidParams("clark_model needs n >= 1");
    return std::make_shared<const ClarkModel>(params);
}

double ClarkModel::value(const Point& u) const {
    const double t = u[0];
    const double m = mu(t);
    const double ap = 2.0 + m;
    const double am = 2.0 - m;
    double quadratic = 0.0;
    double power = 0.0;
    for (std::size_t j = 0; j < params_.n; ++j) {
        const double x = u[j + 1];
        quadratic += x * x;
        power += weights_[j] * (ap * pow32(pos(x)) + am * pow32(neg(x)));
    }
    return 0.5 * quadratic - (2.0 / 3.0) * power + phi(t);
}

Point ClarkModel::grad(const Point& u) const {
    const double t = u[0];
    const double m = mu(t);
    const double ap = 2.0 + m;
    const double am = 2.0 - m;
    Point g = Point::zero(space_);
    double signed_power = 0.0;
    for (std::size_t j = 0; j < params_.n; ++j) {
        const double x = u[j + 1];
        const double xp = pos(x);
        const double xm = neg(x);
        g[j + 1] = x - weights_[j] * (ap * std::sqrt(xp) - am * std::sqrt(xm));
        signed_power += weights_[j] * (pow32(xp) - pow32(xm));
    }
    g[0] = -(2.0 / 3.0) * mu_prime(t) * signed_power + phi_prime(t);
    return g;
}

double ClarkModel::kink_distance(const Point& u, std::size_t coord) const {
    if (coord == 0) return std::min(std::abs(u[0] - 1.0), std::abs(u[0] + 1.0));
    return std::abs(u[coord]);
}

Point ClarkModel::make_point(double t, const std::vector<double>& x) const {
    if (x.size() > params_.n) throw DimensionError("more x-coordinates than the truncation holds");
    std::vector<double> coords(params_.n + 1, 0.0);
    coords[0] = t;
    std::copy(x.begin(), x.end(), coords.begin() + 1);
    return Point(space_, std::move(coords));
}

Point ClarkModel::branch_point(double t, const std::vector<Sign>& pattern) const {
    if (pattern.size() > params_.n) throw PreconditionError("pattern longer than the truncation");
    Point u = Point::zero(space_);
    u[0] = t;
    const double ap = a_plus(t);
    const double am = a_minus(t);
    for (std::size_t j = 1; j <= pattern.size(); ++j) {
        const double scale = pow3(-2.0 * static_cast<double>(j));
        switch (pattern[j - 1]) {
            case Sign::Zero: break;
            case Sign::Plus: u[j] = scale * ap * ap; break;
            case Sign::Minus: u[j] = -scale * am * am; break;
        }
    }
    return u;
}

double ClarkModel::branch_t_derivative(double t, const std::vector<Sign>& pattern) const {
    return grad(branch_point(t, pattern))[0];
}

CriticalLabel classify(const Point& u, double tol) {
    const double t = u[0];
    if (x_norm(u) <= tol && std::abs(t) <= 1.0 + tol) return CriticalLabel::Z;
    if (std::abs(t - 1.0) <= tol) return CriticalLabel::N;
    if (std::abs(t + 1.0) <= tol) return CriticalLabel::NegN;
    return CriticalLabel::Other;
}

double x_norm(const Point& u) {
    double acc = 0.0;
    for (std::size_t i = 1; i < u.size(); ++i) acc += u[i] * u[i];
    return std::sqrt(acc);
}

std::vector<CriticalPoint> enumerate_critical_set(const ModelParams& params, std::size_t z_samples) {
    const auto model = clark_model(params);
    const std::size_t n = params.n;

    std::size_t count = 1;
    for (std::size_t j = 0; j < n; ++j) count *= 3;

    std::vector<CriticalPoint> positive;
    positive.reserve(count);
    std::vector<Sign> pattern(n, Sign::Zero);
    for (std::size_t code = 0; code < count; ++code) {
        // Base-3 digits, x_1 most significant: 0 -> zero, 1 -> plus, 2 -> minus.
        std::size_t rest = code;
        for (std::size_t j = n; j-- > 0;) {
            pattern[j] = static_cast<Sign>(rest % 3);
            rest /= 3;
        }
        std::vector<double> x(n, 0.0);
        for (std::size_t j = 1; j <= n; ++j) {
            if (pattern[j - 1] == Sign::Plus) x[j - 1] = branch_plus(j);
            if (pattern[j - 1] == Sign::Minus) x[j - 1] = branch_minus(j);
        }
        CriticalPoint cp;
        cp.point = model->make_point(1.0, x);
        cp.value = model->value(cp.point);
        cp.residual = norm(model->grad(cp.point));
        cp.label = CriticalLabel::N;
        cp.pattern = pattern;
        positive.push_back(std::move(cp));
    }

    std::vector<CriticalPoint> out = positive;
    for (const CriticalPoint& p : positive) {
        CriticalPoint cp;
        cp.point = -p.point;
        cp.value = model->value(cp.point);
        cp.residual = norm(model->grad(cp.point));
        cp.label = CriticalLabel::NegN;
        cp.pattern.reserve(n);
        for (Sign s : p.pattern) {
            cp.pattern.push_back(s == Sign::Plus ? Sign::Minus : s == Sign::Minus ? Sign::Plus : s);
        }
        out.push_back(std::move(cp));
    }

    for (std::size_t i = 0; i < z_samples; ++i) {
        const double t = z_samples == 1 ? 0.0
                                        : -1.0 + 2.0 * static_cast<double>(i) /
                                                     static_cast<double>(z_samples - 1);
        CriticalPoint cp;
        cp.point = model->make_point(t, {});
        cp.value = model->value(cp.point);
        cp.residual = norm(model->grad(cp.point));
        cp.label = CriticalLabel::Z;
        cp.pattern.assign(n, Sign::Zero);
        out.push_back(std::move(cp));
    }
    return out;
}

bool InteriorReport::ok() const {
    const bool bounds = std::all_of(tail_bounds.begin(), tail_bounds.end(),
                                    [](const TailBoundRow& r) { return r.holds; });
    return bounds && violations.empty();
}

InteriorReport verify_no_interior_negatives(const ModelParams& params, const InteriorGrid& grid,
                                            const SolveConfig& cfg) {
    if (!(grid.delta > 0.0 && grid.delta < 1.0)) throw PreconditionError("delta must lie in (0,1)");
    if (grid.t_count == 0 || grid.x_count == 0) throw PreconditionError("empty seed grid");
    const auto model = clark_model(params);
    InteriorReport report;

    const double q = pow3(-4.0);
    for (std::size_t j0 = 1; j0 <= grid.tail_j0_max; ++j0) {
        TailBoundRow row;
        row.j0 = j0;
        row.lower = pow3(-4.0 * static_cast<double>(j0));
        row.two_thirds = (2.0 / 3.0) * row.lower;
        row.tail = 27.0 * pow3(-4.0 * static_cast<double>(j0 + 1)) / (1.0 - q);
        row.margin = 1.0 - row.tail / row.lower;
        row.holds = row.tail < row.two_thirds && row.two_thirds < row.lower;
        report.tail_bounds.push_back(row);
    }

    auto spread = [](std::size_t count, double half_width, std::size_t i) {
        if (count == 1) return 0.0;
        return -half_width + 2.0 * half_width * static_cast<double>(i) / static_cast<double>(count - 1);
    };

    const std::size_t n = params.n;
    std::size_t total = grid.t_count;
    for (std::size_t j = 0; j < n; ++j) total *= grid.x_count;

    std::vector<Point> seeds;
    seeds.reserve(total);
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t rest = code;
        std::vector<double> x(n);
        for (std::size_t j = n; j-- > 0;) {
            x[j] = spread(grid.x_count, branch_plus(j + 1), rest % grid.x_count);
            rest /= grid.x_count;
        }
        const double t = spread(grid.t_count, 1.0 - grid.delta, rest);
        seeds.push_back(model->make_point(t, x));
    }

    report.seeds = seeds.size();
    for (const Point& seed : seeds) {
        const auto result = gradient_flow_solve(*model, seed, cfg);
        if (!result.converged()) {
            ++report.not_converged;
            continue;
        }
        ++report.converged;
        const Point& u = result.point.point;
        if (std::abs(u[0]) < 1.0 - grid.delta) {
            ++report.interior_converged;
            const double xn = x_norm(u);
            report.max_interior_x_norm = std::max(report.max_interior_x_norm, xn);
            if (xn > grid.x_tol) report.violations.push_back(u);
        }
    }
    return report;
}

}  // namespace clark
