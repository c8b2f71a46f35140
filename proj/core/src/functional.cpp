#include "clark/functional.hpp"

#include <algorithm>
#include <cmath>

#include "clark/errors.hpp"
#include "clark/topology.hpp"

namespace clark {

LambdaFunctional::LambdaFunctional(Space space, ValueFn value, GradFn grad, std::string name,
                                   bool even, Smoothness smoothness)
    : space_(space),
      value_(std::move(value)),
      grad_(std::move(grad)),
      name_(std::move(name)),
      even_(even),
      smoothness_(smoothness) {}

void validate_argument(const Functional& f, const Point& u) {
    if (!(u.space() == f.space())) {
        throw DimensionError(f.name() + " is defined on " + f.space().describe() +
                             ", got a point in " + u.space().describe());
    }
    if (!u.all_finite()) throw InvalidPoint("non-finite coordinates passed to " + f.name());
}

double evaluate(const Functional& f, const Point& u) {
    validate_argument(f, u);
    return f.value(u);
}

Point gradient(const Functional& f, const Point& u) {
    validate_argument(f, u);
    return f.grad(u);
}

double residual(const Functional& f, const Point& u) { return norm(gradient(f, u)); }

RelErrorReport fd_gradient_check(const Functional& f, const Point& u, double h) {
    if (!(h > 0.0)) throw PreconditionError("finite-difference step must be positive");
    validate_argument(f, u);

    RelErrorReport report;
    report.analytic_covector = to_covector(f.grad(u));
    report.fd_covector.assign(u.size(), 0.0);

    Point probe = u;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (f.kink_distance(u, i) < 10.0 * h) {
            report.skipped.push_back(i);
            continue;
        }
        const double saved = probe[i];
        probe[i] = saved + h;
        const double up = f.value(probe);
        probe[i] = saved - h;
        const double down = f.value(probe);
        probe[i] = saved;
        report.fd_covector[i] = (up - down) / (2.0 * h);
        report.checked.push_back(i);
    }

    double scale = 0.0;
    double worst = 0.0;
    for (std::size_t i : report.checked) {
        scale = std::max({scale, std::abs(report.fd_covector[i]),
                          std::abs(report.analytic_covector[i])});
        worst = std::max(worst, std::abs(report.fd_covector[i] - report.analytic_covector[i]));
    }
    report.max_rel_error = scale > 0.0 ? worst / scale : 0.0;
    return report;
}

PSReport ps_diagnostic(const Functional& f, const std::vector<Point>& seq, double c, double tol) {
    if (seq.empty()) throw EmptyInput("ps_diagnostic needs a nonempty sequence");
    if (!(tol > 0.0)) throw PreconditionError("ps_diagnostic tolerance must be positive");

    PSReport report;
    report.target_level = c;
    for (const Point& u : seq) {
        report.value_trace.push_back(evaluate(f, u));
        report.residual_trace.push_back(norm(f.grad(u)));
    }

    const std::size_t len = seq.size();
    const std::size_t tail_len = (len + 3) / 4;
    const std::size_t first = len - tail_len;

    bool values_ok = true;
    bool residuals_ok = true;
    for (std::size_t i = first; i < len; ++i) {
        values_ok = values_ok && std::abs(report.value_trace[i] - c) <= tol;
        residuals_ok = residuals_ok && report.residual_trace[i] <= tol;
    }
    report.is_ps_sequence = values_ok && residuals_ok;

    Cloud tail;
    tail.points.assign(seq.begin() + static_cast<std::ptrdiff_t>(first), seq.end());
    const std::size_t min_members = tail_len == 1 ? 1 : 2;
    for (const auto& block : components(tail, 0.5 * tol)) {
        if (block.size() < min_members) continue;
        Point centroid = Point::zero(tail.points[block.front()].space());
        for (std::size_t i : block) centroid += tail.points[i];
        centroid *= 1.0 / static_cast<double>(block.size());
        bool tight = true;
        for (std::size_t i : block) tight = tight && distance(tail.points[i], centroid) <= tol;
        if (tight) {
            report.cluster_points.push_back(centroid);
            report.has_convergent_subsequence = true;
        }
    }

    std::string note;
    if (!report.is_ps_sequence) {
        note = "not a PS sequence at level c:";
        if (!values_ok) note += " values do not approach c;";
        if (!residuals_ok) note += " gradient norms stay above tol;";
    } else {
        note = "PS sequence at level c within tol.";
    }
    note += " Finite truncation " + f.space().describe() +
            ": every bounded sequence clusters, so a convergent subsequence here says nothing "
            "about (PS)_c of the infinite-dimensional problem.";
    report.note = std::move(note);
    return report;
}

}  // namespace clark
