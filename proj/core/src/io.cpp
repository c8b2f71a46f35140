#include "clark/io.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

#include "clark/critical_point.hpp"

namespace clark {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    if (res.ec != std::errc{}) throw InternalError("to_chars failed");
    return std::string(buf, res.ptr);
}

std::string CsvWriter::escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void CsvWriter::row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) out_ << ',';
        out_ << escape(fields[i]);
    }
    out_ << "\r\n";
}

void write_accumulation_csv(std::ostream& out, const AccumulationReport& report) {
    CsvWriter w(out);
    w.row({"value", "residual", "t", "dist_to_K0hat", "label"});
    for (std::size_t i = 0; i < report.found.size(); ++i) {
        const auto& cp = report.found[i];
        w.row({format_double(cp.value), format_double(cp.residual), format_double(cp.point[0]),
               format_double(report.distances_to_K0hat[i]), to_string(cp.label)});
    }
}

void write_flow_trace_csv(std::ostream& out, const FlowTrace& trace) {
    CsvWriter w(out);
    std::vector<std::string> header{"time", "energy"};
    const std::size_t dim = trace.points.empty() ? 0 : trace.points.front().size();
    for (std::size_t i = 0; i < dim; ++i) header.push_back("x" + std::to_string(i));
    w.row(header);
    for (std::size_t k = 0; k < trace.times.size(); ++k) {
        std::vector<std::string> fields{format_double(trace.times[k]), format_double(trace.energies[k])};
        for (double c : trace.points[k].coords()) fields.push_back(format_double(c));
        w.row(fields);
    }
}

void write_minimax_csv(std::ostream& out, const std::vector<MinimaxEstimate>& estimates) {
    CsvWriter w(out);
    w.row({"j", "rho_star", "upper_bound", "budget"});
    for (const auto& e : estimates) {
        w.row({std::to_string(e.j), format_double(e.rho_star), format_double(e.upper_bound), e.budget});
    }
}

void write_solution_csv(std::ostream& out, const NodalSolution& solution) {
    CsvWriter w(out);
    w.row({"x", "u"});
    const Space& g = solution.grid_values.space();
    w.row({"0", "0"});
    for (std::size_t i = 0; i < g.dim; ++i) {
        w.row({format_double(g.mesh_width * static_cast<double>(i + 1)), format_double(solution.grid_values[i])});
    }
    w.row({"1", "0"});
}

void write_bvp_summary_csv(std::ostream& out, const std::vector<NodalSolution>& solutions) {
    CsvWriter w(out);
    w.row({"k", "energy_norm_sq", "j_value", "nehari_residual", "grid_energy_norm_sq", "discrete_residual",
           "sup_norm"});
    for (const auto& s : solutions) {
        w.row({std::to_string(s.k), format_double(s.energy_norm_sq), format_double(s.j_value),
               format_double(s.nehari_residual), format_double(s.grid_energy_norm_sq),
               format_double(s.discrete_residual), format_double(s.sup_norm)});
    }
}

}  // namespace clark
