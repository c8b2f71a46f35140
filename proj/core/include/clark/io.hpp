#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "clark/deformation.hpp"
#include "clark/minimax.hpp"
#include "clark/nodal_bvp.hpp"
#include "clark/solvers.hpp"

namespace clark {

/// Shortest decimal string that round-trips to the same double ('.' separator,
/// independent of the global locale).  Non-finite values become "nan"/"inf"/"-inf".
std::string format_double(double v);

/// RFC 4180 writer: comma separated, CRLF record terminator, fields quoted
/// when they contain a comma, quote, CR or LF.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void row(const std::vector<std::string>& fields);

    static std::string escape(std::string_view field);

private:
    std::ostream& out_;
};

/// value, residual, t, dist_to_K0hat, label
void write_accumulation_csv(std::ostream& out, const AccumulationReport& report);

/// time, energy, x0, x1, …
void write_flow_trace_csv(std::ostream& out, const FlowTrace& trace);

/// j, rho_star, upper_bound, budget
void write_minimax_csv(std::ostream& out, const std::vector<MinimaxEstimate>& estimates);

/// x, u  (boundary zeros included)
void write_solution_csv(std::ostream& out, const NodalSolution& solution);

/// k, energy_norm_sq, j_value, nehari_residual, grid_energy_norm_sq, discrete_residual, sup_norm
void write_bvp_summary_csv(std::ostream& out, const std::vector<NodalSolution>& solutions);

}  // namespace clark
