#include "runner.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "clark/clark.hpp"

namespace clark::tools {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

const std::map<std::string, std::vector<KeySpec>>& key_table() {
    static const std::map<std::string, std::vector<KeySpec>> table{
        {"enumerate",
         {{"n", "3", "truncation dimension"}, {"z_samples", "21", "evenly spaced samples of Z"}}},
        {"scan",
         {{"n", "4", "truncation dimension"},
          {"seeds", "2000", "number of random seeds"},
          {"lo", "-1e-3", "lower end of the value window"},
          {"hi", "0", "upper end of the value window"},
          {"residual_tol", "1e-12", "solver residual tolerance"},
          {"z_samples", "201", "samples of the Z cloud used as K0hat"}}},
        {"deform",
         {{"q", "1", "cluster position of the synthetic functional"},
          {"delta0", "0.5", "half separation of K0i and K0e"},
          {"r", "0.1", "neighbourhood radius, at most delta0/3"},
          {"eps_fraction", "0.25", "eps as a fraction of d"},
          {"bound_samples", "20000", "samples for the gradient bounds"},
          {"samples", "500", "points of [I <= -eps] pushed through eta"}}},
        {"lemma21",
         {{"example", "gap", "gap | segment | model | file"},
          {"n", "2", "truncation for the model example"},
          {"schedule", "", "comma-separated decreasing deltas (empty: example default)"},
          {"cloud_file", "", "JSON array of coordinate arrays (example=file)"}}},
        {"minimax",
         {{"functional", "model", "model | wrapper"},
          {"n", "8", "model truncation"},
          {"grid", "10", "wrapper grid: interior nodes"},
          {"p", "0.5", "wrapper exponent"},
          {"jmax", "6", "largest genus"},
          {"samples", "256", "sphere samples per radius"},
          {"starts", "16", "ascent starts per radius"},
          {"iters", "200", "ascent iterations"}}},
        {"bvp",
         {{"p", "0.5", "sublinear exponent"},
          {"kmax", "6", "largest nodal count"},
          {"grid", "2000", "interior grid nodes"},
          {"solutions", "true", "write solution_k.csv files"}}},
        {"psdiag",
         {{"n", "8", "model truncation"},
          {"sequence", "structured", "structured | constant | stalled"},
          {"c", "0", "target level"},
          {"tol", "1e-4", "diagnostic tolerance"}}},
    };
    return table;
}

// ---- parameter access -------------------------------------------------------

class Params {
public:
    explicit Params(const std::map<std::string, std::string>& p) : p_(p) {}

    const std::string& str(const std::string& key) const {
        auto it = p_.find(key);
        if (it == p_.end()) throw UsageError("missing parameter " + key);
        return it->second;
    }
    double real(const std::string& key) const {
        const auto& s = str(key);
        double v = 0.0;
        try {
            v = CLI::detail::to_lower(s) == "nan" ? std::nan("") : std::stod(s);
        } catch (const std::exception&) {
            throw UsageError("parameter " + key + " is not a number: " + s);
        }
        if (!std::isfinite(v)) throw UsageError("parameter " + key + " must be finite");
        return v;
    }
    std::size_t count(const std::string& key) const {
        const auto& s = str(key);
        if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
            throw UsageError("parameter " + key + " is not a nonnegative integer: " + s);
        }
        return static_cast<std::size_t>(std::stoull(s));
    }
    bool flag(const std::string& key) const {
        const auto s = CLI::detail::to_lower(str(key));
        if (s == "true" || s == "1" || s == "yes") return true;
        if (s == "false" || s == "0" || s == "no") return false;
        throw UsageError("parameter " + key + " is not a boolean: " + s);
    }

private:
    const std::map<std::string, std::string>& p_;
};

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw UsageError("bad list entry: " + item);
        }
    }
    return out;
}

json point_json(const Point& u) { return json(u.values()); }

// ---- experiments ------------------------------------------------------------

struct Outcome {
    json results = json::object();
    std::map<std::string, std::string> csv;  // file name -> content
    bool verified = true;
    std::vector<std::string> failures;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            verified = false;
            failures.push_back(what);
        }
    }
};

Outcome run_enumerate(const ExperimentConfig& cfg, const Params& p) {
    ModelParams mp{p.count("n")};
    const auto points = enumerate_critical_set(mp, p.count("z_samples"));
    Outcome out;
    json arr = json::array();
    double max_res = 0.0;
    std::size_t n_count = 0;
    std::size_t neg_count = 0;
    std::size_t z_count = 0;
    for (const auto& cp : points) {
        std::vector<double> x(cp.point.values().begin() + 1, cp.point.values().end());
        arr.push_back({{"t", cp.point[0]},
                       {"x", x},
                       {"value", cp.value},
                       {"label", to_string(cp.label)},
                       {"pattern", pattern_string(cp.pattern)}});
        max_res = std::max(max_res, cp.residual);
        n_count += cp.label == CriticalLabel::N ? 1 : 0;
        neg_count += cp.label == CriticalLabel::NegN ? 1 : 0;
        z_count += cp.label == CriticalLabel::Z ? 1 : 0;
    }
    out.results = {{"n", mp.n},
                   {"points", arr},
                   {"counts", {{"N", n_count}, {"-N", neg_count}, {"Z", z_count}}},
                   {"max_residual", max_res}};
    out.require(max_res < 1e-12, "enumerated point with residual >= 1e-12");
    (void)cfg;
    return out;
}

Outcome run_scan(const ExperimentConfig& cfg, const Params& p) {
    ModelParams mp{p.count("n")};
    const auto model = clark_model(mp);
    std::vector<Point> z;
    const std::size_t zs = std::max<std::size_t>(2, p.count("z_samples"));
    for (std::size_t i = 0; i < zs; ++i) {
        z.push_back(model->make_point(-1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(zs - 1), {}));
    }
    SolveConfig sc;
    sc.residual_tol = p.real("residual_tol");
    sc.seed_rng = cfg.rng_seed;
    sc.threads = cfg.threads;
    const auto report = accumulation_scan(*model, make_cloud(z, true), {p.real("lo"), p.real("hi")},
                                          p.count("seeds"), sc, model_seed_box(mp),
                                          [](const Point& u) { return classify(u); });
    Outcome out;
    json found = json::array();
    std::size_t other = 0;
    for (std::size_t i = 0; i < report.found.size(); ++i) {
        const auto& cp = report.found[i];
        found.push_back({{"value", cp.value},
                         {"residual", cp.residual},
                         {"t", cp.point[0]},
                         {"dist_to_K0hat", report.distances_to_K0hat[i]},
                         {"label", to_string(cp.label)}});
        other += cp.label == CriticalLabel::Other ? 1 : 0;
    }
    out.results = {{"n", mp.n},
                   {"window", {report.window.first, report.window.second}},
                   {"attempted", report.attempted},
                   {"converged", report.converged},
                   {"found", found}};
    std::ostringstream csv;
    write_accumulation_csv(csv, report);
    out.csv["accumulation.csv"] = csv.str();
    out.require(other == 0, "converged point outside Z, N and -N");
    return out;
}

Outcome run_deform(const ExperimentConfig& cfg, const Params& p) {
    SyntheticSpec spec;
    spec.q = p.real("q");
    spec.delta0 = p.real("delta0");
    spec.r = p.real("r");
    spec.eps_fraction = p.real("eps_fraction");
    spec.bound_samples = p.count("bound_samples");
    spec.seed = cfg.rng_seed;
    const auto syn = synthetic_two_cluster_setup(spec);
    const DeformationSetup& s = syn.setup;
    const auto pts = sample_sublevel(s, {-1.5 * spec.q, -spec.q}, {1.5 * spec.q, spec.q}, p.count("samples"),
                                     cfg.rng_seed + 1);
    const auto rep = verify_deformation_contract(s, pts, cfg.threads);

    Outcome out;
    out.results = {{"setup",
                    {{"q", spec.q},
                     {"delta0", s.delta0},
                     {"r", s.r},
                     {"rho", s.rho},
                     {"nu", s.nu},
                     {"nu_eps", s.nu_eps},
                     {"d", s.d},
                     {"eps", s.eps},
                     {"T_eps", s.flow_time()},
                     {"K0i", json::array({point_json(s.K0i_cloud.points[0])})},
                     {"K0e", {point_json(s.K0e_cloud.points[0]), point_json(s.K0e_cloud.points[1])}},
                     {"bounds_empirical", true}}},
                   {"contract",
                    {{"samples", rep.samples},
                     {"inclusion_failures", rep.inclusion_failures},
                     {"retried", rep.retried},
                     {"max_odd_error", rep.max_odd_error},
                     {"max_speed_ratio", rep.max_speed_ratio},
                     {"max_energy_increase", rep.max_energy_increase},
                     {"annulus_crossings", rep.crossings},
                     {"annulus_violations", rep.crossing_violations},
                     {"ok", rep.ok()}}}};
    // Trace of the first band sample, for plotting.
    if (!pts.empty()) {
        std::ostringstream csv;
        write_flow_trace_csv(csv, flow(s, pts.front(), s.flow_time()));
        out.csv["trace.csv"] = csv.str();
    }
    out.require(rep.ok(), "deformation contract violated");
    return out;
}

Outcome run_lemma21(const ExperimentConfig&, const Params& p) {
    const std::string example = p.str("example");
    std::vector<Point> pts;
    std::vector<double> schedule;
    if (example == "gap" || example == "segment") {
        const Space line = Space::l2(1);
        if (example == "gap") {
            pts.emplace_back(line, std::vector<double>{0.0});
            for (int i = 50; i <= 100; ++i) pts.emplace_back(line, std::vector<double>{i / 100.0});
        } else {
            for (int i = -100; i <= 100; ++i) pts.emplace_back(line, std::vector<double>{i / 100.0});
        }
        schedule = {0.3, 0.2, 0.1, 0.05};
    } else if (example == "model") {
        ModelParams mp{p.count("n")};
        for (const auto& cp : enumerate_critical_set(mp, 20001)) pts.push_back(cp.point);
        schedule = {0.1, 0.03, 0.01, 3e-3, 1e-3, 3e-4, 1e-4};
    } else if (example == "file") {
        std::ifstream in(p.str("cloud_file"));
        if (!in) throw UsageError("cannot open cloud_file " + p.str("cloud_file"));
        json data;
        try {
            in >> data;
            for (const auto& row : data) {
                auto c = row.get<std::vector<double>>();
                pts.emplace_back(Space::l2(c.size()), std::move(c));
            }
        } catch (const json::exception& e) {
            throw UsageError(std::string("cloud_file is not a JSON array of arrays: ") + e.what());
        }
    } else {
        throw UsageError("unknown lemma21 example: " + example);
    }
    if (!p.str("schedule").empty()) schedule = parse_list(p.str("schedule"));
    if (schedule.empty()) throw UsageError("lemma21 needs a schedule");

    const Cloud cloud = make_cloud(pts);
    const auto rep = lemma21_check(cloud, schedule);
    Outcome out;
    json levels = json::array();
    for (const auto& l : rep.levels) {
        levels.push_back({{"delta", l.delta},
                          {"origin_component", l.origin_component},
                          {"size", l.origin_component.size()},
                          {"nested_in_previous", l.nested_in_previous}});
    }
    out.results = {{"example", example},
                   {"cloud_size", cloud.size()},
                   {"levels", levels},
                   {"stabilized", rep.stabilized},
                   {"stabilized_from", rep.stabilized_from},
                   {"matches_direct_search", rep.matches_direct_search}};
    out.require(rep.matches_direct_search, "origin component disagrees with direct search");
    return out;
}

Outcome run_minimax(const ExperimentConfig& cfg, const Params& p) {
    FunctionalPtr f;
    const std::string which = p.str("functional");
    if (which == "model") {
        f = clark_model(ModelParams{p.count("n")});
    } else if (which == "wrapper") {
        f = wrapper_functional(Space::h01(p.count("grid")), p.real("p"));
    } else {
        throw UsageError("unknown functional: " + which);
    }
    SupBudget budget;
    budget.samples = p.count("samples");
    budget.starts = p.count("starts");
    budget.iters = p.count("iters");
    budget.seed = cfg.rng_seed;
    budget.threads = cfg.threads;

    Outcome out;
    try {
        const auto sweep = minimax_sweep(*f, p.count("jmax"), budget);
        json rows = json::array();
        for (const auto& e : sweep.estimates) {
            rows.push_back({{"j", e.j},
                            {"rho_star", e.rho_star},
                            {"upper_bound", e.upper_bound},
                            {"evaluations", e.sphere_sup_trace.size()},
                            {"witness", point_json(e.witness)}});
        }
        out.results = {{"functional", f->name()},
                       {"budget", budget.describe()},
                       {"sup_is_lower_bound_of_true_sup", true},
                       {"estimates", rows},
                       {"monotone", sweep.monotone}};
        std::ostringstream csv;
        write_minimax_csv(csv, sweep.estimates);
        out.csv["minimax.csv"] = csv.str();
        out.require(sweep.monotone, "upper bounds not non-decreasing in j");
    } catch (const NoNegativeCertificate& e) {
        out.results = {{"functional", f->name()}, {"budget", budget.describe()}, {"error", e.what()}};
        out.require(false, e.what());
    }
    return out;
}

Outcome run_bvp(const ExperimentConfig&, const Params& p) {
    const double pe = p.real("p");
    const std::size_t kmax = p.count("kmax");
    const std::size_t nodes = p.count("grid");
    if (kmax == 0) throw UsageError("kmax must be at least 1");
    if (nodes < 2) throw UsageError("grid must have at least 2 interior nodes");
    const Space grid = Space::h01(nodes);

    Outcome out;
    std::vector<NodalSolution> sols;
    std::vector<double> ks;
    std::vector<double> norms;
    json rows = json::array();
    for (std::size_t k = 1; k <= kmax; ++k) {
        sols.push_back(nodal_solution(pe, k, grid));
        const auto& s = sols.back();
        ks.push_back(static_cast<double>(k));
        norms.push_back(s.grid_energy_norm_sq);
        rows.push_back({{"k", k},
                        {"energy_norm_sq", s.energy_norm_sq},
                        {"grid_energy_norm_sq", s.grid_energy_norm_sq},
                        {"j_value", s.j_value},
                        {"nehari_residual", s.nehari_residual},
                        {"grid_nehari_residual", s.grid_nehari_residual},
                        {"discrete_residual", s.discrete_residual},
                        {"sup_norm", s.sup_norm}});
        out.require(s.nehari_residual < 1e-6, "Nehari residual >= 1e-6 at k=" + std::to_string(k));
        out.require(s.j_value < 0.0, "J >= 0 at k=" + std::to_string(k));
        if (p.flag("solutions")) {
            std::ostringstream csv;
            write_solution_csv(csv, s);
            out.csv["solution_" + std::to_string(k) + ".csv"] = csv.str();
        }
    }
    const double expected = (2.0 * pe + 2.0) / (pe - 1.0);
    json fit = nullptr;
    if (kmax >= 2) {
        const double slope = log_log_slope(ks, norms);
        fit = {{"slope", slope}, {"expected", expected}, {"abs_error", std::abs(slope - expected)}};
        out.require(std::abs(slope - expected) <= 0.01, "log-log slope off by more than 0.01");
    }
    out.results = {{"p", pe}, {"grid_nodes", nodes}, {"solutions", rows}, {"slope_fit", fit}};
    std::ostringstream csv;
    write_bvp_summary_csv(csv, sols);
    out.csv["bvp.csv"] = csv.str();
    return out;
}

Outcome run_psdiag(const ExperimentConfig&, const Params& p) {
    ModelParams mp{p.count("n")};
    const auto model = clark_model(mp);
    const std::string kind = p.str("sequence");
    std::vector<Point> seq;
    if (kind == "structured") {
        for (std::size_t k = 1; k <= mp.n; ++k) {
            std::vector<double> x(k, 0.0);
            x[k - 1] = branch_plus(k);
            seq.push_back(model->make_point(1.0, x));
        }
    } else if (kind == "constant") {
        for (int i = 0; i < 8; ++i) seq.push_back(model->make_point(1.0, {1.0}));
    } else if (kind == "stalled") {
        // Values tend to 0 while the gradient stays bounded away from 0.
        for (std::size_t k = 1; k <= 8; ++k) seq.push_back(model->make_point(1.0 + std::pow(0.5, k), {}));
    } else {
        throw UsageError("unknown sequence: " + kind);
    }
    const auto rep = ps_diagnostic(*model, seq, p.real("c"), p.real("tol"));
    Outcome out;
    json clusters = json::array();
    for (const auto& c : rep.cluster_points) clusters.push_back(point_json(c));
    out.results = {{"sequence", kind},
                   {"target_level", rep.target_level},
                   {"value_trace", rep.value_trace},
                   {"residual_trace", rep.residual_trace},
                   {"cluster_points", clusters},
                   {"has_convergent_subsequence", rep.has_convergent_subsequence},
                   {"is_ps_sequence", rep.is_ps_sequence},
                   {"note", rep.note}};
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write " + path.string());
    out << content;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names{"enumerate", "scan", "deform", "lemma21", "minimax", "bvp", "psdiag"};
    return names;
}

const std::vector<KeySpec>& experiment_keys(const std::string& experiment) {
    const auto& table = key_table();
    auto it = table.find(experiment);
    if (it == table.end()) throw UsageError("unknown experiment: " + experiment);
    return it->second;
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file " + path.string());
    std::map<std::string, std::string> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto text = CLI::detail::trim_copy(line);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw UsageError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
        }
        auto key = CLI::detail::trim_copy(text.substr(0, eq));
        auto value = CLI::detail::trim_copy(text.substr(eq + 1));
        if (key.empty()) throw UsageError(path.string() + ":" + std::to_string(lineno) + ": empty key");
        out[key] = value;
    }
    return out;
}

ExperimentConfig resolve_config(const std::string& experiment,
                                const std::map<std::string, std::string>& file,
                                const std::map<std::string, std::string>& flags) {
    const auto& keys = experiment_keys(experiment);
    ExperimentConfig cfg;
    cfg.experiment = experiment;
    for (const auto& k : keys) cfg.params[k.name] = k.default_value;

    auto apply = [&](const std::map<std::string, std::string>& src) {
        for (const auto& [key, value] : src) {
            if (key == "out") {
                cfg.output_dir = value;
            } else if (key == "seed" || key == "threads") {
                if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos) {
                    throw UsageError(key + " must be a nonnegative integer");
                }
                if (key == "seed") cfg.rng_seed = std::stoull(value);
                if (key == "threads") cfg.threads = std::max<std::size_t>(1, std::stoull(value));
            } else if (cfg.params.count(key) != 0) {
                cfg.params[key] = value;
            } else {
                throw UsageError("unknown key '" + key + "' for experiment " + experiment);
            }
        }
    };
    apply(file);
    apply(flags);
    return cfg;
}

int run(const ExperimentConfig& config, std::ostream& err) {
    const auto start = std::chrono::steady_clock::now();
    const Params params(config.params);

    static const std::map<std::string, std::function<Outcome(const ExperimentConfig&, const Params&)>> dispatch{
        {"enumerate", run_enumerate}, {"scan", run_scan},     {"deform", run_deform}, {"lemma21", run_lemma21},
        {"minimax", run_minimax},     {"bvp", run_bvp},       {"psdiag", run_psdiag}};

    auto it = dispatch.find(config.experiment);
    if (it == dispatch.end()) {
        err << "unknown experiment: " << config.experiment << "\n";
        return kUsage;
    }

    std::error_code ec;
    std::filesystem::create_directories(config.output_dir, ec);
    if (ec) {
        err << "cannot create output directory " << config.output_dir << ": " << ec.message() << "\n";
        return kUsage;
    }

    int status = kSuccess;
    Outcome outcome;
    std::string error_text;
    try {
        outcome = it->second(config, params);
        if (!outcome.verified) status = kVerificationFailed;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        error_text = e.what();
        status = kVerificationFailed;
    }
    for (const auto& f : outcome.failures) err << "verification failed: " << f << "\n";
    if (!error_text.empty()) err << "contract failure: " << error_text << "\n";

    try {
        if (status == kSuccess || !outcome.results.empty()) {
            json results = outcome.results;
            results["experiment"] = config.experiment;
            results["verified"] = outcome.verified && error_text.empty();
            write_file(config.output_dir / "results.json", results.dump(2) + "\n");
        }
        for (const auto& [name, content] : outcome.csv) write_file(config.output_dir / name, content);

        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        json manifest = {{"config",
                          {{"experiment", config.experiment},
                           {"params", config.params},
                           {"output_dir", config.output_dir.string()},
                           {"rng_seed", config.rng_seed},
                           {"threads", config.threads}}},
                         {"versions",
                          {{"clarklab", kVersion},
                           {"compiler", __VERSION__},
                           {"cplusplus", __cplusplus},
                           {"cli11", CLI11_VERSION},
                           {"nlohmann_json",
                            std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)}}},
                         {"exit_status", status},
                         {"failures", outcome.failures},
                         {"error", error_text},
                         {"files", [&] {
                              std::vector<std::string> names{"results.json"};
                              for (const auto& [name, _] : outcome.csv) names.push_back(name);
                              return names;
                          }()},
                         {"wall_time_seconds", wall}};
        write_file(config.output_dir / "manifest.json", manifest.dump(2) + "\n");
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    }
    return status;
}

}  // namespace clark::tools
