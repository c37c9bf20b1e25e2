#include "cubecx/cli.hpp"

#include <cmath>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cubecx/embedding.hpp"
#include "cubecx/error.hpp"
#include "cubecx/generators.hpp"
#include "cubecx/io.hpp"
#include "cubecx/normal_paths.hpp"

namespace cubecx::cli {

using nlohmann::json;

namespace {

constexpr std::size_t kBasepointSweepLimit = 512;

bool is_structural(ErrorCode code) {
    switch (code) {
        case ErrorCode::HalfspaceViolation:
        case ErrorCode::MedianViolation:
        case ErrorCode::NonCrossingPair:
        case ErrorCode::NoSuchCube:
            return true;
        default:
            return false;
    }
}

void report_error(const RunConfig& config, std::ostream& err, std::string_view code, const std::string& message) {
    if (config.json_errors) {
        err << json{{"error", code}, {"message", message}}.dump() << "\n";
    } else {
        err << "error: " << message << "\n";
    }
}

json to_json(const ValidationReport& r) {
    json j = {
        {"passed", r.passed},
        {"bipartite", r.bipartite},
        {"exhaustive", r.exhaustive},
        {"triples_checked", r.triples_checked},
    };
    if (r.failure_witness) {
        j["failure_witness"] = *r.failure_witness;
        j["witness_median_count"] = r.witness_median_count;
    } else {
        j["failure_witness"] = nullptr;
    }
    return j;
}

json to_json(const BoundReport& r) {
    return json::parse(format_report_json(r));
}

json to_json(const ExponentFit& f) {
    return {{"slope", f.slope}, {"intercept", f.intercept}, {"r_min", f.r_min},
            {"r_max", f.r_max}, {"points", f.points},       {"residual", f.residual}};
}

std::vector<Epsilon> to_eps(const std::vector<double>& values) {
    std::vector<Epsilon> out;
    for (double v : values) out.emplace_back(v);
    return out;
}

std::vector<std::uint32_t> profile_radii(const RunConfig& config, std::uint32_t diam) {
    if (diam == 0) return {};
    if (config.radii_count == 0) {
        std::vector<std::uint32_t> all(diam);
        for (std::uint32_t r = 1; r <= diam; ++r) all[r - 1] = r;
        return all;
    }
    return log_spaced_radii(1, diam, config.radii_count);
}

std::vector<Vertex> basepoints(const RunConfig& config, const MedianGraph& g) {
    if (!config.all_basepoints) {
        if (config.basepoint >= g.vertex_count())
            throw Error(ErrorCode::VertexOutOfRange, "basepoint " + std::to_string(config.basepoint) +
                                                         " is not a vertex of the input graph");
        return {config.basepoint};
    }
    if (g.vertex_count() > kBasepointSweepLimit)
        throw Error(ErrorCode::InvalidSpec, "--all-basepoints is limited to graphs with at most " +
                                                std::to_string(kBasepointSweepLimit) + " vertices");
    std::vector<Vertex> all(g.vertex_count());
    for (Vertex v = 0; v < g.vertex_count(); ++v) all[v] = v;
    return all;
}

// Loads the input graph and validates it; returns nullopt (after printing the
// report) if validation fails.
std::optional<MedianGraph> load_validated(const RunConfig& config, std::ostream& out, json* validation = nullptr) {
    MedianGraph g = load_graph(config.input);
    auto report = validate_median(g, config.exhaustive_limit, config.median_samples, config.seed);
    if (validation) *validation = to_json(report);
    if (!report.passed) {
        out << json{{"validation", to_json(report)}}.dump(2) << "\n";
        return std::nullopt;
    }
    return g;
}

std::string eps_label(double eps) { return "eps_" + format_double(eps); }

json run_suites(const RunConfig& config, const MedianGraph& g, const HyperplaneSet& hs, bool& all_passed) {
    const auto eps_list = to_eps(config.eps_grid);
    json suites = json::array();
    auto record = [&](const BoundReport& r, std::optional<Vertex> basepoint, std::optional<double> eps) {
        json j = to_json(r);
        if (basepoint) j["basepoint"] = *basepoint;
        if (eps) j["eps"] = *eps;
        all_passed = all_passed && r.passed;
        suites.push_back(std::move(j));
    };
    record(verify_crossing_once(g, hs, config.analysis), std::nullopt, std::nullopt);
    for (Vertex bp : basepoints(config, g)) {
        WeightCache cache(g, hs);
        record(verify_fellow_traveler(g, hs, bp, config.analysis, &cache), bp, std::nullopt);
        for (std::size_t i = 0; i < eps_list.size(); ++i) {
            record(verify_lipschitz(g, hs, bp, eps_list[i], config.analysis, &cache), bp, config.eps_grid[i]);
            record(verify_lower_bound(g, hs, bp, eps_list[i], config.analysis, &cache), bp, config.eps_grid[i]);
        }
    }
    return suites;
}

int cmd_generate(const RunConfig& config, std::ostream& out) {
    std::string text = config.spec;
    auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos || text[first] != '{') text = read_file(config.spec);
    GenerateOptions options;
    options.vertex_cap = config.vertex_cap;
    options.exhaustive_limit = config.exhaustive_limit;
    options.sample_count = config.median_samples;
    options.validation_seed = config.seed;
    MedianGraph g = generate(parse_generator_spec(text), options);
    save_graph(g, config.output);
    out << json{{"vertices", g.vertex_count()}, {"edges", g.edge_count()}, {"out", config.output.string()}}.dump()
        << "\n";
    return kSuccess;
}

int cmd_validate(const RunConfig& config, std::ostream& out) {
    MedianGraph g = load_graph(config.input);
    auto report = validate_median(g, config.exhaustive_limit, config.median_samples, config.seed);
    out << to_json(report).dump(2) << "\n";
    return report.passed ? kSuccess : kVerificationFailed;
}

int cmd_verify(const RunConfig& config, std::ostream& out) {
    json validation;
    auto g = load_validated(config, out, &validation);
    if (!g) return kVerificationFailed;
    HyperplaneSet hs = compute_hyperplanes(*g);
    bool passed = true;
    json result = {
        {"validation", validation},
        {"dimension", dimension(*g)},
        {"hyperplanes", hs.size()},
        {"suites", run_suites(config, *g, hs, passed)},
        {"passed", passed},
    };
    if (!config.output.empty()) write_file(config.output, result.dump(2) + "\n");
    out << result.dump(2) << "\n";
    return passed ? kSuccess : kVerificationFailed;
}

int cmd_profile(const RunConfig& config, std::ostream& out) {
    auto g = load_validated(config, out);
    if (!g) return kVerificationFailed;
    if (config.basepoint >= g->vertex_count())
        throw Error(ErrorCode::VertexOutOfRange, "basepoint " + std::to_string(config.basepoint) + " out of range");
    HyperplaneSet hs = compute_hyperplanes(*g);
    std::optional<Epsilon> eps;
    if (config.eps) eps = Epsilon(*config.eps);
    auto profile = compression_profile(*g, hs, config.basepoint, eps, profile_radii(config, diameter(*g)),
                                       config.analysis);
    save_profile(profile, config.output);
    out << json{{"radii", profile.radii.size()}, {"exhaustive", profile.exhaustive},
                {"pairs_evaluated", profile.pairs_evaluated}, {"out", config.output.string()}}
               .dump()
        << "\n";
    return kSuccess;
}

int cmd_analyze(const RunConfig& config, std::ostream& out) {
    json validation;
    auto g = load_validated(config, out, &validation);
    if (!g) return kVerificationFailed;
    const auto eps_list = to_eps(config.eps_grid);
    std::filesystem::create_directories(config.output);

    HyperplaneSet hs = compute_hyperplanes(*g);
    const std::uint32_t diam = diameter(*g);
    const auto radii = profile_radii(config, diam);
    const std::uint32_t lo = config.window_min.value_or(16);
    const std::uint32_t hi = config.window_max.value_or(static_cast<std::uint32_t>(std::floor(0.9 * diam)));

    json fits = json::object();
    auto profile_and_fit = [&](std::optional<Epsilon> eps, const std::string& label, WeightCache* cache) {
        auto profile = compression_profile(*g, hs, config.basepoint, eps, radii, config.analysis, cache);
        save_profile(profile, config.output / ("profile_" + label + ".csv"));
        try {
            fits[label] = to_json(fit_exponent(profile, lo, hi));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::InsufficientData) throw;
            fits[label] = {{"error", e.what()}};
        }
    };
    if (config.basepoint >= g->vertex_count())
        throw Error(ErrorCode::VertexOutOfRange, "basepoint " + std::to_string(config.basepoint) + " out of range");
    WeightCache cache(*g, hs);
    profile_and_fit(std::nullopt, "unweighted", nullptr);
    for (std::size_t i = 0; i < eps_list.size(); ++i) profile_and_fit(eps_list[i], eps_label(config.eps_grid[i]), &cache);

    bool passed = true;
    json summary = {
        {"validation", validation},
        {"vertices", g->vertex_count()},
        {"edges", g->edge_count()},
        {"dimension", dimension(*g)},
        {"hyperplanes", hs.size()},
        {"diameter", diam},
        {"basepoint", config.basepoint},
        {"window", {lo, hi}},
        {"fits", fits},
        {"suites", run_suites(config, *g, hs, passed)},
    };
    summary["passed"] = passed;
    write_file(config.output / "summary.json", summary.dump(2) + "\n");
    out << json{{"passed", passed}, {"out", config.output.string()}}.dump() << "\n";
    return passed ? kSuccess : kVerificationFailed;
}

}  // namespace

std::optional<RunConfig> parse_command_line(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
                                            int& exit_code) {
    RunConfig config;
    CLI::App app{"Median graph / CAT(0) cube complex embedding toolkit"};
    app.require_subcommand(1);
    app.add_flag("--json-errors", config.json_errors, "Report errors on stderr as JSON");

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", config.seed, "Seed for every sampled check")->default_val(0);
        sub->add_option("--exhaustive-limit", config.exhaustive_limit, "Exhaustive median check up to this size")
            ->default_val(kDefaultExhaustiveLimit);
        sub->add_option("--median-samples", config.median_samples, "Sampled median triples above the limit")
            ->default_val(kDefaultMedianSamples);
        sub->add_flag("--json-errors", config.json_errors, "Report errors on stderr as JSON");
    };
    auto add_analysis = [&](CLI::App* sub) {
        sub->add_option("--pair-cap", config.analysis.exhaustive_cap, "Exhaustive pair suites up to this size")
            ->default_val(config.analysis.exhaustive_cap);
        sub->add_option("--sample-pairs", config.analysis.sample_pairs, "Random pairs above the pair cap")
            ->default_val(config.analysis.sample_pairs);
        sub->add_option("--threads", config.analysis.threads, "Worker threads (0 = all cores)")->default_val(0);
    };

    auto* gen = app.add_subcommand("generate", "Generate a median graph from a spec");
    gen->add_option("--spec", config.spec, "Generator spec: inline JSON or a JSON file")->required();
    gen->add_option("--out", config.output, "Output graph file")->required();
    gen->add_option("--vertex-cap", config.vertex_cap, "Refuse specs above this many vertices")
        ->default_val(config.vertex_cap);
    add_common(gen);

    auto* val = app.add_subcommand("validate", "Check the median property of a graph file");
    val->add_option("--in", config.input, "Graph file")->required();
    add_common(val);

    auto* ver = app.add_subcommand("verify", "Run the bound verification suites");
    ver->add_option("--in", config.input, "Graph file")->required();
    ver->add_option("--basepoint", config.basepoint, "Basepoint vertex")->default_val(0);
    ver->add_flag("--all-basepoints", config.all_basepoints, "Sweep every vertex as basepoint (small graphs)");
    ver->add_option("--eps", config.eps_grid, "Epsilon values in (0, 1/2)")->delimiter(',');
    ver->add_option("--out", config.output, "Also write the JSON report here");
    add_common(ver);
    add_analysis(ver);

    auto* prof = app.add_subcommand("profile", "Write the compression profile as CSV");
    prof->add_option("--in", config.input, "Graph file")->required();
    prof->add_option("--eps", config.eps, "Epsilon; omit for the unweighted embedding");
    prof->add_option("--basepoint", config.basepoint, "Basepoint vertex")->default_val(0);
    prof->add_option("--radii", config.radii_count, "Log-spaced radii count (0 = every integer)")->default_val(64);
    prof->add_option("--out", config.output, "Output CSV")->required();
    add_common(prof);
    add_analysis(prof);

    auto* ana = app.add_subcommand("analyze", "Profiles, exponent fits and all suites into a directory");
    ana->add_option("--in", config.input, "Graph file")->required();
    ana->add_option("--eps-grid", config.eps_grid, "Epsilon values in (0, 1/2)")->delimiter(',');
    ana->add_option("--basepoint", config.basepoint, "Basepoint vertex")->default_val(0);
    ana->add_flag("--all-basepoints", config.all_basepoints, "Sweep every vertex as basepoint in the suites");
    ana->add_option("--radii", config.radii_count, "Log-spaced radii count (0 = every integer)")->default_val(64);
    ana->add_option("--window-min", config.window_min, "Smallest radius used by the fit (default 16)");
    ana->add_option("--window-max", config.window_max, "Largest radius used by the fit (default 0.9 * diameter)");
    ana->add_option("--out", config.output, "Output directory")->required();
    add_common(ana);
    add_analysis(ana);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        exit_code = app.exit(e, out, err) == 0 ? kSuccess : kInputError;
        return std::nullopt;
    }
    if (gen->parsed()) config.command = Command::Generate;
    if (val->parsed()) config.command = Command::Validate;
    if (ver->parsed()) config.command = Command::Verify;
    if (prof->parsed()) config.command = Command::Profile;
    if (ana->parsed()) config.command = Command::Analyze;
    config.analysis.seed = config.seed;
    return config;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        for (double e : config.eps_grid) (void)Epsilon(e);
        switch (config.command) {
            case Command::Generate: return cmd_generate(config, out);
            case Command::Validate: return cmd_validate(config, out);
            case Command::Verify: return cmd_verify(config, out);
            case Command::Profile: return cmd_profile(config, out);
            case Command::Analyze: return cmd_analyze(config, out);
        }
    } catch (const Error& e) {
        report_error(config, err, to_string(e.code()), e.what());
        return is_structural(e.code()) ? kVerificationFailed : kInputError;
    } catch (const std::filesystem::filesystem_error& e) {
        report_error(config, err, "IoError", e.what());
        return kInputError;
    }
    return kInputError;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    int exit_code = kSuccess;
    auto config = parse_command_line(argc, argv, out, err, exit_code);
    if (!config) return exit_code;
    return run(*config, out, err);
}

}  // namespace cubecx::cli
