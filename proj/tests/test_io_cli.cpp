#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cubecx/cli.hpp"
#include "cubecx/error.hpp"
#include "cubecx/generators.hpp"
#include "cubecx/io.hpp"

using namespace cubecx;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("cubecx_test_" + tag + "_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

struct Outcome {
    int code;
    std::string out, err;
};

Outcome run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "cubecx");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

ErrorCode parse_error_of(std::string_view text) {
    try {
        (void)parse_graph(text);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected parse_graph to throw");
    return ErrorCode::IoError;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("graph files round-trip") {
    TempDir dir("roundtrip");
    auto g = grid_graph(std::vector<std::size_t>{3, 3});
    save_graph(g, dir.path / "g.json");
    auto back = load_graph(dir.path / "g.json");
    CHECK(back.vertex_count() == 9);
    CHECK(back.edges() == g.edges());
    CHECK(format_graph(back) == format_graph(g));
}

TEST_CASE("malformed input is reported with its kind and line") {
    try {
        (void)parse_graph("{\n  \"vertices\": 3,\n  \"edges\": [[0, 1],, [1, 2]]\n}\n");
        FAIL("expected ParseError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ParseError);
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    CHECK(parse_error_of("[1, 2]") == ErrorCode::SchemaError);
    CHECK(parse_error_of("{\"edges\": []}") == ErrorCode::SchemaError);
    CHECK(parse_error_of("{\"vertices\": 2, \"edges\": [[0]]}") == ErrorCode::SchemaError);
    CHECK(parse_error_of("{\"vertices\": -2, \"edges\": []}") == ErrorCode::SchemaError);
    CHECK(parse_error_of("{\"vertices\": 2, \"edges\": [[0, 5]]}") == ErrorCode::VertexOutOfRange);
    CHECK(parse_error_of("{\"vertices\": 3, \"edges\": [[0, 1]]}") == ErrorCode::DisconnectedGraph);
    try {
        (void)load_graph("/nonexistent/graph.json");
        FAIL("expected IoError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::IoError);
    }
}

TEST_CASE("generator specs parse from JSON") {
    auto spec = parse_generator_spec(
        R"({"kind": "product", "left": {"kind": "random_tree", "nodes": 20, "seed": 7}, "right": {"kind": "path", "length": 5}})");
    auto g = generate(spec);
    auto direct = generate(GeneratorSpec::product(GeneratorSpec::random_tree(20, 7), GeneratorSpec::path(5)));
    CHECK(g.edges() == direct.edges());
    CHECK(generate(parse_generator_spec(R"({"kind": "staircase", "steps": 3})")).vertex_count() == 13);
    CHECK(generate(parse_generator_spec(R"({"kind": "grid", "sizes": [2, 3]})")).vertex_count() == 6);
    CHECK(generate(parse_generator_spec(R"({"kind": "tree", "arity": 2, "depth": 2})")).vertex_count() == 7);
    CHECK_THROWS_AS(parse_generator_spec(R"({"kind": "torus"})"), Error);
    CHECK_THROWS_AS(parse_generator_spec(R"({"kind": "grid", "sizes": 3})"), Error);
}

TEST_CASE("profile CSV has the fixed header and one row per radius") {
    CompressionProfile p;
    p.radii = {1, 2, 4};
    p.rho = {1.0, std::sqrt(2.0), 2.0};
    p.witnesses = {{0, 1}, {0, 2}, {1, 5}};
    auto csv = format_profile_csv(p);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "r,rho,witness_u,witness_v");
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 3);
    CHECK(csv.find("4,2,1,5\n") != std::string::npos);
    CHECK(std::stod(format_double(std::sqrt(2.0))) == std::sqrt(2.0));
}

TEST_CASE("bound reports serialize their fields") {
    BoundReport r{"lipschitz", true, {3, 4}, 0.25, 12};
    auto j = nlohmann::json::parse(format_report_json(r));
    CHECK(j["name"] == "lipschitz");
    CHECK(j["passed"] == true);
    CHECK(j["worst_pair"] == nlohmann::json::array({3, 4}));
    CHECK(j["worst_margin"] == 0.25);
    CHECK(j["pairs_checked"] == 12);
}

}  // TEST_SUITE

TEST_SUITE("cli") {

TEST_CASE("generate, validate, verify and profile succeed on a grid") {
    TempDir dir("cli_ok");
    const auto graph = (dir.path / "grid.json").string();
    auto gen = run_cli({"generate", "--spec", R"({"kind": "grid", "sizes": [8, 8]})", "--out", graph});
    CHECK(gen.code == 0);
    CHECK(load_graph(graph).vertex_count() == 64);

    CHECK(run_cli({"validate", "--in", graph}).code == 0);

    auto verify = run_cli({"verify", "--in", graph, "--basepoint", "9"});
    CHECK(verify.code == 0);
    auto report = nlohmann::json::parse(verify.out);
    CHECK(report["passed"] == true);
    CHECK(report["dimension"] == 2);
    // crossing + per eps (lipschitz, lower bound) + fellow traveler
    CHECK(report["suites"].size() == 1 + 1 + 2 * 5);

    const auto csv = (dir.path / "p.csv").string();
    CHECK(run_cli({"profile", "--in", graph, "--eps", "0.4", "--out", csv}).code == 0);
    std::istringstream rows(read_file(csv));
    std::string line;
    std::getline(rows, line);
    CHECK(line == "r,rho,witness_u,witness_v");
    double previous = 0.0;
    while (std::getline(rows, line)) {
        const auto first = line.find(','), second = line.find(',', first + 1);
        const double rho = std::stod(line.substr(first + 1, second - first - 1));
        CHECK(rho >= previous);
        previous = rho;
    }
}

TEST_CASE("spec files are accepted as well as inline JSON") {
    TempDir dir("cli_specfile");
    write_file(dir.path / "spec.json", R"({"kind": "staircase", "steps": 4})");
    auto out = (dir.path / "s.json").string();
    CHECK(run_cli({"generate", "--spec", (dir.path / "spec.json").string(), "--out", out}).code == 0);
    CHECK(load_graph(out).vertex_count() == 19);
}

TEST_CASE("exit codes follow the contract") {
    TempDir dir("cli_codes");
    const auto bad = (dir.path / "k23.json").string();
    write_file(bad, R"({"vertices": 5, "edges": [[0, 2], [0, 3], [0, 4], [1, 2], [1, 3], [1, 4]]})");
    auto validate = run_cli({"validate", "--in", bad});
    CHECK(validate.code == 1);
    auto j = nlohmann::json::parse(validate.out);
    CHECK(j["passed"] == false);
    CHECK(j["failure_witness"].is_array());
    CHECK(run_cli({"verify", "--in", bad}).code == 1);

    const auto broken = (dir.path / "broken.json").string();
    write_file(broken, "{\"vertices\": 3, \"edges\": [[0, 1], [1, 2]\n");
    auto parse = run_cli({"validate", "--in", broken, "--json-errors"});
    CHECK(parse.code == 2);
    auto err = nlohmann::json::parse(parse.err);
    CHECK(err["error"] == "ParseError");

    CHECK(run_cli({"validate", "--in", (dir.path / "missing.json").string()}).code == 2);
    CHECK(run_cli({"frobnicate"}).code == 2);
    CHECK(run_cli({"verify", "--in", bad, "--eps", "0.7"}).code == 2);
    CHECK(run_cli({"generate", "--spec", R"({"kind": "path", "length": 0})", "--out", broken}).code == 2);
    CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("analyze writes profiles and a summary, reproducibly") {
    TempDir dir("cli_analyze");
    const auto graph = (dir.path / "p.json").string();
    REQUIRE(run_cli({"generate", "--spec", R"({"kind": "path", "length": 200})", "--out", graph}).code == 0);
    for (const char* run : {"a", "b"}) {
        auto res = run_cli({"analyze", "--in", graph, "--out", (dir.path / run).string(), "--eps-grid", "0.2,0.4"});
        CHECK(res.code == 0);
    }
    for (const char* file : {"summary.json", "profile_unweighted.csv", "profile_eps_0.2.csv", "profile_eps_0.4.csv"}) {
        CAPTURE(file);
        CHECK(read_file(dir.path / "a" / file) == read_file(dir.path / "b" / file));
    }
    auto summary = nlohmann::json::parse(read_file(dir.path / "a" / "summary.json"));
    CHECK(summary["passed"] == true);
    CHECK(summary["fits"]["unweighted"]["slope"].get<double>() == doctest::Approx(0.5).epsilon(0.05));
}

}  // TEST_SUITE
