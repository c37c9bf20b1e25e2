#include "cubecx/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "cubecx/error.hpp"

namespace cubecx {

using nlohmann::json;

namespace {

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
    offset = std::min(offset, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

json parse_json(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        // byte is 1-based and points just past the offending character.
        const std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line_of_offset(text, offset)) + ": " + e.what());
    }
}

std::uint64_t unsigned_field(const json& obj, const char* key, const char* context) {
    if (!obj.contains(key)) throw Error(ErrorCode::SchemaError, std::string(context) + " is missing \"" + key + "\"");
    const json& v = obj.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
        throw Error(ErrorCode::SchemaError,
                    std::string(context) + " field \"" + key + "\" must be a non-negative integer");
    return v.get<std::uint64_t>();
}

GeneratorSpec spec_from_json(const json& j) {
    if (!j.is_object()) throw Error(ErrorCode::SchemaError, "generator spec must be a JSON object");
    if (!j.contains("kind") || !j.at("kind").is_string())
        throw Error(ErrorCode::SchemaError, "generator spec needs a string \"kind\"");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "path") return GeneratorSpec::path(unsigned_field(j, "length", "path spec"));
    if (kind == "grid") {
        if (!j.contains("sizes") || !j.at("sizes").is_array())
            throw Error(ErrorCode::SchemaError, "grid spec needs an array \"sizes\"");
        std::vector<std::size_t> sizes;
        for (const auto& s : j.at("sizes")) {
            if (!s.is_number_integer() || s.get<std::int64_t>() < 0)
                throw Error(ErrorCode::SchemaError, "grid sizes must be non-negative integers");
            sizes.push_back(s.get<std::size_t>());
        }
        return GeneratorSpec::grid(std::move(sizes));
    }
    if (kind == "tree")
        return GeneratorSpec::tree(unsigned_field(j, "arity", "tree spec"), unsigned_field(j, "depth", "tree spec"));
    if (kind == "product") {
        if (!j.contains("left") || !j.contains("right"))
            throw Error(ErrorCode::SchemaError, "product spec needs \"left\" and \"right\"");
        return GeneratorSpec::product(spec_from_json(j.at("left")), spec_from_json(j.at("right")));
    }
    if (kind == "staircase") return GeneratorSpec::staircase(unsigned_field(j, "steps", "staircase spec"));
    if (kind == "random_tree") {
        std::uint64_t seed = j.contains("seed") ? unsigned_field(j, "seed", "random_tree spec") : 0;
        return GeneratorSpec::random_tree(unsigned_field(j, "nodes", "random_tree spec"), seed);
    }
    throw Error(ErrorCode::SchemaError, "unknown generator kind \"" + kind + "\"");
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

MedianGraph parse_graph(std::string_view text) {
    json j = parse_json(text);
    if (!j.is_object()) throw Error(ErrorCode::SchemaError, "graph file must hold a JSON object");
    const std::uint64_t count = unsigned_field(j, "vertices", "graph");
    if (!j.contains("edges") || !j.at("edges").is_array())
        throw Error(ErrorCode::SchemaError, "graph needs an array \"edges\"");
    std::vector<Edge> edges;
    edges.reserve(j.at("edges").size());
    std::size_t index = 0;
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer() ||
            e[0].get<std::int64_t>() < 0 || e[1].get<std::int64_t>() < 0 ||
            e[0].get<std::uint64_t>() > std::numeric_limits<Vertex>::max() ||
            e[1].get<std::uint64_t>() > std::numeric_limits<Vertex>::max())
            throw Error(ErrorCode::SchemaError,
                        "edge " + std::to_string(index) + " must be a pair of non-negative vertex ids");
        edges.emplace_back(e[0].get<Vertex>(), e[1].get<Vertex>());
        ++index;
    }
    return build_graph(count, edges);
}

std::string format_graph(const MedianGraph& g) {
    std::string out = "{\"vertices\": " + std::to_string(g.vertex_count()) + ", \"edges\": [";
    for (std::size_t i = 0; i < g.edges().size(); ++i) {
        const auto& [a, b] = g.edges()[i];
        if (i > 0) out += ", ";
        out += "[" + std::to_string(a) + ", " + std::to_string(b) + "]";
    }
    out += "]}\n";
    return out;
}

MedianGraph load_graph(const std::filesystem::path& path) { return parse_graph(read_file(path)); }

void save_graph(const MedianGraph& g, const std::filesystem::path& path) { write_file(path, format_graph(g)); }

GeneratorSpec parse_generator_spec(std::string_view text) { return spec_from_json(parse_json(text)); }

std::string format_double(double value) {
    char buffer[64];
    auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, end);
}

std::string format_profile_csv(const CompressionProfile& profile) {
    std::string out = "r,rho,witness_u,witness_v\n";
    for (std::size_t i = 0; i < profile.radii.size(); ++i) {
        out += std::to_string(profile.radii[i]) + "," + format_double(profile.rho[i]) + "," +
               std::to_string(profile.witnesses[i].first) + "," + std::to_string(profile.witnesses[i].second) + "\n";
    }
    return out;
}

void save_profile(const CompressionProfile& profile, const std::filesystem::path& path) {
    write_file(path, format_profile_csv(profile));
}

std::string format_report_json(const BoundReport& report) {
    json j = {
        {"name", report.name},
        {"passed", report.passed},
        {"worst_margin", report.worst_margin},
        {"worst_pair", {report.worst_pair.first, report.worst_pair.second}},
        {"pairs_checked", report.pairs_checked},
    };
    return j.dump(2) + "\n";
}

void save_report(const BoundReport& report, const std::filesystem::path& path) {
    write_file(path, format_report_json(report));
}

}  // namespace cubecx
