#pragma once

// Flat-file formats.
//
// Graph:   {"vertices": <count>, "edges": [[a, b], ...]}   (0-based ids)
// Spec:    {"kind": "path", "length": k}
//          {"kind": "grid", "sizes": [a, b, ...]}
//          {"kind": "tree", "arity": a, "depth": d}
//          {"kind": "product", "left": <spec>, "right": <spec>}
//          {"kind": "staircase", "steps": s}
//          {"kind": "random_tree", "nodes": n, "seed": s}
// Profile: CSV with header r,rho,witness_u,witness_v

#include <filesystem>
#include <string>
#include <string_view>

#include "cubecx/analysis.hpp"
#include "cubecx/generators.hpp"
#include "cubecx/median_graph.hpp"

namespace cubecx {

/// Throws Error{ParseError} (message carries the line number), Error{SchemaError},
/// or the build_graph errors.
MedianGraph parse_graph(std::string_view text);
std::string format_graph(const MedianGraph& g);

MedianGraph load_graph(const std::filesystem::path& path);
void save_graph(const MedianGraph& g, const std::filesystem::path& path);

GeneratorSpec parse_generator_spec(std::string_view text);

std::string format_profile_csv(const CompressionProfile& profile);
void save_profile(const CompressionProfile& profile, const std::filesystem::path& path);

std::string format_report_json(const BoundReport& report);
void save_report(const BoundReport& report, const std::filesystem::path& path);

/// Shortest round-trip decimal form, used for file names and CSV cells.
std::string format_double(double value);

/// Whole file contents; throws Error{IoError}.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace cubecx
