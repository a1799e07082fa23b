#pragma once

// Graph serialization.
//
// JSON:    {"vertices": k, "pointed": bool, "edges": [[u, v, mult], ...]}
//          edges sorted lexicographically, mult >= 1.
// Compact: "k; u>v*m, u>v*m"  ("*m" may be omitted on input when m == 1).

#include <string>
#include <string_view>
#include <variant>

#include <nlohmann/json.hpp>

#include "kheat/digraph.hpp"

namespace kheat {

std::string to_compact(const MultiDigraph& g);
std::string to_compact(const PointedGraph& g);
MultiDigraph parse_compact(std::string_view text);

nlohmann::json to_json(const MultiDigraph& g);
nlohmann::json to_json(const PointedGraph& g);

/// A parsed graph remembers whether the source declared it pointed.
struct ParsedGraph {
  MultiDigraph graph;
  bool pointed = false;
};

ParsedGraph graph_from_json(const nlohmann::json& j);

/// Accepts either JSON (leading '{') or the compact form. Compact input has
/// no pointedness marker and is reported as unpointed.
ParsedGraph parse_graph(std::string_view text);

}  // namespace kheat
