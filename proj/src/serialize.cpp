#include "kheat/serialize.hpp"

#include <cctype>
#include <sstream>

namespace kheat {

std::string to_compact(const MultiDigraph& g) {
  std::ostringstream os;
  os << g.vertex_count() << ';';
  bool first = true;
  for (int u = 0; u < g.vertex_count(); ++u)
    for (int v = 0; v < g.vertex_count(); ++v)
      if (const int m = g(u, v); m > 0) {
        os << (first ? " " : ", ") << u << '>' << v << '*' << m;
        first = false;
      }
  return os.str();
}

std::string to_compact(const PointedGraph& g) { return to_compact(g.graph()); }

namespace {

class Cursor {
 public:
  explicit Cursor(std::string_view text) : s_(text) {}

  void skip_space() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool done() {
    skip_space();
    return i_ >= s_.size();
  }
  bool accept(char c) {
    skip_space();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  int integer() {
    skip_space();
    const std::size_t start = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (start == i_) fail("expected a non-negative integer");
    if (i_ - start > 6) fail("integer too large");
    return std::stoi(std::string(s_.substr(start, i_ - start)));
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw GraphError("cannot parse graph '" + std::string(s_) + "': " + what + " at offset " +
                     std::to_string(i_));
  }

 private:
  std::string_view s_;
  std::size_t i_ = 0;
};

}  // namespace

MultiDigraph parse_compact(std::string_view text) {
  Cursor c(text);
  const int n = c.integer();
  c.expect(';');
  MultiDigraph g(n);
  if (c.done()) return g;
  do {
    const int u = c.integer();
    c.expect('>');
    const int v = c.integer();
    int m = 1;
    if (c.accept('*')) m = c.integer();
    if (u >= n || v >= n) c.fail("vertex index out of range");
    if (m < 1) c.fail("multiplicity must be at least 1");
    g.add_edges(u, v, m);
  } while (c.accept(','));
  if (!c.done()) c.fail("trailing characters");
  return g;
}

nlohmann::json to_json(const MultiDigraph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (int u = 0; u < g.vertex_count(); ++u)
    for (int v = 0; v < g.vertex_count(); ++v)
      if (const int m = g(u, v); m > 0) edges.push_back({u, v, m});
  return {{"vertices", g.vertex_count()}, {"pointed", false}, {"edges", edges}};
}

nlohmann::json to_json(const PointedGraph& g) {
  auto j = to_json(g.graph());
  j["pointed"] = true;
  return j;
}

ParsedGraph graph_from_json(const nlohmann::json& j) {
  try {
    const int n = j.at("vertices").get<int>();
    if (n < 0) throw GraphError("negative vertex count");
    MultiDigraph g(n);
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 3) throw GraphError("edge must be [u, v, mult]");
      const int u = e[0].get<int>(), v = e[1].get<int>(), m = e[2].get<int>();
      if (u < 0 || v < 0 || u >= n || v >= n) throw GraphError("vertex index out of range");
      if (m < 1) throw GraphError("multiplicity must be at least 1");
      g.add_edges(u, v, m);
    }
    const bool pointed = j.value("pointed", false);
    if (pointed && n < 1) throw GraphError("pointed graph needs the distinguished vertex");
    return {std::move(g), pointed};
  } catch (const nlohmann::json::exception& e) {
    throw GraphError(std::string("malformed graph JSON: ") + e.what());
  }
}

ParsedGraph parse_graph(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (i < text.size() && text[i] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw GraphError(std::string("malformed graph JSON: ") + e.what());
    }
    return graph_from_json(j);
  }
  return {parse_compact(text), false};
}

}  // namespace kheat
