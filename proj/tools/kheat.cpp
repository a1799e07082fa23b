// kheat: command-line front end for stable-graph heat coefficients.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "kheat/enumerate.hpp"
#include "kheat/heat.hpp"
#include "kheat/kahler.hpp"
#include "kheat/oracles.hpp"
#include "kheat/phi.hpp"
#include "kheat/serialize.hpp"

namespace {

using namespace kheat;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  int weight = 0;
  int bound = kDefaultStableWeightBound;
  int order = kDefaultPotentialOrder;
  int d = 2;
  std::uint64_t seed = 1;
  int seeds = 5;
  std::optional<int> sigma;
  std::string format = "text";
  std::string cache_path;
  std::string out_path;
  std::string potential_path;
  std::string graph;
  std::string suite;
  std::string cache_action;
  bool dims_given = false;
  bool seed_given = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Inline text, or the contents of a file of that name. A leading '*' marks
// compact input as pointed.
struct GraphInput {
  MultiDigraph graph;
  std::optional<bool> pointed;  // unset when the input does not say
};

GraphInput read_graph(const std::string& arg) {
  std::string text = arg;
  std::error_code ec;
  if (!arg.empty() && std::filesystem::is_regular_file(arg, ec)) text = read_file(arg);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw UsageError("empty graph input");
  try {
    if (text[first] == '{') {
      const auto j = nlohmann::json::parse(text);
      auto parsed = graph_from_json(j);
      GraphInput in{std::move(parsed.graph), std::nullopt};
      if (j.contains("pointed")) in.pointed = parsed.pointed;
      return in;
    }
    if (text[first] == '*') return {parse_compact(std::string_view(text).substr(first + 1)), true};
    return {parse_compact(text), std::nullopt};
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("malformed graph JSON: ") + e.what());
  } catch (const GraphError& e) {
    throw UsageError(e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

std::filesystem::path cache_path(const Config& cfg) {
  if (!cfg.cache_path.empty()) return cfg.cache_path;
  if (const char* env = std::getenv(kPhiCacheEnv)) return env;
  return {};
}

Format output_format(const Config& cfg) {
  try {
    return parse_format(cfg.format);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

KahlerPotential load_potential(const Config& cfg) {
  try {
    if (!cfg.potential_path.empty()) return KahlerPotential::from_json_text(read_file(cfg.potential_path));
    return KahlerPotential::random(cfg.d, cfg.order, cfg.seed);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

int cmd_enum(const Config& cfg, std::ostream& out) {
  std::vector<MultiDigraph> graphs;
  try {
    graphs = enumerate_stable(cfg.weight, cfg.bound);
  } catch (const std::out_of_range& e) {
    throw UsageError(e.what());
  }
  if (output_format(cfg) == Format::Json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& g : graphs) arr.push_back({{"graph", to_json(g)}, {"canonical", canonical_form(g).key}});
    out << nlohmann::json{{"weight", cfg.weight}, {"graphs", arr}}.dump(2) << "\n";
    return kExitOk;
  }
  for (const auto& g : graphs) out << to_compact(g) << "\t" << canonical_form(g).key << "\n";
  return kExitOk;
}

int cmd_phi(const Config& cfg, PhiCache& cache, std::ostream& out) {
  const auto in = read_graph(cfg.graph);
  if (in.pointed == false) throw UsageError("phi needs a pointed graph (vertex 0 is the point)");
  if (in.graph.vertex_count() < 1) throw UsageError("phi needs at least the distinguished vertex");
  out << to_string(phi(PointedGraph(in.graph), cache)) << "\n";
  return kExitOk;
}

int cmd_z(const Config& cfg, PhiCache& cache, std::ostream& out) {
  const auto in = read_graph(cfg.graph);
  if (in.pointed == true) throw UsageError("z needs an unpointed graph");
  try {
    out << to_string(z_coefficient(in.graph, cache)) << "\n";
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return kExitOk;
}

int cmd_coeff(const Config& cfg, PhiCache& cache, std::ostream& out) {
  const Format fmt = output_format(cfg);
  GraphSum<MultiDigraph> a;
  try {
    a = heat_coefficient(cfg.weight, cache, cfg.bound);
  } catch (const std::out_of_range& e) {
    throw UsageError(e.what());
  }
  if (cfg.sigma) {
    if (cfg.weight != 3) throw UsageError("the sigma basis exists only for weight 3");
    out << render(tau_to_sigma(a), fmt) << "\n";
    return kExitOk;
  }
  out << render(a, fmt, cfg.weight) << "\n";
  return kExitOk;
}

int cmd_eval(const Config& cfg, PhiCache& cache, std::ostream& out) {
  const int chosen = (!cfg.graph.empty()) + (cfg.sigma.has_value()) + (cfg.weight != 0);
  if (chosen != 1) throw UsageError("eval needs exactly one of --graph, --sigma, --weight");
  const auto phi = load_potential(cfg);
  try {
    GaussianRational value;
    if (!cfg.graph.empty()) {
      const auto in = read_graph(cfg.graph);
      if (in.pointed == true) throw UsageError("eval needs an unpointed graph");
      value = evaluate_graph(in.graph, phi);
    } else if (cfg.sigma) {
      if (*cfg.sigma < 1 || *cfg.sigma > kSigmaCount) throw UsageError("--sigma must be in 1..15");
      value = KahlerGeometry(phi).sigma(*cfg.sigma);
    } else {
      value = evaluate_sum(heat_coefficient(cfg.weight, cache, cfg.bound), phi);
    }
    out << to_string(value) << "\n";
  } catch (const TruncationError& e) {
    std::cerr << "kheat: truncation order too low: " << e.what() << " (needs N >= " << e.required_order() << ")\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    throw UsageError(e.what());
  }
  return kExitOk;
}

int cmd_verify(const Config& cfg, PhiCache& cache, std::ostream& out) {
  SuiteOptions opts;
  if (cfg.dims_given) opts.dims = {cfg.d};
  opts.seeds = cfg.seeds;
  opts.first_seed = cfg.seed;
  opts.order = cfg.order;
  std::vector<std::string> names;
  if (cfg.suite == "all") {
    names = suite_names();
  } else {
    names = {cfg.suite};
  }
  const bool json = output_format(cfg) == Format::Json;
  nlohmann::json reports = nlohmann::json::array();
  bool all_passed = true;
  for (const auto& name : names) {
    IdentityReport report;
    try {
      report = run_suite(name, opts, cache);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    all_passed = all_passed && report.passed;
    if (json) {
      reports.push_back(report.to_json());
    } else {
      out << report.to_text();
    }
  }
  if (json) out << (names.size() == 1 ? reports[0] : reports).dump(2) << "\n";
  return all_passed ? kExitOk : kExitVerifyFailed;
}

int cmd_cache(const Config& cfg, PhiCache& cache, std::ostream& out) {
  const auto path = cache_path(cfg);
  if (path.empty()) throw UsageError(std::string("no cache file: pass --cache or set ") + kPhiCacheEnv);
  if (cfg.cache_action == "stats") {
    out << "path: " << path.string() << "\n" << "records: " << cache.size() << "\n";
    return kExitOk;
  }
  if (cfg.cache_action == "clear") {
    cache.clear();
    std::error_code ec;
    std::filesystem::remove(path, ec);
    if (ec) throw std::runtime_error("cannot remove " + path.string() + ": " + ec.message());
    out << "cleared " << path.string() << "\n";
    return kExitOk;
  }
  throw UsageError("cache action must be stats or clear");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heat kernel coefficients on Kahler manifolds via stable graphs"};
  app.require_subcommand(1);
  Config cfg;
  app.add_option("--cache", cfg.cache_path, std::string("phi cache file (default: $") + kPhiCacheEnv + ")");
  app.add_option("--out", cfg.out_path, "write output to this file");
  app.add_option("--format", cfg.format, "text, json or latex")->check(CLI::IsMember({"text", "json", "latex"}));

  auto add_weight = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--weight", cfg.weight, "graph weight");
    if (required) opt->required();
    sub->add_option("--bound", cfg.bound, "largest weight accepted")->capture_default_str();
  };
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "text, json or latex")->check(CLI::IsMember({"text", "json", "latex"}));
  };
  auto add_potential = [&](CLI::App* sub) {
    sub->add_option("--potential", cfg.potential_path, "potential JSON file");
    sub->add_option("--d", cfg.d, "complex dimension")->capture_default_str();
    sub->add_option("--order", cfg.order, "truncation order N")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "random potential seed")->capture_default_str();
  };

  auto* en = app.add_subcommand("enum", "list stable graphs of a weight");
  add_weight(en, true);
  add_format(en);

  auto* ph = app.add_subcommand("phi", "phi of a pointed graph (vertex 0 is the point)");
  ph->add_option("graph", cfg.graph, "compact text, JSON, or a file")->required();

  auto* zc = app.add_subcommand("z", "coefficient z(G) of a graph");
  zc->add_option("graph", cfg.graph, "compact text, JSON, or a file")->required();

  auto* co = app.add_subcommand("coeff", "the heat coefficient a_n as a graph sum");
  add_weight(co, true);
  add_format(co);
  co->add_flag_callback("--sigma", [&] { cfg.sigma = 0; }, "weight 3 in the sigma basis");

  auto* ev = app.add_subcommand("eval", "evaluate a graph, sigma_k or a_n at a potential");
  ev->add_option("--graph", cfg.graph, "graph to evaluate");
  ev->add_option("--sigma", cfg.sigma, "sigma invariant index 1..15");
  add_weight(ev, false);
  add_potential(ev);

  auto* ve = app.add_subcommand("verify", "run a verification suite");
  std::string suite_help = "all";
  for (const auto& n : suite_names()) suite_help += ", " + n;
  ve->add_option("suite", cfg.suite, suite_help)->required();
  ve->add_option("--d", cfg.d, "restrict curvature suites to this dimension")->each([&](const std::string&) {
    cfg.dims_given = true;
  });
  ve->add_option("--seeds", cfg.seeds, "random potentials per dimension")->capture_default_str();
  ve->add_option("--seed", cfg.seed, "first seed")->capture_default_str();
  ve->add_option("--order", cfg.order, "truncation order N")->capture_default_str();
  add_format(ve);

  auto* ca = app.add_subcommand("cache", "inspect or clear the phi cache");
  ca->add_option("action", cfg.cache_action, "stats or clear")->required()->check(CLI::IsMember({"stats", "clear"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    PhiCache cache;
    const auto path = cache_path(cfg);
    if (!path.empty()) cache.load(path);

    std::ostringstream buffer;
    int code = kExitOk;
    if (en->parsed()) code = cmd_enum(cfg, buffer);
    if (ph->parsed()) code = cmd_phi(cfg, cache, buffer);
    if (zc->parsed()) code = cmd_z(cfg, cache, buffer);
    if (co->parsed()) code = cmd_coeff(cfg, cache, buffer);
    if (ev->parsed()) code = cmd_eval(cfg, cache, buffer);
    if (ve->parsed()) code = cmd_verify(cfg, cache, buffer);
    if (ca->parsed()) return cmd_cache(cfg, cache, std::cout);

    if (cfg.out_path.empty()) {
      std::cout << buffer.str();
    } else {
      std::ofstream file(cfg.out_path);
      if (!file) throw UsageError("cannot write " + cfg.out_path);
      file << buffer.str();
    }
    if (!path.empty()) cache.append_new(path);
    return code;
  } catch (const UsageError& e) {
    std::cerr << "kheat: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "kheat: " << e.what() << "\n";
    return kExitUsage;
  }
}
