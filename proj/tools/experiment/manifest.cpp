#include "manifest.hpp"

#include "ballwidth/errors.hpp"
#include "ballwidth/io.hpp"

#include "json.hpp"

#include <cmath>
#include <limits>

namespace ballwidth::experiment {

using nlohmann::json;

namespace {

json q_json(double q) {
  if (std::isinf(q)) return "inf";
  return q;
}

double q_from(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
    throw Error("manifest: q entries are numbers or \"inf\"");
  }
  return j.get<double>();
}

template <class T>
void read_opt(const json& j, const char* key, T& v) {
  if (j.contains(key)) v = j.at(key).get<T>();
}

}  // namespace

std::vector<int> default_n_grid(int d) {
  if (d == 1) return {8, 16, 32, 64};
  return {16, 32, 64};
}

std::vector<int> effective_grid(const ExperimentManifest& m) {
  return m.n_grid.empty() ? default_n_grid(m.params.d) : m.n_grid;
}

std::string to_json(const ExperimentManifest& m) {
  json q = json::array();
  for (double v : m.q) q.push_back(q_json(v));
  const json j{{"params", {{"d", m.params.d}, {"mu", m.params.mu}, {"r", m.params.r}, {"s", m.params.s}}},
               {"q", q},
               {"n_grid", m.n_grid},
               {"mode", to_string(m.mode)},
               {"delta", m.delta},
               {"p", m.p},
               {"samples", m.samples},
               {"seed", m.seed},
               {"threads", m.threads},
               {"operator", m.op},
               {"epsilon", m.epsilon},
               {"C1", m.C1},
               {"input_degree", m.input_degree},
               {"sampler_degree", m.sampler_degree},
               {"block_rules", m.block_rules},
               {"out", m.out},
               {"plot", m.plot}};
  return j.dump(1);
}

ExperimentManifest manifest_from_json(const std::string& text) {
  ExperimentManifest m;
  try {
    const json j = json::parse(text);
    if (j.contains("params")) {
      const auto& p = j.at("params");
      read_opt(p, "d", m.params.d);
      read_opt(p, "mu", m.params.mu);
      read_opt(p, "r", m.params.r);
      read_opt(p, "s", m.params.s);
    }
    if (j.contains("q")) {
      m.q.clear();
      for (const auto& v : j.at("q")) m.q.push_back(q_from(v));
    }
    read_opt(j, "n_grid", m.n_grid);
    if (j.contains("mode")) m.mode = width_mode_from_string(j.at("mode").get<std::string>());
    read_opt(j, "delta", m.delta);
    read_opt(j, "p", m.p);
    read_opt(j, "samples", m.samples);
    read_opt(j, "seed", m.seed);
    read_opt(j, "threads", m.threads);
    read_opt(j, "operator", m.op);
    read_opt(j, "epsilon", m.epsilon);
    read_opt(j, "C1", m.C1);
    read_opt(j, "input_degree", m.input_degree);
    read_opt(j, "sampler_degree", m.sampler_degree);
    read_opt(j, "block_rules", m.block_rules);
    read_opt(j, "out", m.out);
    read_opt(j, "plot", m.plot);
  } catch (const json::exception& e) {
    throw Error(std::string("manifest: ") + e.what());
  }
  if (m.op != "partial-sum" && m.op != "partial-sum-degree" && m.op != "near-optimal")
    throw DomainError("manifest: unknown operator '" + m.op + "'");
  if (m.mode == WidthMode::LowerDiagnostic)
    throw DomainError("manifest: mode must be average or probabilistic");
  return m;
}

std::string manifest_hash(const ExperimentManifest& m) { return fnv1a_hex(to_json(m)); }

}  // namespace ballwidth::experiment
