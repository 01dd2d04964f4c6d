#include "ballwidth/io.hpp"

#include "ballwidth/errors.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace ballwidth {

using nlohmann::json;

namespace {

// malformed or incomplete JSON surfaces as ballwidth::Error
template <class F>
auto json_guard(const std::string& what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(what + ": " + e.what());
  }
}

json params_json(const SpaceParams& p) {
  return json{{"d", p.d}, {"mu", p.mu}, {"r", p.r}, {"s", p.s}};
}

SpaceParams params_from(const json& j) {
  SpaceParams p;
  p.d = j.at("d").get<int>();
  p.mu = j.at("mu").get<double>();
  p.r = j.at("r").get<double>();
  p.s = j.at("s").get<double>();
  return p;
}

// JSON has no inf/nan; store them as strings
json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double num_from(const json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::numeric_limits<double>::quiet_NaN();
}

std::vector<std::vector<double>> read_csv_rows(const std::string& path, std::vector<std::string>& header) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  header.clear();
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string cell;
    if (header.empty()) {
      while (std::getline(ss, cell, ',')) header.push_back(cell);
      continue;
    }
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != header.size()) throw Error(path + ": ragged CSV row");
    rows.push_back(std::move(row));
  }
  return rows;
}

json set_json(const SeparatedSet& set) {
  return json{{"d", set.d},
              {"count", set.size()},
              {"epsilon", set.epsilon},
              {"separation", num(set.separation)},
              {"covering", num(set.covering)},
              {"seed", set.seed},
              {"pool_size", set.pool_size},
              {"audit_size", set.audit_size},
              {"repairs", set.repairs}};
}

void set_from(const json& j, SeparatedSet& set) {
  set.epsilon = j.at("epsilon").get<double>();
  set.separation = num_from(j.at("separation"));
  set.covering = num_from(j.at("covering"));
  set.seed = j.at("seed").get<std::uint64_t>();
  set.pool_size = j.at("pool_size").get<std::int64_t>();
  set.audit_size = j.at("audit_size").get<std::int64_t>();
  set.repairs = j.at("repairs").get<std::int64_t>();
}

std::string points_csv(const Eigen::MatrixXd& pts, const Eigen::VectorXd* w, const std::string& hash) {
  std::ostringstream out;
  if (!hash.empty()) out << "# manifest_hash=" << hash << "\n";
  for (int i = 0; i < pts.rows(); ++i) out << (i ? "," : "") << "x" << (i + 1);
  if (w) out << ",w";
  out << "\n";
  for (Eigen::Index c = 0; c < pts.cols(); ++c) {
    for (int i = 0; i < pts.rows(); ++i) out << (i ? "," : "") << format_double(pts(i, c));
    if (w) out << "," << format_double((*w)(c));
    out << "\n";
  }
  return out.str();
}

}  // namespace

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string coeff_to_json(const CoeffVector& c) {
  json blocks = json::array();
  for (int n = 0; n <= c.max_degree(); ++n) {
    const auto b = c.block(n);
    blocks.push_back(std::vector<double>(b.data(), b.data() + b.size()));
  }
  json j{{"params", params_json(c.params())}, {"max_degree", c.max_degree()}, {"blocks", blocks}};
  return j.dump(1);
}

namespace {

CoeffVector coeff_from_json_impl(const std::string& text) {
  const json j = json::parse(text);
  const SpaceParams p = params_from(j.at("params"));
  const int N = j.at("max_degree").get<int>();
  CoeffVector c(p, N);
  const auto& blocks = j.at("blocks");
  if (static_cast<int>(blocks.size()) != N + 1) throw Error("coefficient JSON: block count mismatch");
  for (int n = 0; n <= N; ++n) {
    const auto v = blocks[n].get<std::vector<double>>();
    if (static_cast<std::int64_t>(v.size()) != c.block_size(n))
      throw Error("coefficient JSON: block " + std::to_string(n) + " has wrong size");
    for (std::size_t k = 0; k < v.size(); ++k) c.block(n)(k) = v[k];
  }
  return c;
}

}  // namespace

CoeffVector coeff_from_json(const std::string& text) {
  return json_guard("coefficient JSON", [&] { return coeff_from_json_impl(text); });
}

std::string sidecar_path(const std::string& csv_path) {
  std::filesystem::path p(csv_path);
  p.replace_extension(".json");
  return p.string();
}

void write_points(const SeparatedSet& set, const std::string& csv_path, const std::string& hash) {
  write_file(csv_path, points_csv(set.points, nullptr, hash));
  json side{{"kind", "points"}, {"set", set_json(set)}, {"exact_degree", -1}, {"residual", "nan"}};
  if (!hash.empty()) side["manifest_hash"] = hash;
  write_file(sidecar_path(csv_path), side.dump(1) + "\n");
}

void write_rule(const CubatureRule& rule, const std::string& csv_path, const std::string& hash) {
  write_file(csv_path, points_csv(rule.points(), &rule.weights, hash));
  json side{{"kind", "rule"},
            {"params", params_json(rule.params)},
            {"set", set_json(rule.set)},
            {"epsilon", rule.set.epsilon},
            {"seed", rule.set.seed},
            {"exact_degree", rule.exact_degree},
            {"residual", num(rule.residual)},
            {"profile_n", num(rule.profile_n)},
            {"profile_c1", num(rule.profile_c1)},
            {"profile_c2", num(rule.profile_c2)},
            {"gamma", num(rule.gamma)},
            {"floored", rule.floored}};
  if (!hash.empty()) side["manifest_hash"] = hash;
  write_file(sidecar_path(csv_path), side.dump(1) + "\n");
}

SeparatedSet read_points(const std::string& csv_path) {
  std::vector<std::string> header;
  const auto rows = read_csv_rows(csv_path, header);
  int d = static_cast<int>(header.size());
  if (d > 0 && header.back() == "w") --d;
  if (d < 1) throw Error(csv_path + ": no coordinate columns");
  SeparatedSet set;
  set.d = d;
  set.points.resize(d, static_cast<Eigen::Index>(rows.size()));
  for (std::size_t c = 0; c < rows.size(); ++c)
    for (int i = 0; i < d; ++i) set.points(i, c) = rows[c][i];
  const auto side = sidecar_path(csv_path);
  if (std::filesystem::exists(side))
    json_guard(side, [&] { set_from(json::parse(read_file(side)).at("set"), set); });
  return set;
}

CubatureRule read_rule(const std::string& csv_path) {
  std::vector<std::string> header;
  const auto rows = read_csv_rows(csv_path, header);
  if (header.empty() || header.back() != "w") throw Error(csv_path + ": missing weight column");
  CubatureRule rule;
  rule.set = read_points(csv_path);
  rule.weights.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t c = 0; c < rows.size(); ++c) rule.weights(c) = rows[c].back();
  const auto side = sidecar_path(csv_path);
  if (!std::filesystem::exists(side)) throw Error(csv_path + ": missing sidecar " + side);
  json_guard(side, [&] {
    const json j = json::parse(read_file(side));
    rule.params = params_from(j.at("params"));
    rule.exact_degree = j.at("exact_degree").get<int>();
    rule.residual = num_from(j.at("residual"));
    rule.profile_n = num_from(j.at("profile_n"));
    rule.profile_c1 = num_from(j.at("profile_c1"));
    rule.profile_c2 = num_from(j.at("profile_c2"));
    rule.gamma = num_from(j.at("gamma"));
    rule.floored = j.at("floored").get<std::int64_t>();
  });
  return rule;
}

std::string width_table_csv(const std::vector<WidthEstimate>& rows, const std::string& hash) {
  std::ostringstream out;
  if (!hash.empty()) out << "# manifest_hash=" << hash << "\n";
  out << "n,q,mode,param,value,stderr,samples,seed\n";
  for (const auto& r : rows) {
    out << r.n << "," << format_double(r.q) << "," << to_string(r.mode) << ","
        << format_double(r.param) << "," << format_double(r.value) << ","
        << format_double(r.stderr_) << "," << r.samples << "," << r.seed << "\n";
  }
  return out.str();
}

std::vector<WidthEstimate> parse_width_table(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<WidthEstimate> rows;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    if (line.rfind("fit,", 0) == 0) continue;
    std::stringstream ss(line);
    std::vector<std::string> cells;
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 8) throw Error("width table: expected 8 columns");
    WidthEstimate e;
    e.n = std::stoll(cells[0]);
    e.q = std::stod(cells[1]);
    e.mode = width_mode_from_string(cells[2]);
    e.param = std::stod(cells[3]);
    e.value = std::stod(cells[4]);
    e.stderr_ = std::stod(cells[5]);
    e.samples = std::stoll(cells[6]);
    e.seed = std::stoull(cells[7]);
    rows.push_back(e);
  }
  return rows;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

}  // namespace ballwidth
