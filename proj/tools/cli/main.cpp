// ballwidth: command line driver for point sets, cubature rules and width experiments.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error, 3 certification or
// audit failure, 4 missing artifact.
#include "manifest.hpp"
#include "plot.hpp"
#include "runner.hpp"
#include "selftest.hpp"

#include "ballwidth/cubature.hpp"
#include "ballwidth/errors.hpp"
#include "ballwidth/io.hpp"
#include "ballwidth/near_optimal.hpp"
#include "ballwidth/points.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>
#include <sstream>

using namespace ballwidth;
using namespace ballwidth::experiment;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kRuntime = 1, kUsage = 2, kCertification = 3, kMissing = 4 };

struct UsageError : Error {
  using Error::Error;
};

struct Flags {
  int d = 1;
  double mu = 0.5, r = 2.0, s = 2.0;
  std::vector<std::string> q;
  double delta = 0.1, p = 2.0;
  std::vector<int> n_grid;
  std::int64_t samples = 400;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string out;
  std::string config;
};

double parse_q(const std::string& s) {
  if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size() && v >= 1.0) return v;
  } catch (const std::exception&) {
  }
  throw UsageError("--q expects numbers >= 1 or 'inf', got '" + s + "'");
}

std::string out_dir(const Flags& f, const std::string& from_config) {
  if (!f.out.empty()) return f.out;
  if (!from_config.empty()) return from_config;
  if (const char* env = std::getenv("BALLWIDTH_OUT"); env && *env) return env;
  return ".";
}

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--d", f.d, "dimension of the ball");
  sub->add_option("--mu", f.mu, "weight exponent mu");
  sub->add_option("--r", f.r, "smoothness r");
  sub->add_option("--s", f.s, "Gaussian covariance order s");
  sub->add_option("--seed", f.seed, "random seed");
  sub->add_option("--out", f.out, "output directory (default $BALLWIDTH_OUT or .)");
}

void add_experiment(CLI::App* sub, Flags& f) {
  add_common(sub, f);
  sub->add_option("--q", f.q, "integrability exponents (numbers or inf)");
  sub->add_option("--delta", f.delta, "exceptional-set measure");
  sub->add_option("--p", f.p, "average-width moment");
  sub->add_option("--n-grid", f.n_grid, "rank budgets");
  sub->add_option("--samples", f.samples, "Monte Carlo draws");
  sub->add_option("--threads", f.threads, "worker threads");
}

bool given(CLI::App* sub, const char* name) { return sub->count(name) > 0; }

// defaults < config file < explicit flags
ExperimentManifest build_manifest(CLI::App* sub, const Flags& f) {
  ExperimentManifest m;
  std::string config_out;
  if (!f.config.empty()) {
    m = manifest_from_json(read_file(f.config));
    config_out = m.out == "." ? "" : m.out;
  }
  if (given(sub, "--d")) m.params.d = f.d;
  if (given(sub, "--mu")) m.params.mu = f.mu;
  if (given(sub, "--r")) m.params.r = f.r;
  if (given(sub, "--s")) m.params.s = f.s;
  if (given(sub, "--q")) {
    m.q.clear();
    for (const auto& s : f.q) m.q.push_back(parse_q(s));
  }
  if (given(sub, "--delta")) m.delta = f.delta;
  if (given(sub, "--p")) m.p = f.p;
  if (given(sub, "--n-grid")) m.n_grid = f.n_grid;
  if (given(sub, "--samples")) m.samples = f.samples;
  if (given(sub, "--seed")) m.seed = f.seed;
  if (given(sub, "--threads")) m.threads = f.threads;
  m.out = out_dir(f, config_out);
  if (m.q.empty()) throw UsageError("at least one --q is required");
  if (m.samples < 1) throw UsageError("--samples must be positive");
  if (m.threads < 1) throw UsageError("--threads must be positive");
  return m;
}

std::string hash_of(const nlohmann::json& j) { return fnv1a_hex(j.dump()); }

std::string q_label(double q) { return std::isinf(q) ? "inf" : format_double(q); }

int cmd_points(const Flags& f, double epsilon, const std::string& name) {
  if (!(epsilon > 0)) throw UsageError("--epsilon must be positive");
  if (f.d < 1) throw UsageError("--d must be >= 1");
  const nlohmann::json spec{{"command", "points"}, {"d", f.d}, {"epsilon", epsilon}, {"seed", f.seed}};
  const std::string hash = hash_of(spec);
  const SeparatedSet set = build_separated(f.d, epsilon, f.seed);
  const std::string path = (fs::path(out_dir(f, "")) / name).string();
  write_points(set, path, hash);
  std::printf("%s: %lld points, separation %.6g, covering %.6g\n", path.c_str(),
              static_cast<long long>(set.size()), set.separation, set.covering);
  if (set.separation < epsilon || set.covering > epsilon) {
    std::fprintf(stderr, "audit failed: separation %.6g, covering %.6g, epsilon %.6g\n",
                 set.separation, set.covering, epsilon);
    return kCertification;
  }
  return kOk;
}

int report_rule(const CubatureRule& rule, const std::string& path) {
  std::printf("%s: %lld nodes, exact degree %d, residual %.3e, min weight %.3e\n", path.c_str(),
              static_cast<long long>(rule.size()), rule.exact_degree, rule.residual,
              rule.weights.minCoeff());
  if (!(rule.residual <= 1e-10) || !(rule.weights.minCoeff() > 0)) {
    std::fprintf(stderr, "certificate failed: residual %.3e, min weight %.3e\n", rule.residual,
                 rule.weights.minCoeff());
    return kCertification;
  }
  return kOk;
}

int cmd_cubature(CLI::App* sub, const Flags& f, const std::string& points, int degree, int block) {
  const SpaceParams p{f.d, f.mu, f.r, f.s};
  if (block > 0) {
    if (given(sub, "--points")) throw UsageError("--block and --points are exclusive");
    const nlohmann::json spec{{"command", "cubature"}, {"block", block}, {"d", p.d}, {"mu", p.mu}};
    const MzBlockData data = mz_block_data(p, block, 2.0);
    const std::string path = block_rule_path(out_dir(f, ""), block);
    write_rule(data.rule, path, hash_of(spec));
    return report_rule(data.rule, path);
  }
  if (points.empty()) throw UsageError("cubature needs --points FILE or --block K");
  if (degree < 0) throw UsageError("--degree must be >= 0");
  if (!fs::exists(points)) {
    std::fprintf(stderr,
                 "missing point set %s; build it with:\n  ballwidth points --d D --epsilon EPS "
                 "--out DIR\n",
                 points.c_str());
    return kMissing;
  }
  const SeparatedSet set = read_points(points);
  if (given(sub, "--d") && f.d != set.d)
    throw UsageError("--d does not match the dimension of " + points);
  const SpaceParams ps{set.d, f.mu, f.r, f.s};
  const nlohmann::json spec{{"command", "cubature"},
                            {"points_hash", fnv1a_hex(read_file(points))},
                            {"degree", degree},
                            {"mu", f.mu}};
  const CubatureRule rule = cubature_weights(set, ps, degree);
  const std::string path = (fs::path(out_dir(f, "")) / "rule.csv").string();
  write_rule(rule, path, hash_of(spec));
  return report_rule(rule, path);
}

int cmd_widths(const ExperimentManifest& m) {
  const std::string hash = manifest_hash(m);
  WidthRun run;
  try {
    run = run_widths(m);
  } catch (const MissingBlockRule& e) {
    const std::string path = block_rule_path(m.block_rules, e.k);
    std::fprintf(stderr,
                 "missing cubature artifact %s; build it with:\n  ballwidth cubature --block %d "
                 "--d %d --mu %s --out %s\n",
                 path.c_str(), e.k, m.params.d, format_double(m.params.mu).c_str(),
                 m.block_rules.c_str());
    return kMissing;
  }
  const fs::path dir(m.out);
  write_file((dir / "widths.csv").string(), widths_csv(run, hash));
  write_file((dir / "widths.json").string(), widths_summary_json(m, run));
  write_file((dir / "manifest.json").string(), to_json(m) + "\n");
  for (const auto& fit : run.fits) {
    if (fit.model != RateModel::PurePower) continue;
    std::printf("q=%s: fitted exponent %.4f +- %.4f (reference %.4f)\n", q_label(fit.q).c_str(),
                fit.fit.exponent, fit.fit.stderr_, run.theory_slope);
    if (!m.plot) continue;
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : run.rows)
      if (r.q == fit.q) pts.push_back({double(r.n), r.value});
    std::ostringstream title;
    title << m.op << " widths, d=" << m.params.d << " mu=" << m.params.mu
          << " rho=" << m.params.rho() << " q=" << q_label(fit.q);
    write_file((dir / ("widths_q" + q_label(fit.q) + ".svg")).string(),
               loglog_svg(pts, fit.fit, run.theory_slope, title.str(), hash));
  }
  std::printf("wrote %s\n", (dir / "widths.csv").string().c_str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ballwidth: Gaussian widths of weighted polynomial approximation on the unit ball"};
  app.require_subcommand(1);
  Flags f;

  auto* points = app.add_subcommand("points", "build an audited separated point set");
  add_common(points, f);
  double epsilon = 0.0;
  std::string points_name = "points.csv";
  points->add_option("--epsilon", epsilon, "separation radius")->required();
  points->add_option("--name", points_name, "output file name");

  auto* cubature = app.add_subcommand("cubature", "solve positive cubature weights");
  add_common(cubature, f);
  std::string points_file;
  int degree = 0, block = 0;
  cubature->add_option("--points", points_file, "point CSV written by 'points'");
  cubature->add_option("--degree", degree, "exactness degree");
  cubature->add_option("--block", block, "build the MZ block rule k instead (block_<k>.csv)");

  auto* widths = app.add_subcommand("widths", "estimate widths over an n grid and fit the rate");
  add_experiment(widths, f);
  widths->add_option("--config", f.config, "JSON manifest");
  std::string op, block_rules, mode;
  double eps_sched = 0.1;
  int sampler_degree = 0, input_degree = 0;
  bool no_plot = false;
  widths->add_option("--operator", op, "partial-sum | partial-sum-degree | near-optimal");
  widths->add_option("--mode", mode, "average | probabilistic");
  widths->add_option("--epsilon", eps_sched, "near-optimal schedule epsilon");
  widths->add_option("--block-rules", block_rules, "directory of prebuilt block rules");
  widths->add_option("--sampler-degree", sampler_degree, "Gaussian truncation degree (0: auto)");
  widths->add_option("--input-degree", input_degree, "near-optimal input degree (0: sampler)");
  widths->add_flag("--no-plot", no_plot, "skip SVG output");

  auto* diag = app.add_subcommand("diag-widths", "diagonal-operator widths against the bound");
  add_experiment(diag, f);
  int dim = 64;
  double alpha = 0.0;
  diag->add_option("--dim", dim, "matrix dimension m");
  diag->add_option("--alpha", alpha, "entries k^{-alpha} (0: identity)");

  auto* lower = app.add_subcommand("lower-diag", "lower-bound diagnostic over an n grid");
  add_experiment(lower, f);

  auto* selftest = app.add_subcommand("selftest", "fast invariant suite with a JSON report");
  double perturb = 0.0;
  std::string report_out;
  selftest->add_option("--seed", f.seed, "random seed");
  selftest->add_option("--inject-norm-perturbation", perturb,
                       "perturb basis normalization constants (fault injection)");
  selftest->add_option("--out", report_out, "also write the report to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (points->parsed()) return cmd_points(f, epsilon, points_name);
    if (cubature->parsed()) return cmd_cubature(cubature, f, points_file, degree, block);
    if (widths->parsed()) {
      if (f.q.empty() && f.config.empty()) f.q = {"2"};
      ExperimentManifest m = build_manifest(widths, f);
      if (given(widths, "--operator")) m.op = op;
      if (given(widths, "--mode")) m.mode = width_mode_from_string(mode);
      if (given(widths, "--epsilon")) m.epsilon = eps_sched;
      if (given(widths, "--block-rules")) m.block_rules = block_rules;
      if (given(widths, "--sampler-degree")) m.sampler_degree = sampler_degree;
      if (given(widths, "--input-degree")) m.input_degree = input_degree;
      if (no_plot) m.plot = false;
      // re-validate the merged manifest
      m = manifest_from_json(to_json(m));
      return cmd_widths(m);
    }
    if (diag->parsed()) {
      if (f.q.empty()) f.q = {"2"};
      std::vector<double> qs;
      for (const auto& s : f.q) qs.push_back(parse_q(s));
      const std::vector<int> grid = f.n_grid.empty() ? std::vector<int>{dim / 8, dim / 4, dim / 2}
                                                     : f.n_grid;
      const nlohmann::json spec{{"command", "diag-widths"}, {"dim", dim},     {"alpha", alpha},
                                {"n_grid", grid},           {"q", f.q},       {"delta", f.delta},
                                {"samples", f.samples},     {"seed", f.seed}, {"threads", f.threads}};
      const auto rows = run_diag_widths(dim, alpha, grid, qs, f.delta, f.samples, f.seed, f.threads);
      const std::string path = (fs::path(out_dir(f, "")) / "diag_widths.csv").string();
      write_file(path, diag_csv(rows, hash_of(spec)));
      int violations = 0;
      for (const auto& r : rows) violations += r.empirical > r.bound;
      std::printf("wrote %s (%d bound violations)\n", path.c_str(), violations);
      return violations ? kCertification : kOk;
    }
    if (lower->parsed()) {
      if (f.q.empty()) f.q = {"2"};
      const ExperimentManifest m = build_manifest(lower, f);
      const auto rows = run_lower_diag(m.params, effective_grid(m), m.q, m.delta, m.samples,
                                       m.seed, m.threads);
      const std::string path = (fs::path(m.out) / "lower_diag.csv").string();
      write_file(path, lower_csv(rows, -m.params.rho() / m.params.d + 0.5, manifest_hash(m)));
      std::printf("wrote %s\n", path.c_str());
      return kOk;
    }
    if (selftest->parsed()) {
      SelftestOptions opt;
      opt.norm_perturbation = perturb;
      opt.seed = f.seed;
      const nlohmann::json spec{{"command", "selftest"}, {"seed", f.seed}, {"perturb", perturb}};
      const auto report = run_selftest(opt);
      const std::string text = selftest_json(report, opt, hash_of(spec));
      std::cout << text;
      if (!report_out.empty()) write_file(report_out, text);
      return report.pass() ? kOk : kCertification;
    }
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kUsage;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kUsage;
  } catch (const InfeasibleError& e) {
    std::fprintf(stderr, "infeasible: %s\n", e.what());
    return kCertification;
  } catch (const CertificationError& e) {
    std::fprintf(stderr, "certification failed: %s\n", e.what());
    return kCertification;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kRuntime;
  }
  return kUsage;
}
