#include "runner.hpp"

#include "ballwidth/errors.hpp"
#include "ballwidth/io.hpp"
#include "ballwidth/lower_gadget.hpp"
#include "ballwidth/near_optimal.hpp"
#include "ballwidth/operators.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <memory>
#include <sstream>

namespace ballwidth::experiment {

using nlohmann::json;

namespace {

std::vector<std::pair<double, double>> table_for(const std::vector<WidthEstimate>& rows, double q) {
  std::vector<std::pair<double, double>> t;
  for (const auto& r : rows)
    if (r.q == q) t.push_back({double(r.n), r.value});
  return t;
}

json num(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

}  // namespace

int auto_sampler_degree(const ExperimentManifest& m) {
  const auto grid = effective_grid(m);
  const int n_max = *std::max_element(grid.begin(), grid.end());
  int D = n_max;
  if (m.op != "partial-sum-degree") {
    D = 0;
    while (poly_dim(m.params.d, D) < n_max) ++D;
  }
  return std::max(truncation_degree(m.params), 4 * D);
}

std::string block_rule_path(const std::string& dir, int k) {
  return (std::filesystem::path(dir) / ("block_" + std::to_string(k) + ".csv")).string();
}

WidthRun run_widths(const ExperimentManifest& m) {
  const SpaceParams& p = m.params;
  const auto grid = effective_grid(m);
  const GaussianSampler sampler(p, m.sampler_degree > 0 ? m.sampler_degree : auto_sampler_degree(m));
  WidthRun run;
  run.sampler_degree = sampler.max_degree();
  run.theory_slope = -p.rho() / p.d + 0.5;

  std::unique_ptr<BlockRuleCache> cache;
  if (m.op == "near-optimal") {
    cache = std::make_unique<BlockRuleCache>(p);
    if (!m.block_rules.empty()) {
      for (int k = 1;; ++k) {
        const auto path = block_rule_path(m.block_rules, k);
        if (!std::filesystem::exists(path)) break;
        cache->insert(k, read_rule(path));
      }
      cache->freeze();
    }
  }
  const double param = m.mode == WidthMode::Probabilistic ? m.delta : m.p;
  WidthOptions wopt;
  wopt.threads = m.threads;

  for (double q : m.q) {
    for (int n : grid) {
      std::unique_ptr<CoeffOperator> op;
      if (m.op == "partial-sum") {
        // largest partial sum of rank <= n
        int D = 0;
        while (poly_dim(p.d, D + 1) <= n) ++D;
        op = std::make_unique<PartialSumOperator>(p, D);
      } else if (m.op == "partial-sum-degree") {
        op = std::make_unique<PartialSumOperator>(p, n);
      } else {
        NearOptimalOptions nopt;
        nopt.C1 = m.C1;
        nopt.seed = m.seed;
        const int in_deg = m.input_degree > 0 ? m.input_degree : sampler.max_degree();
        op = std::make_unique<RankNOperator>(
            assemble_near_optimal(p, n, q, m.delta, m.epsilon, in_deg, *cache, nopt));
      }
      run.rows.push_back(estimate_width(sampler, *op, q, m.mode, param, m.samples, m.seed, wopt, n));
      run.ranks.push_back(op->rank());
    }
    const auto t = table_for(run.rows, q);
    if (t.size() >= 3) {
      run.fits.push_back({q, RateModel::PurePower, rate_fit(t, RateModel::PurePower, 3)});
      if (std::isinf(q))
        run.fits.push_back({q, RateModel::PowerTimesSqrtLog, rate_fit(t, RateModel::PowerTimesSqrtLog, 3)});
    }
  }
  return run;
}

std::string widths_csv(const WidthRun& run, const std::string& hash) {
  std::ostringstream out;
  out << width_table_csv(run.rows, hash);
  for (const auto& f : run.fits) {
    if (f.model != RateModel::PurePower) continue;
    const WidthEstimate& any = run.rows.front();
    out << "fit," << format_double(f.q) << "," << to_string(any.mode) << ","
        << format_double(any.param) << "," << format_double(f.fit.exponent) << ","
        << format_double(f.fit.stderr_) << "," << f.fit.points << "," << any.seed << "\n";
  }
  return out.str();
}

std::string widths_summary_json(const ExperimentManifest& m, const WidthRun& run) {
  json fits = json::array();
  for (const auto& f : run.fits) {
    fits.push_back({{"q", num(f.q)},
                    {"model", f.model == RateModel::PurePower ? "power" : "power-sqrt-log"},
                    {"exponent", f.fit.exponent},
                    {"stderr", f.fit.stderr_},
                    {"intercept", f.fit.intercept},
                    {"residual", f.fit.residual},
                    {"points", f.fit.points}});
  }
  json rows = json::array();
  for (std::size_t i = 0; i < run.rows.size(); ++i) {
    const auto& r = run.rows[i];
    rows.push_back({{"n", r.n}, {"q", num(r.q)}, {"rank", run.ranks[i]}, {"value", r.value},
                    {"stderr", r.stderr_}});
  }
  const json j{{"manifest_hash", manifest_hash(m)},
               {"manifest", json::parse(to_json(m))},
               {"sampler_degree", run.sampler_degree},
               {"theory_slope", run.theory_slope},
               {"rows", rows},
               {"fits", fits}};
  return j.dump(1) + "\n";
}

std::vector<DiagRow> run_diag_widths(int dim, double alpha, const std::vector<int>& n_grid,
                                     const std::vector<double>& q, double delta, std::int64_t M,
                                     std::uint64_t seed, int threads) {
  if (dim < 1) throw DomainError("diag-widths: dimension must be >= 1");
  Eigen::VectorXd d(dim);
  for (int k = 0; k < dim; ++k) d(k) = std::pow(k + 1.0, -alpha);
  const DiagonalOperator D(d);
  // d_k <= C/k holds with C = sum of the decreasing entries
  const double C = d.sum();
  std::vector<DiagRow> rows;
  for (double qq : q) {
    for (int n : n_grid) {
      if (n < 0 || n >= dim) throw DomainError("diag-widths: n must lie in [0, dim)");
      DiagRow r;
      r.n = n;
      r.q = qq;
      const auto [v, se] = quantile_estimate(diag_errors(D, n, qq, M, seed, threads), delta);
      r.empirical = v;
      r.stderr_ = se;
      r.bound = diag_width_upper(D, n, qq, delta, 1.0, C).value;
      r.moment = std::isinf(qq) ? std::nan("") : diag_moment_exact(D, n, qq);
      rows.push_back(r);
    }
  }
  return rows;
}

std::string diag_csv(const std::vector<DiagRow>& rows, const std::string& hash) {
  std::ostringstream out;
  if (!hash.empty()) out << "# manifest_hash=" << hash << "\n";
  out << "n,q,empirical,stderr,upper_bound,moment\n";
  for (const auto& r : rows)
    out << r.n << "," << format_double(r.q) << "," << format_double(r.empirical) << ","
        << format_double(r.stderr_) << "," << format_double(r.bound) << ","
        << format_double(r.moment) << "\n";
  return out.str();
}

std::vector<LowerRow> run_lower_diag(const SpaceParams& p, const std::vector<int>& n_grid,
                                     const std::vector<double>& q, double delta, std::int64_t M,
                                     std::uint64_t seed, int threads) {
  std::vector<LowerRow> rows;
  for (double qq : q) {
    for (int n : n_grid) {
      const auto l = lower_bound_diagnostic(p, n, qq, delta, M, seed, threads);
      rows.push_back({n, qq, l.value, l.stderr_, l.N, l.identity.value});
    }
  }
  return rows;
}

std::string lower_csv(const std::vector<LowerRow>& rows, double theory_slope,
                      const std::string& hash) {
  std::ostringstream out;
  if (!hash.empty()) out << "# manifest_hash=" << hash << "\n";
  out << "# theory_slope=" << format_double(theory_slope) << "\n";
  out << "n,q,value,stderr,N,identity\n";
  for (const auto& r : rows)
    out << r.n << "," << format_double(r.q) << "," << format_double(r.value) << ","
        << format_double(r.stderr_) << "," << r.N << "," << format_double(r.identity) << "\n";
  std::vector<double> qs;
  for (const auto& r : rows)
    if (std::find(qs.begin(), qs.end(), r.q) == qs.end()) qs.push_back(r.q);
  for (double qq : qs) {
    std::vector<std::pair<double, double>> t;
    for (const auto& r : rows)
      if (r.q == qq) t.push_back({double(r.n), r.value});
    if (t.size() < 3) continue;
    const RateFit f = rate_fit(t, RateModel::PurePower, 3);
    out << "fit," << format_double(qq) << "," << format_double(f.exponent) << ","
        << format_double(f.stderr_) << "," << f.points << ",\n";
  }
  return out.str();
}

}  // namespace ballwidth::experiment
