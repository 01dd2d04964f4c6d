#include <gtest/gtest.h>

#include "manifest.hpp"
#include "plot.hpp"
#include "runner.hpp"

#include "ballwidth/errors.hpp"
#include "ballwidth/io.hpp"

#include <cmath>
#include <limits>

using namespace ballwidth;
using namespace ballwidth::experiment;

TEST(Manifest, RoundTripIsLossless) {
  ExperimentManifest m;
  m.params = {2, 1.25, 1.5, 3.0};
  m.q = {2.0, 4.0, std::numeric_limits<double>::infinity()};
  m.n_grid = {16, 32, 64};
  m.mode = WidthMode::Probabilistic;
  m.delta = 0.01;
  m.p = 3.0;
  m.samples = 1234;
  m.seed = 0xfeedbeefULL;
  m.threads = 3;
  m.op = "near-optimal";
  m.epsilon = 0.1 + 0.2;  // not exactly representable as a short decimal
  m.C1 = 1.5;
  m.input_degree = 128;
  m.sampler_degree = 64;
  m.block_rules = "rules";
  m.out = "out dir";
  m.plot = false;
  const ExperimentManifest back = manifest_from_json(to_json(m));
  EXPECT_EQ(back, m);
  EXPECT_EQ(manifest_hash(back), manifest_hash(m));
  m.seed += 1;
  EXPECT_NE(manifest_hash(back), manifest_hash(m));
}

TEST(Manifest, DefaultsAndValidation) {
  const ExperimentManifest m = manifest_from_json("{}");
  EXPECT_EQ(m, ExperimentManifest{});
  EXPECT_EQ(effective_grid(m), (std::vector<int>{8, 16, 32, 64}));
  ExperimentManifest d2;
  d2.params.d = 2;
  EXPECT_EQ(effective_grid(d2), (std::vector<int>{16, 32, 64}));
  EXPECT_THROW(manifest_from_json(R"({"operator": "x"})"), DomainError);
  EXPECT_THROW(manifest_from_json(R"({"q": ["big"]})"), Error);
  EXPECT_THROW(manifest_from_json(R"({"mode": "lower-diagnostic"})"), DomainError);
  EXPECT_THROW(manifest_from_json("{"), Error);
}

TEST(Manifest, AutoSamplerDegree) {
  ExperimentManifest m;  // d = 1, rank grid up to 64 reaches degree 63
  EXPECT_EQ(auto_sampler_degree(m), 252);
  m.op = "partial-sum-degree";
  EXPECT_EQ(auto_sampler_degree(m), 256);
  m.params = {2, 1.0, 2.0, 3.0};
  m.op = "partial-sum";
  m.n_grid = {16, 32, 64};
  EXPECT_EQ(auto_sampler_degree(m), 40);  // dim Pi_10^2 = 66 >= 64
}

TEST(Runner, PartialSumRanksAndFit) {
  ExperimentManifest m;
  m.samples = 200;
  m.n_grid = {8, 16, 32};
  const WidthRun run = run_widths(m);
  ASSERT_EQ(run.rows.size(), 3u);
  EXPECT_EQ(run.ranks, (std::vector<std::int64_t>{8, 16, 32}));
  ASSERT_EQ(run.fits.size(), 1u);
  EXPECT_NEAR(run.theory_slope, -2.5, 1e-15);
  // the table parses back with the fit row skipped
  const auto parsed = parse_width_table(widths_csv(run, manifest_hash(m)));
  ASSERT_EQ(parsed.size(), 3u);
  EXPECT_EQ(parsed[2].value, run.rows[2].value);
}

TEST(Plot, SvgContainsPointsAndLines) {
  const std::vector<std::pair<double, double>> pts{{8, 1e-2}, {16, 2e-3}, {32, 4e-4}};
  RateFit fit;
  fit.exponent = -2.32;
  fit.intercept = std::log(1e-2) + 2.32 * std::log(8.0);
  const std::string svg = loglog_svg(pts, fit, -2.5, "t <&>", "abc");
  std::size_t circles = 0;
  for (std::size_t p = svg.find("<circle"); p != std::string::npos; p = svg.find("<circle", p + 1))
    ++circles;
  EXPECT_EQ(circles, 3u);
  EXPECT_NE(svg.find("fit slope -2.32"), std::string::npos);
  EXPECT_NE(svg.find("reference slope -2.50"), std::string::npos);
  EXPECT_NE(svg.find("manifest_hash=abc"), std::string::npos);
  EXPECT_NE(svg.find("t &lt;&amp;&gt;"), std::string::npos);
  EXPECT_THROW(loglog_svg({}, fit, -2.5, "", ""), DomainError);
  EXPECT_THROW(loglog_svg({{8, 0.0}}, fit, -2.5, "", ""), DomainError);
}
