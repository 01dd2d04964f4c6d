#include "ballwidth/errors.hpp"
#include "ballwidth/io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <limits>
#include <random>

#include "json.hpp"

using namespace ballwidth;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("ballwidth_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Io, Fnv1a) {
  // published FNV-1a 64-bit test vectors
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
  EXPECT_EQ(fnv1a_hex("foobar"), "85944171f73967e8");
}

TEST(Io, FormatDoubleRoundTrips) {
  std::mt19937_64 eng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(eng) * std::pow(10.0, (i % 40) - 20);
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(format_double(std::numeric_limits<double>::quiet_NaN()), "nan");
}

TEST(Io, CoeffJsonRoundTrip) {
  const SpaceParams p{2, 1.5, 2.0, 4.0};
  CoeffVector c(p, 7);
  std::mt19937_64 eng(2);
  std::normal_distribution<double> g;
  for (auto& v : c.data()) v = g(eng);
  const auto text = coeff_to_json(c);
  const auto back = coeff_from_json(text);
  EXPECT_EQ(back.max_degree(), 7);
  EXPECT_EQ(back.params().d, 2);
  EXPECT_EQ(back.params().mu, 1.5);
  EXPECT_EQ(back.data(), c.data());
  const auto j = nlohmann::json::parse(text);
  EXPECT_EQ(j["blocks"].size(), 8u);
  EXPECT_EQ(j["blocks"][3].size(), 4u);
  EXPECT_THROW(coeff_from_json("{\"params\": 3}"), Error);
}

TEST(Io, PointsRoundTrip) {
  const auto dir = scratch_dir("points");
  const auto set = build_separated(2, 0.3, 5);
  const auto path = (dir / "pts.csv").string();
  write_points(set, path, "abc123");
  const auto text = read_file(path);
  EXPECT_EQ(text.rfind("# manifest_hash=abc123\n", 0), 0u);
  EXPECT_NE(text.find("x1,x2\n"), std::string::npos);
  const auto back = read_points(path);
  EXPECT_EQ(back.points, set.points);
  EXPECT_EQ(back.epsilon, set.epsilon);
  EXPECT_EQ(back.seed, set.seed);
  EXPECT_EQ(back.separation, set.separation);
  EXPECT_TRUE(fs::exists(sidecar_path(path)));
  EXPECT_EQ(sidecar_path("a/b/pts.csv"), "a/b/pts.json");
}

TEST(Io, RuleRoundTrip) {
  const auto dir = scratch_dir("rule");
  const SpaceParams p{1, 1.0, 2.0, 2.0};
  const auto rule = lemma_rule(p, 6);
  const auto path = (dir / "sub" / "rule.csv").string();
  write_rule(rule, path, "feed");
  const auto back = read_rule(path);
  EXPECT_EQ(back.weights, rule.weights);
  EXPECT_EQ(back.points(), rule.points());
  EXPECT_EQ(back.exact_degree, rule.exact_degree);
  EXPECT_EQ(back.residual, rule.residual);
  EXPECT_EQ(back.params.mu, 1.0);
  const auto side = nlohmann::json::parse(read_file(sidecar_path(path)));
  EXPECT_EQ(side["manifest_hash"], "feed");
  EXPECT_EQ(side["exact_degree"], rule.exact_degree);
}

TEST(Io, WidthTable) {
  std::vector<WidthEstimate> rows(2);
  rows[0] = {8, 2.0, WidthMode::Average, 2.0, 0.125, 0.001, 1000, 7};
  rows[1] = {16, std::numeric_limits<double>::infinity(), WidthMode::Probabilistic, 0.1,
             1.0 / 3.0, 1e-5, 500, 8};
  const auto text = width_table_csv(rows, "h1");
  EXPECT_EQ(text.rfind("# manifest_hash=h1\nn,q,mode,param,value,stderr,samples,seed\n", 0), 0u);
  const auto back = parse_width_table(text);
  ASSERT_EQ(back.size(), 2u);
  for (int i = 0; i < 2; ++i) {
    EXPECT_EQ(back[i].n, rows[i].n);
    EXPECT_EQ(back[i].q, rows[i].q);
    EXPECT_EQ(back[i].mode, rows[i].mode);
    EXPECT_EQ(back[i].value, rows[i].value);
    EXPECT_EQ(back[i].stderr_, rows[i].stderr_);
    EXPECT_EQ(back[i].seed, rows[i].seed);
  }
}

TEST(Io, MissingFile) {
  EXPECT_THROW(read_file("/nonexistent/ballwidth/file.csv"), Error);
}
