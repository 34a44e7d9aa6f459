#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include "json.hpp"

#include "adiabloch/cli.hpp"
#include "adiabloch/evolution.hpp"
#include "adiabloch/io.hpp"
#include "adiabloch/models.hpp"
#include "adiabloch/reproduce.hpp"

using namespace adiabloch;
namespace fs = std::filesystem;

namespace {

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "adiabloch");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "adiabloch_tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Curve, EqualGeneratorsGiveZero) {
  const CMatrix b = build_superop(lambda_model({}, 10.0), Part::total).matrix;
  const DistanceCurve c = distance_curve(b, b, log_time_grid(1e-2, 1e2, 20));
  for (double d : c.distances) EXPECT_EQ(d, 0.0);
  EXPECT_EQ(c.times.front(), 0.0);
  EXPECT_EQ(c.times.size(), 21u);
}

TEST(Curve, FirstOrderTaylor) {
  std::mt19937_64 rng(51);
  const CMatrix a = random_complex(rng, 4, 4);
  const CMatrix e = 1e-3 * random_complex(rng, 4, 4);
  const double t = 1e-3;
  const DistanceCurve c = distance_curve(a + e, a, {t});
  const double taylor = t * op_norm(e);
  EXPECT_NEAR(c.distances[0], taylor, 1e-2 * taylor);
}

TEST(Curve, EnvelopeIsRunningMaxWithinWindows) {
  const std::vector<double> t{0.0, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0};
  const std::vector<double> v{0.0, 3.0, 1.0, 4.0, 1.0, 0.5, 2.0};
  const auto env = envelope(t, v, 1.0);
  ASSERT_EQ(env.size(), 6u);
  EXPECT_EQ(env[0].second, 3.0);
  EXPECT_EQ(env[1].second, 3.0);
  EXPECT_EQ(env[2].second, 4.0);
  EXPECT_EQ(env[3].second, 1.0);  // new decade starts at t = 10
  EXPECT_EQ(env[5].second, 2.0);
  for (std::size_t i = 0; i < env.size(); ++i) EXPECT_GE(env[i].second, v[i + 1]);
}

TEST(Curve, SlopeAndBreakaway) {
  std::vector<double> x, y;
  for (int i = 1; i <= 10; ++i) {
    x.push_back(i);
    y.push_back(3.0 * i * i);
  }
  EXPECT_NEAR(fit_slope(x, y), 2.0, 1e-12);
  DistanceCurve c;
  c.times = {0.0, 1.0, 2.0, 3.0};
  c.distances = {0.0, 0.1, 0.5, 0.2};
  EXPECT_EQ(breakaway_time(c, 0.3), 2.0);
  EXPECT_FALSE(breakaway_time(c, 1.0).has_value());
}

TEST(Io, ModelRoundtrip) {
  std::mt19937_64 rng(52);
  const LindbladModel m = random_model(rng, {}, 3.5);
  for (FloatFormat f : {FloatFormat::decimal, FloatFormat::hex}) {
    const LindbladModel back = model_from_json(model_to_json(m, f));
    EXPECT_EQ(back.dim, m.dim);
    EXPECT_EQ(back.gamma, m.gamma);
    EXPECT_EQ(op_norm(build_superop(back, Part::strong).matrix - build_superop(m, Part::strong).matrix), 0.0);
    EXPECT_EQ(op_norm(build_superop(back, Part::weak).matrix - build_superop(m, Part::weak).matrix), 0.0);
  }
}

TEST(Io, MalformedModelThrows) {
  EXPECT_ANY_THROW(model_from_json("{\"dim\": 2"));
  EXPECT_ANY_THROW(model_from_json("{\"dim\": \"two\"}"));
  EXPECT_ANY_THROW(model_from_json("[1, 2]"));
}

TEST(Io, CsvHeader) {
  DistanceCurve c;
  c.times = {0.0, 1.0};
  c.distances = {0.0, 0.25};
  c.order = 2;
  const std::string csv = curve_to_csv(c);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,distance,order,norm");
  EXPECT_NE(csv.find("1,0.25,2,spectral"), std::string::npos);
}

TEST(Reproduce, DeterministicReport) {
  const ReproductionReport a = reproduce("qubit_nilpotent");
  const ReproductionReport b = reproduce("qubit_nilpotent");
  EXPECT_TRUE(a.pass());
  ASSERT_EQ(a.items.size(), b.items.size());
  for (std::size_t i = 0; i < a.items.size(); ++i) {
    EXPECT_EQ(a.items[i].name, b.items[i].name);
    EXPECT_EQ(a.items[i].computed, b.items[i].computed);
  }
  EXPECT_EQ(report_to_json(a), report_to_json(b));
}

TEST(Cli, ReproduceWritesReport) {
  const fs::path out = scratch("lambda_numeric.json");
  fs::remove(out);
  EXPECT_EQ(run_cli({"reproduce", "lambda_numeric", "--out", out.string()}), 0);
  const auto doc = nlohmann::json::parse(read_file(out.string()));
  EXPECT_TRUE(doc.contains("items"));
}

TEST(Cli, SolveBelowThresholdIsNumericalFailure) {
  EXPECT_EQ(run_cli({"solve", "--model", "builtin:lambda", "--gamma", "0.1"}), 1);
}

TEST(Cli, UsageErrors) {
  const fs::path bad = scratch("malformed.json");
  write_file(bad.string(), "{\"dim\": ");
  EXPECT_EQ(run_cli({"solve", "--model", bad.string()}), 2);
  EXPECT_EQ(run_cli({"frobnicate"}), 2);
  EXPECT_EQ(run_cli({"evolve", "--format", "xml"}), 2);
  EXPECT_EQ(run_cli({"decompose", "--model", "builtin:nope"}), 2);
}

TEST(Cli, EvolveCsv) {
  const fs::path out = scratch("curve.csv");
  EXPECT_EQ(run_cli({"evolve", "--model", "builtin:qubit", "--gamma", "10", "--order", "1", "--format", "csv",
                     "--points", "10", "--out", out.string()}),
            0);
  const std::string csv = read_file(out.string());
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,distance,order,norm");
}
