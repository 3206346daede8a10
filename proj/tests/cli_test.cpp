#include <gtest/gtest.h>

#include <sstream>

#include "orderstat/cli.hpp"
#include "temp_dir.hpp"

using namespace orderstat;
using orderstat::test::slurp;
using orderstat::test::TempDir;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "orderstat");
  std::ostringstream out, err;
  const int code = cli_dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

void write_cosine_field(const std::filesystem::path& p) {
  io::write_text_file(p, R"({"b": 1, "real_valued": true, "coeffs": [[0.25, 0], [0.5, 0], [0.25, 0]]})");
}

}  // namespace

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
  const auto r = run({"gen-field", "--b", "1", "--bogus", "2"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("gen-field"), std::string::npos);
  EXPECT_EQ(run({"estimate", "--n", "1000", "--seed", "7"}).code, kExitUsage);
  EXPECT_EQ(run({"sample", "--n", "10"}).code, kExitUsage);
}

TEST(Cli, HelpExitsCleanly) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("mse-sweep"), std::string::npos);
}

TEST(Cli, GenFieldWritesBoundedRealField) {
  TempDir dir;
  ASSERT_EQ(run({"gen-field", "--b", "3", "--seed", "5", "--out", dir.path().string()}).code, kExitOk);
  const auto f = field_from_json(nlohmann::json::parse(slurp(dir / "field.json")));
  EXPECT_EQ(f.bandwidth(), 3);
  EXPECT_TRUE(f.real_valued());
  EXPECT_NEAR(f.coeffs().cwiseAbs().sum(), 1.0, 1e-12);
}

TEST(Cli, SampleWritesCsvAndSidecar) {
  TempDir dir;
  write_cosine_field(dir / "f.json");
  ASSERT_EQ(run({"sample", "--field", (dir / "f.json").string(), "--n", "25", "--seed", "9", "--out",
                 dir.path().string()})
                .code,
            kExitOk);
  std::istringstream csv(slurp(dir / "samples.csv"));
  EXPECT_EQ(read_sample_csv(csv).size(), 25u);
  const auto side = nlohmann::json::parse(slurp(dir / "samples.json"));
  EXPECT_EQ(side.at("n"), 25);
  EXPECT_EQ(side.at("b_source"), 1);
  EXPECT_EQ(side.at("seed"), "9");
}

TEST(Cli, EstimateIsReproducible) {
  TempDir dir;
  write_cosine_field(dir / "f.json");
  const std::vector<std::string> args = {"estimate", "--field", (dir / "f.json").string(), "--n", "1000",
                                         "--seed", "7", "--out", dir.path().string()};
  const auto first = run(args);
  ASSERT_EQ(first.code, kExitOk);
  const std::string bytes = slurp(dir / "estimate.json");
  const auto second = run(args);
  EXPECT_EQ(second.out, first.out);
  EXPECT_EQ(slurp(dir / "estimate.json"), bytes);
  const auto j = nlohmann::json::parse(bytes);
  EXPECT_EQ(j.at("n"), 1000);
  EXPECT_EQ(j.at("b"), 1);
}

TEST(Cli, EstimateRejectsTooFewSamples) {
  TempDir dir;
  write_cosine_field(dir / "f.json");
  EXPECT_EQ(run({"estimate", "--field", (dir / "f.json").string(), "--n", "2", "--out", dir.path().string()}).code,
            kExitUsage);
}

TEST(Cli, MissingFieldFileIsRuntimeFailure) {
  TempDir dir;
  EXPECT_EQ(run({"estimate", "--field", (dir / "nope.json").string(), "--n", "10"}).code, kExitRuntime);
}

TEST(Cli, MseSweepFromConfig) {
  TempDir dir;
  io::write_text_file(dir / "c.json", R"({"b_list": [1, 2], "n_list": [100, 1000], "trials": 10, "base_seed": 3})");
  ASSERT_EQ(run({"mse-sweep", "--config", (dir / "c.json").string(), "--out", (dir / "o").string()}).code, kExitOk);
  const std::string csv = slurp(dir / "o" / "mse_sweep.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "b,n,trials,mean_distortion,stderr,n_times_mse,bound");
  EXPECT_TRUE(std::filesystem::exists(dir / "o" / "mse_sweep.json"));
}

TEST(Cli, MseSweepFlagsOverrideConfig) {
  TempDir dir;
  io::write_text_file(dir / "c.json", R"({"b_list": [1], "n_list": [100], "trials": 10})");
  ASSERT_EQ(run({"mse-sweep", "--config", (dir / "c.json").string(), "--n", "50,60", "--out", dir.path().string()})
                .code,
            kExitOk);
  const auto j = nlohmann::json::parse(slurp(dir / "mse_sweep.json"));
  ASSERT_EQ(j.at("rows").size(), 2u);
  EXPECT_EQ(j["rows"][1]["n"], 60);
}

TEST(Cli, InvalidConfigWritesNothing) {
  TempDir dir;
  io::write_text_file(dir / "c.json", R"({"b_list": [5], "n_list": [10], "trials": 10})");
  const auto out = dir / "o";
  EXPECT_EQ(run({"mse-sweep", "--config", (dir / "c.json").string(), "--out", out.string()}).code, kExitUsage);
  EXPECT_FALSE(std::filesystem::exists(out));
  io::write_text_file(dir / "d.json", R"({"b_list": [1], "n_list": [10], "trials": 0})");
  EXPECT_EQ(run({"mse-sweep", "--config", (dir / "d.json").string(), "--out", out.string()}).code, kExitUsage);
  EXPECT_FALSE(std::filesystem::exists(out));
}

TEST(Cli, UnwritableOutputIsRuntimeFailure) {
  TempDir dir;
  io::write_text_file(dir / "blocker", "x");
  EXPECT_EQ(run({"gen-field", "--b", "1", "--out", (dir / "blocker" / "sub").string()}).code, kExitRuntime);
}

TEST(Cli, CltCheckWithFixedField) {
  TempDir dir;
  write_cosine_field(dir / "f.json");
  ASSERT_EQ(run({"clt-check", "--field", (dir / "f.json").string(), "--n", "500", "--trials", "50", "--out",
                 dir.path().string()})
                .code,
            kExitOk);
  const auto j = nlohmann::json::parse(slurp(dir / "clt_report.json"));
  ASSERT_EQ(j.at("cells").size(), 1u);
  EXPECT_EQ(j["cells"][0]["b"], 1);
  EXPECT_TRUE(j["cells"][0].contains("frobenius_rel_err"));
}

TEST(Cli, AmbiguityDemo) {
  TempDir dir;
  write_cosine_field(dir / "f.json");
  ASSERT_EQ(run({"ambiguity-demo", "--field", (dir / "f.json").string(), "--theta", "0", "--n", "200", "--grid",
                 "512", "--out", dir.path().string()})
                .code,
            kExitOk);
  const auto j = nlohmann::json::parse(slurp(dir / "ambiguity.json"));
  EXPECT_EQ(j.at("distortion_between_fields"), 0.0);
  EXPECT_TRUE(std::filesystem::exists(dir / "empirical_shifted.csv"));
  EXPECT_EQ(run({"ambiguity-demo", "--b", "2", "--theta", "1.5", "--out", dir.path().string()}).code, kExitUsage);
  EXPECT_EQ(run({"ambiguity-demo", "--theta", "0.5"}).code, kExitUsage);
}
