#include "fastlip/io.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::string kScenarios = FASTLIP_SCENARIO_DIR;

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("fastlip_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

/// Runs the binary with --out dir; returns the exit status.
int run(const fs::path& out, const std::string& args) {
  const std::string cmd = std::string(FASTLIP_CLI_PATH) + " --out " + out.string() + " " + args + " > " +
                          (out / "stdout.txt").string() + " 2> " + (out / "stderr.txt").string();
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string slurp(const fs::path& p) { return fastlip::read_text_file(p); }

std::vector<std::vector<double>> parse_csv(const std::string& text, std::vector<std::string>* header = nullptr) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  if (header) {
    std::istringstream h(line);
    for (std::string cell; std::getline(h, cell, ',');) header->push_back(cell);
  }
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::istringstream r(line);
    std::vector<double> row;
    for (std::string cell; std::getline(r, cell, ',');) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST(Cli, SolveTwoLink) {
  const auto d = fresh_dir("solve");
  ASSERT_EQ(run(d, "solve " + kScenarios + "/affine_two_link.json"), 0) << slurp(d / "stderr.txt");
  std::vector<std::string> header;
  const auto rows = parse_csv(slurp(d / "trace.csv"), &header);
  EXPECT_EQ(header, (std::vector<std::string>{"k", "p_1", "p_2", "residual"}));
  ASSERT_FALSE(rows.empty());
  EXPECT_LT(rows.back().back(), 1e-10);
  EXPECT_NEAR(rows.back()[1], 1.0 / 9.0, 1e-9);
  const auto manifest = nlohmann::json::parse(slurp(d / "manifest.json"));
  EXPECT_EQ(manifest["fastlip_version"], fastlip::kVersion);
  EXPECT_EQ(manifest["config"]["command"], "solve");
  EXPECT_EQ(manifest["exit_status"], 0);
  EXPECT_TRUE(manifest["scenario"].is_object());
}

TEST(Cli, QualifyTwoLink) {
  const auto d = fresh_dir("qualify");
  ASSERT_EQ(run(d, "qualify " + kScenarios + "/affine_two_link.json"), 0) << slurp(d / "stderr.txt");
  const auto report = nlohmann::json::parse(slurp(d / "report.json"));
  ASSERT_EQ(report["conditions"][0]["condition"], "Q1");
  EXPECT_EQ(report["conditions"][0]["verdict"], "holds");
  EXPECT_NE(slurp(d / "stdout.txt").find("Q1"), std::string::npos);
}

TEST(Cli, SmoothSigmaCurvePeak) {
  const auto d = fresh_dir("sigma");
  ASSERT_EQ(run(d, "smooth --fading exponential --emit sigma-curve --zmin 1"), 0) << slurp(d / "stderr.txt");
  const auto rows = parse_csv(slurp(d / "sigma-curve.csv"));
  double best = 0.0;
  for (const auto& r : rows) best = std::max(best, r[1]);
  EXPECT_NEAR(best, 0.185, 2e-3);
}

TEST(Cli, SmoothAlphaReport) {
  const auto d = fresh_dir("alpha");
  ASSERT_EQ(run(d, "smooth --fading rayleigh --lambda 1.2533141373155001 --alpha 1"), 0);
  EXPECT_NE(slurp(d / "stdout.txt").find("bound satisfied"), std::string::npos);
  ASSERT_EQ(run(d, "smooth --fading rayleigh --lambda 1 --alpha 1"), 0);
  EXPECT_NE(slurp(d / "stdout.txt").find("bound exceeded"), std::string::npos);
  EXPECT_EQ(run(d, "smooth --fading rayleigh --emit sigma-curve"), 2);
}

TEST(Cli, FigureEmission) {
  const auto d = fresh_dir("figure");
  ASSERT_EQ(run(d, "smooth --figure fig3"), 0);
  EXPECT_TRUE(fs::exists(d / "fig3.csv"));
  EXPECT_EQ(run(d, "smooth --figure fig7"), 2);
}

TEST(Cli, MalformedScenarioExitsTwo) {
  const auto d = fresh_dir("malformed");
  const fs::path bad = d / "bad.json";
  fastlip::write_file_atomic(bad, "{\n  \"tau\": [1.0,\n}\n");
  EXPECT_EQ(run(d, "solve " + bad.string()), 2);
  EXPECT_NE(slurp(d / "stderr.txt").find("line "), std::string::npos);
  fastlip::write_file_atomic(bad, R"({"tau": [1.0, 1.0], "p_min": [0.1, 0.1], "p_max": [1.0]})");
  EXPECT_EQ(run(d, "qualify " + bad.string()), 2);
  EXPECT_NE(slurp(d / "stderr.txt").find("'p_max'"), std::string::npos);
  EXPECT_EQ(run(d, "solve " + (d / "missing.json").string()), 2);
  EXPECT_EQ(run(d, "frobnicate"), 2);
  const auto manifest = nlohmann::json::parse(slurp(d / "manifest.json"));
  EXPECT_EQ(manifest["exit_status"], 2);
}

TEST(Cli, InfeasibleExitsOne) {
  const auto d = fresh_dir("infeasible");
  EXPECT_EQ(run(d, "verify " + kScenarios + "/infeasible_affine.json"), 1);
  EXPECT_EQ(run(d, "solve " + kScenarios + "/infeasible_affine.json"), 1);
}

TEST(Cli, VerifyAgreesOnBundledScenarios) {
  for (const char* name : {"affine_two_link.json", "affine_three_link.json", "monomial_type2.json"}) {
    const auto d = fresh_dir("verify");
    EXPECT_EQ(run(d, std::string("verify --grid-budget 250000 ") + kScenarios + "/" + name), 0)
        << name << "\n" << slurp(d / "stdout.txt");
  }
}

TEST(Cli, ClassifyWritesVerdicts) {
  const auto d = fresh_dir("classify");
  ASSERT_EQ(run(d, "classify --samples 200 " + kScenarios + "/affine_two_link.json"), 0);
  const auto j = nlohmann::json::parse(slurp(d / "classify.json"));
  EXPECT_EQ(j["standard"]["holds"], true);
  EXPECT_EQ(j["type2"]["holds"], false);
}

TEST(Cli, OutputDirectoryFromEnvironment) {
  const auto d = fresh_dir("env");
  const std::string cmd = "FASTLIP_OUT=" + d.string() + " " + FASTLIP_CLI_PATH + " smooth --emit psi-curve > /dev/null";
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_TRUE(fs::exists(d / "psi-curve.csv"));
  EXPECT_TRUE(fs::exists(d / "manifest.json"));
}

TEST(Cli, DeterministicOutputs) {
  const auto a = fresh_dir("det_a");
  const auto b = fresh_dir("det_b");
  for (const auto& d : {a, b}) {
    ASSERT_EQ(run(d, "--seed 7 solve --async --delay 3 " + kScenarios + "/affine_three_link.json"), 0);
    ASSERT_EQ(run(d, "--seed 7 qualify --samples 300 " + kScenarios + "/opportunistic_two_link.json"), 0);
  }
  EXPECT_EQ(slurp(a / "trace.csv"), slurp(b / "trace.csv"));
  EXPECT_EQ(slurp(a / "report.json"), slurp(b / "report.json"));
  EXPECT_EQ(slurp(a / "report.txt"), slurp(b / "report.txt"));
}
