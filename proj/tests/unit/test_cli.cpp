#include "gbench/cli.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

using namespace gbench::cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "gbench");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::map<std::string, std::string> key_values(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

const std::string kData = GBENCH_TEST_DATA_DIR;

}  // namespace

TEST(cli, capacity_loss) {
  const auto r = run_cli({"capacity", "--loss", "0.5", "--nth", "0", "--nbar", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto kv = key_values(r.out);
  EXPECT_NEAR(std::stod(kv.at("c_coh")), 1.0, 1e-12);
  EXPECT_NEAR(std::stod(kv.at("c_holevo")), 2.0, 1e-12);
  EXPECT_EQ(kv.at("n_bar_c"), "8");
}

TEST(cli, capacity_amplifier) {
  const auto r = run_cli({"capacity", "--amp", "1.5", "--nth", "0", "--nbar", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto kv = key_values(r.out);
  EXPECT_LE(std::stod(kv.at("c_gauss")), std::stod(kv.at("c_holevo")));
  EXPECT_TRUE(kv.count("c_coh") && kv.count("c_sq"));
}

TEST(cli, usage_errors) {
  EXPECT_EQ(run_cli({"capacity", "--loss", "0.5"}).code, kExitConfig);
  EXPECT_EQ(run_cli({"capacity", "--nbar", "1"}).code, kExitConfig);
  EXPECT_EQ(run_cli({"capacity", "--loss", "0.5", "--amp", "2", "--nbar", "1"}).code, kExitConfig);
  EXPECT_EQ(run_cli({"capacity", "--loss", "abc", "--nbar", "1"}).code, kExitConfig);
  EXPECT_EQ(run_cli({"capacity", "--loss", "1.5", "--nbar", "1"}).code, kExitConfig);
  EXPECT_EQ(run_cli({"no-such-command"}).code, kExitConfig);
  EXPECT_EQ(run_cli({}).code, kExitConfig);
  EXPECT_EQ(run_cli({"--config", "/nonexistent.toml", "capacity"}).code, kExitConfig);
}

TEST(cli, waterfill) {
  const auto r = run_cli({"waterfill", "--lambdas", "1,2,4", "--budget", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(key_values(r.out).at("nu"), "3.5");
}

TEST(cli, efficiency_grid_golden) {
  const std::string out = ::testing::TempDir() + "grid.csv";
  const auto r = run_cli({"--config", kData + "/grid_tau0.7.toml", "efficiency-grid", "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(out), slurp(kData + "/efficiency_grid_tau0.7.csv"));
}

TEST(cli, efficiency_grid_flags_override_config) {
  const auto a = run_cli({"--config", kData + "/grid_tau0.7.toml", "efficiency-grid", "--nbar_count", "3"});
  ASSERT_EQ(a.code, 0) << a.err;
  std::istringstream in(a.out);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) rows += (!line.empty() && line[0] != '#') ? 1 : 0;
  EXPECT_EQ(rows, 1 + 3 * 7);
}

TEST(cli, efficiency_grid_crossover_column) {
  const std::string cross = ::testing::TempDir() + "cross.csv";
  const auto r = run_cli({"efficiency-grid", "--tau", "0.7", "--nbar_count", "3", "--nth_count", "4",
                          "--crossover_out", cross});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(slurp(cross));
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 'n') continue;
    const auto comma = line.find(',');
    const double n_th = std::stod(line.substr(0, comma));
    const double n_c = std::stod(line.substr(comma + 1));
    const double m = 0.3 * (n_th + 0.5);
    EXPECT_NEAR(n_c, (1.0 + 2.0 * m + 0.7) / (2.0 * m * 0.7), 1e-9 * n_c);
    ++n;
  }
  EXPECT_EQ(n, 4);
}

TEST(cli, csv_header_records_hash_and_seed) {
  const auto a = run_cli({"efficiency-grid", "--tau", "0.5", "--nbar_count", "2", "--nth_count", "2", "--seed", "5"});
  const auto b = run_cli({"efficiency-grid", "--tau", "0.5", "--nbar_count", "2", "--nth_count", "2", "--seed", "5"});
  const auto c = run_cli({"efficiency-grid", "--tau", "0.6", "--nbar_count", "2", "--nth_count", "2", "--seed", "5"});
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.substr(0, 80), c.out.substr(0, 80));
  EXPECT_NE(a.out.find("# gbench 1.0.0\n# command: efficiency-grid\n# config_hash: "), std::string::npos);
  EXPECT_NE(a.out.find("# seed: 5\n"), std::string::npos);
}

TEST(cli, seed_resolution_order) {
  nlohmann::json cfg = nlohmann::json::object();
  ::unsetenv("GB_SEED");
  EXPECT_EQ(resolve_seed(cfg), kDefaultSeed);
  ::setenv("GB_SEED", "77", 1);
  EXPECT_EQ(resolve_seed(cfg), 77u);
  cfg["seed"] = 5;
  EXPECT_EQ(resolve_seed(cfg), 5u);
  ::setenv("GB_SEED", "x", 1);
  EXPECT_THROW(resolve_seed(nlohmann::json::object()), ConfigError);
  ::unsetenv("GB_SEED");
}

TEST(cli, additivity_test) {
  const auto a = run_cli({"additivity-test", "--trials", "300", "--seed", "11"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(key_values(a.out).at("violations"), "0");
  EXPECT_EQ(a.out, run_cli({"additivity-test", "--trials", "300", "--seed", "11"}).out);
  const auto one = run_cli({"additivity-test", "--trials", "100", "--modes", "1"});
  EXPECT_EQ(one.code, 0);
  EXPECT_GE(std::stod(key_values(one.out).at("min_gap")), -1e-9);
}

TEST(cli, becerra_csv) {
  const auto r = run_cli({"becerra", "--order", "4", "--stages", "64", "--nbar", "2", "--trials", "40000"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("n_bar,delta,sigma,I_becerra,I_stderr,C_coh,C_sq,C_holevo,beats_gaussian\n"),
            std::string::npos);
  const auto tail = r.out.substr(r.out.size() - 3);
  EXPECT_TRUE(tail == ",0\n" || tail == ",1\n") << tail;
}

TEST(cli, qam_heterodyne_csv) {
  const auto r = run_cli({"qam-heterodyne", "--order", "16", "--sigma", "3,inf", "--nbar", "1,2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("M,eta,sigma,delta,n_bar,I_bits,C_coh_bits\n"), std::string::npos);
  EXPECT_NE(r.out.find("# knee: sigma=3"), std::string::npos);
}

TEST(cli, selftest) {
  const auto r = run_cli({"selftest"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST(cli, json_config_equivalent) {
  const std::string path = ::testing::TempDir() + "cap.json";
  {
    std::ofstream f(path);
    f << R"({"capacity": {"loss": 0.5, "nth": 0, "nbar": 2}})";
  }
  const auto r = run_cli({"--config", path, "capacity"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, run_cli({"capacity", "--loss", "0.5", "--nth", "0", "--nbar", "2"}).out);
}
