#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "json.hpp"
#include "racelab/app.hpp"
#include "racelab/config.hpp"
#include "racelab/report.hpp"

using namespace racelab;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = std::filesystem::temp_directory_path() / ("racelab_cli_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir_);
    for (const char* d : {"-4", "-8", "8"}) {
      const auto r = run_cli({"--zeros-dir", zeros(), "--height", "60", "zeros", "compute", "--chi", d});
      ASSERT_EQ(r.code, 0) << r.err;
    }
  }
  static void TearDownTestSuite() { std::filesystem::remove_all(dir_); }

  static std::string zeros() { return dir_.string(); }
  static std::filesystem::path dir_;
};

std::filesystem::path Cli::dir_;

}  // namespace

TEST(Config, ParseCount) {
  EXPECT_EQ(parse_count("1e7"), 10'000'000u);
  EXPECT_EQ(parse_count(" 42 "), 42u);
  EXPECT_THROW(parse_count("2.5"), ConfigError);
  EXPECT_THROW(parse_count("-1"), ConfigError);
  EXPECT_THROW(parse_count("ten"), ConfigError);
}

TEST(Config, FileAndOverrides) {
  const auto path = std::filesystem::temp_directory_path() / ("racelab_cfg_" + std::to_string(::getpid()));
  {
    std::ofstream f(path);
    f << "# budgets\nheight = 1500\nsamples=1e5   # short run\nseed = 9\nformat = json\n";
  }
  RunConfig c;
  apply_config(c, read_config_file(path));
  EXPECT_EQ(c.height, 1500.0);
  EXPECT_EQ(c.samples, 100000u);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.format, OutputFormat::json);
  EXPECT_THROW(apply_config(c, {{"colour", "blue"}}), ConfigError);
  {
    std::ofstream f(path);
    f << "height 1500\n";
  }
  EXPECT_THROW(read_config_file(path), ConfigError);
  std::filesystem::remove(path);
}

TEST(Report, CsvQuoting) {
  EXPECT_EQ(csv_quote("plain"), "plain");
  EXPECT_EQ(csv_quote("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_quote("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_quote("two\nlines"), "\"two\nlines\"");
}

TEST(Report, RealsRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 0.999569, 6.020948904697596}) EXPECT_EQ(std::stod(format_real(v)), v);
}

TEST(Report, CsvLayout) {
  Meta meta{"demo", {}, 5u, {}, {"a note"}};
  meta.param("q", std::int64_t{8});
  Table t;
  t.columns = {"name", "value", "missing"};
  t.add({std::string("x,y"), 0.5, Cell()});
  std::ostringstream out;
  write_csv(out, meta, t);
  const std::string s = out.str();
  EXPECT_NE(s.find("# command=demo\n"), std::string::npos);
  EXPECT_NE(s.find("# param.q=8\n"), std::string::npos);
  EXPECT_NE(s.find("# seed=5\n"), std::string::npos);
  EXPECT_NE(s.find("# note=a note\n"), std::string::npos);
  EXPECT_NE(s.find("name,value,missing\n\"x,y\",0.5,\n"), std::string::npos);
}

TEST_F(Cli, CharsTable) {
  const auto r = run_cli({"chars", "--q", "8"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("chi_-8,8,odd,1,1,-1,-1"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("\"c(q,a)\",,,3,-1,-1,-1"), std::string::npos) << r.out;
}

TEST_F(Cli, JsonCarriesMetadata) {
  const auto r = run_cli({"--format", "json", "--zeros-dir", zeros(), "--seed", "3", "--samples", "2000",
                          "--height", "60", "delta", "two-way", "--q", "8", "--a", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["meta"]["command"], "delta two-way");
  EXPECT_EQ(j["meta"]["seed"], 3);
  EXPECT_EQ(j["meta"]["zeros"].size(), 2u);
  EXPECT_EQ(j["rows"].size(), 1u);
  EXPECT_EQ(j["rows"][0]["method"], "monte-carlo");
  EXPECT_EQ(j["rows"][0]["budget"], 2000);
}

TEST_F(Cli, MonteCarloNeedsSeedAndIsReproducible) {
  const std::vector<std::string> base{"--zeros-dir", zeros(), "--samples", "5000", "--height", "60"};
  auto no_seed = base;
  no_seed.insert(no_seed.end(), {"delta", "three-way", "--q", "8", "--order", "3,5,7"});
  const auto r = run_cli(no_seed);
  EXPECT_EQ(r.code, kConfigurationError);
  EXPECT_NE(r.err.find("--seed"), std::string::npos);

  auto with_seed = base;
  with_seed.insert(with_seed.end(), {"--seed", "17", "delta", "three-way", "--q", "8", "--order", "3,5,7"});
  const auto a = run_cli(with_seed);
  const auto b = run_cli(with_seed);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  auto threads = with_seed;
  threads.insert(threads.begin(), {"--workers", "3"});
  const auto c = run_cli(threads);
  EXPECT_EQ(a.out.substr(a.out.find("\nevent")), c.out.substr(c.out.find("\nevent")));
}

TEST_F(Cli, ConfigFileIsOverriddenByFlags) {
  const auto cfg = dir_ / "run.cfg";
  {
    std::ofstream f(cfg);
    f << "zeros_dir = " << zeros() << "\nheight = 50\nseed = 4\nsamples = 1000\n";
  }
  const auto from_file = run_cli({"--config", cfg.string(), "delta", "two-way", "--q", "8", "--a", "3"});
  ASSERT_EQ(from_file.code, 0) << from_file.err;
  EXPECT_NE(from_file.out.find("# param.height=50"), std::string::npos) << from_file.out;
  const auto flagged =
      run_cli({"--config", cfg.string(), "--height", "60", "delta", "two-way", "--q", "8", "--a", "3"});
  ASSERT_EQ(flagged.code, 0) << flagged.err;
  EXPECT_NE(flagged.out.find("# param.height=60"), std::string::npos) << flagged.out;
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run_cli({"frobnicate"}).code, kConfigurationError);
  EXPECT_EQ(run_cli({"--format", "xml", "chars", "--q", "8"}).code, kConfigurationError);
  EXPECT_EQ(run_cli({"chars", "--q", "5"}).code, kConfigurationError);
  EXPECT_EQ(run_cli({"race", "counts", "--q", "4", "--limit", "2e10"}).code, kConfigurationError);
  EXPECT_EQ(run_cli({"race", "crossing", "--q", "4", "--a", "1", "--b", "3", "--limit", "30000"}).code, kSuccess);

  const auto missing = run_cli({"--zeros-dir", (dir_ / "nowhere").string(), "--seed", "1", "delta", "cf", "--q",
                                "12", "--a", "5"});
  EXPECT_EQ(missing.code, kConfigurationError);
  EXPECT_NE(missing.err.find("racelab zeros compute --chi"), std::string::npos) << missing.err;
}

TEST_F(Cli, TamperedZeroFileFailsVerification) {
  const auto good = dir_ / "chi_-4.zeros";
  const auto bad = dir_ / "tampered.zeros";
  std::ifstream in(good);
  std::ofstream out(bad);
  std::string line;
  int data_line = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#' && ++data_line == 3) {
      const auto comma = line.find(',');
      line = line.substr(0, comma + 1) + std::to_string(std::stod(line.substr(comma + 1)) + 0.05);
    }
    out << line << '\n';
  }
  out.close();
  EXPECT_EQ(run_cli({"zeros", "verify", "--file", good.string()}).code, kSuccess);
  const auto r = run_cli({"zeros", "verify", "--file", bad.string()});
  EXPECT_EQ(r.code, kComputationFailure) << r.out;
  EXPECT_EQ(run_cli({"zeros", "verify", "--file", (dir_ / "absent.zeros").string()}).code, kConfigurationError);
}

TEST_F(Cli, ReportFileReplacesStdout) {
  const auto path = dir_ / "chars.csv";
  const auto r = run_cli({"--report", path.string(), "chars", "--q", "12"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  EXPECT_TRUE(std::filesystem::file_size(path) > 0);
}

TEST_F(Cli, SpecSyntaxForms) {
  EXPECT_EQ(run_cli({"zeros", "verify", (dir_ / "chi_-4.zeros").string()}).code, kSuccess);
  const auto r = run_cli({"delta", "two-way", "--q", "8", "--a", "3", "--samples", "1e3", "--height", "60", "--seed",
                          "42", "--zeros-dir", zeros(), "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["meta"]["seed"], 42);
  EXPECT_EQ(j["rows"][0]["budget"], 1000);
}
