#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "bnsens/cli.hpp"
#include "bnsens/io.hpp"
#include "bnsens/report.hpp"
#include "fixtures.hpp"

using namespace bnsens;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& f) const { return (path / f).string(); }
};

std::string generate(const TempDir& dir, std::vector<std::string> extra = {}) {
  std::vector<std::string> args = {"generate",      "--diseases",  "6",
                                   "--findings",    "8",           "--cases",
                                   "25",            "--seed",      "4",
                                   "--network-out", dir / "n.json", "--cases-out",
                                   dir / "c.json"};
  args.insert(args.end(), extra.begin(), extra.end());
  const auto r = run(args);
  REQUIRE_MESSAGE(r.code == 0, r.err);
  return r.out;
}

}  // namespace

TEST_CASE("generate then analyze") {
  TempDir dir("bnsens_test_cli_a");
  generate(dir);
  const auto r = run({"analyze", "--network", dir / "n.json", "--cases", dir / "c.json",
                      "--also-uniform-noise", "--replicates", "2", "--out", dir / "r.csv"});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  CHECK(r.out.find("network: ") == 0);
  const auto records = parse_report_csv(read_file(dir / "r.csv"));
  std::size_t top_level[2] = {0, 0};
  for (const auto& rec : records)
    if (rec.row_kind != "replicate") top_level[rec.prior_mode == "expert" ? 0 : 1]++;
  // Baseline, six sigmas and one uniform config per prior mode.
  CHECK(top_level[0] == 8);
  CHECK(top_level[1] == 8);
  CHECK(records.front().scheme == "none");
  CHECK(records[1].scheme == "logodds");
  CHECK(records[1].sigma == 0.005);
}

TEST_CASE("analyze output does not depend on --jobs") {
  TempDir dir("bnsens_test_cli_b");
  generate(dir, {"--observe-fraction", "0.5"});
  std::string csv[2];
  std::string table[2];
  const char* jobs[2] = {"1", "3"};
  for (int i = 0; i < 2; ++i) {
    const std::string out = dir / ("r" + std::to_string(i) + ".csv");
    const auto r = run({"analyze", "--network", dir / "n.json", "--cases", dir / "c.json",
                        "--scheme", "additive", "--sigma", "0.05,0.25", "--replicates", "3",
                        "--jobs", jobs[i], "--out", out});
    REQUIRE(r.code == 0);
    csv[i] = read_file(out);
    table[i] = r.out;
  }
  CHECK(csv[0] == csv[1]);
  CHECK(table[0] == table[1]);
}

TEST_CASE("generate is deterministic and honors the certainty fraction") {
  TempDir a("bnsens_test_cli_c"), b("bnsens_test_cli_d");
  generate(a, {"--certainty-fraction", "0"});
  generate(b, {"--certainty-fraction", "0"});
  CHECK(read_file(a / "n.json") == read_file(b / "n.json"));
  CHECK(read_file(a / "c.json") == read_file(b / "c.json"));
  const auto net = parse_network(read_file(a / "n.json"));
  for (const auto& row : net.cpt)
    for (double p : row.probs) CHECK((p > 0.0 && p < 1.0));
  const auto text = read_file(a / "n.json");
  CHECK(text.find("\"generator\"") != std::string::npos);
  const auto cpt = text.substr(text.find("\"cpt\""));
  CHECK(cpt.find("\"0\"") == std::string::npos);
  CHECK(cpt.find("\"1\"") == std::string::npos);
}

TEST_CASE("exit codes") {
  TempDir dir("bnsens_test_cli_e");
  generate(dir);
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({"analyze", "--network", dir / "n.json"}).code == kExitUsage);
  CHECK(run({"analyze", "--network", dir / "n.json", "--cases", dir / "c.json", "--scheme",
             "bogus"})
            .code == kExitUsage);
  CHECK(run({"analyze", "--network", dir / "n.json", "--cases", dir / "c.json", "--dist",
             "uniform", "--sigma", "0.1"})
            .code == kExitUsage);
  CHECK(run({"analyze", "--network", dir / "n.json", "--cases", dir / "c.json", "--sigma",
             "0.1,x"})
            .code == kExitUsage);
  CHECK(run({"analyze", "--network", dir / "missing.json", "--cases", dir / "c.json"}).code ==
        kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);

  auto net = testing::two_disease_network();
  net.priors = {0.5, 0.6};
  write_file(dir / "bad.json", serialize_network(net));
  const auto r = run({"analyze", "--network", dir / "bad.json", "--cases", dir / "c.json"});
  CHECK(r.code == kExitValidation);
  CHECK(r.err.find("priors") != std::string::npos);

  write_file(dir / "broken.json", "{ not json");
  CHECK(run({"analyze", "--network", dir / "broken.json", "--cases", dir / "c.json"}).code ==
        kExitUsage);
}

TEST_CASE("uniform distribution and random scheme") {
  TempDir dir("bnsens_test_cli_f");
  generate(dir);
  auto r = run({"analyze", "--network", dir / "n.json", "--cases", dir / "c.json", "--dist",
                "uniform", "--uniform-range", "-0.2,0.2", "--priors", "expert", "--replicates",
                "1", "--out", dir / "u.csv"});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  auto records = parse_report_csv(read_file(dir / "u.csv"));
  REQUIRE(records.size() == 3);
  CHECK(records[1].lo == -0.2);
  CHECK(records[1].hi == 0.2);

  r = run({"analyze", "--network", dir / "n.json", "--cases", dir / "c.json", "--scheme",
           "random", "--priors", "uniform", "--replicates", "1", "--out", dir / "r.csv"});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  records = parse_report_csv(read_file(dir / "r.csv"));
  REQUIRE(records.size() == 3);
  CHECK(records[1].scheme == "random");
  CHECK(records[1].mu == 0.5);
  CHECK(records[1].sigma == 0.15);
}
