#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "detreact/cli.hpp"
#include "detreact/trace.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "detreact-bench");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = detreact::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines_of(const fs::path& p) {
  std::ifstream f(p);
  std::vector<std::string> out;
  for (std::string line; std::getline(f, line);) out.push_back(line);
  return out;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("detreact-cli-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Cli, NoArgumentsPrintsUsage) {
  const auto r = invoke({});
  EXPECT_EQ(r.code, detreact::cli::exit_usage);
  EXPECT_NE(r.out.find("--benchmark"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(invoke({"--benchmark", "Nope"}).code, 2);
  EXPECT_EQ(invoke({"--bogus"}).code, 2);
  EXPECT_EQ(invoke({"-b", "PingPong", "--param", "pings"}).code, 2);
  EXPECT_EQ(invoke({"-b", "PingPong", "--param", "pings=ten"}).code, 2);
  EXPECT_EQ(invoke({"-b", "PingPong", "--param", "rounds=3"}).code, 2);
  EXPECT_EQ(invoke({"-b", "PingPong", "--iterations", "2", "--warmup", "2"}).code, 2);
  EXPECT_EQ(invoke({"-b", "PingPong", "--workers", "0"}).code, 2);
  EXPECT_EQ(invoke({"-b", "ThreadRing", "--param", "actors=1"}).code, 2);
}

TEST(Cli, ListShowsEveryBenchmark) {
  const auto r = invoke({"--list"});
  EXPECT_EQ(r.code, 0);
  for (const char* name : {"PingPong", "DiningPhilosophers", "FilterBank", "RadixSort"}) {
    EXPECT_NE(r.out.find(name), std::string::npos) << name;
  }
}

TEST(Cli, ThirtyRetainedSamplesInCsv) {
  const auto dir = scratch("csv");
  const auto csv = dir / "out.csv";
  const auto r = invoke({"--benchmark", "PingPong", "--workers", "1", "--iterations", "32", "--warmup", "2",
                         "--param", "pings=100", "--csv", csv.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = lines_of(csv);
  ASSERT_EQ(lines.size(), 1u + 30u + 1u + 1u + 1u);
  EXPECT_EQ(lines[0], "benchmark,workers,iteration,millis");
  EXPECT_EQ(lines[1].rfind("PingPong,1,2,", 0), 0u);
  EXPECT_EQ(lines[30].rfind("PingPong,1,31,", 0), 0u);
  EXPECT_EQ(lines[31], "");
  EXPECT_EQ(lines[32], "benchmark,workers,mean_ms,ci99_ms");
  EXPECT_EQ(lines[33].rfind("PingPong,1,", 0), 0u);
}

TEST(Cli, CsvStableApartFromTimings) {
  const auto dir = scratch("stable");
  auto run = [&](const std::string& name) {
    const auto path = dir / name;
    EXPECT_EQ(invoke({"-b", "PingPong,Big", "-w", "1,2", "-n", "4", "--warmup", "1", "--seed", "5", "--param",
                      "pings=30", "--csv", path.string()})
                  .code,
              0);
    // Keep the non-timing columns: three in the sample section, two in the summary.
    std::vector<std::string> keys;
    std::size_t keep = 3;
    for (const auto& line : lines_of(path)) {
      if (line.empty()) keep = 2;
      std::size_t cut = 0;
      for (std::size_t k = 0; k < keep && cut != std::string::npos; ++k) cut = line.find(',', cut + (k > 0));
      keys.push_back(line.substr(0, cut));
    }
    return keys;
  };
  EXPECT_EQ(run("a.csv"), run("b.csv"));
}

TEST(Cli, TraceDigestsAgreeAcrossWorkerSweep) {
  const auto dir = scratch("trace");
  const auto r = invoke({"--benchmark", "DiningPhilosophers", "--workers", "1,2,4,8", "--iterations", "2",
                         "--warmup", "1", "--param", "rounds=20", "--trace", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::set<std::uint64_t> digests;
  for (int w : {1, 2, 4, 8}) {
    const auto path = dir / ("DiningPhilosophers-w" + std::to_string(w) + ".trace");
    ASSERT_TRUE(fs::exists(path)) << path;
    std::ifstream f(path);
    digests.insert(detreact::trace_digest_of_text(f));
  }
  EXPECT_EQ(digests.size(), 1u);
}

TEST(Cli, ValidatorFailureExitsOne) {
  const auto r = invoke({"-b", "Trapezoid", "-n", "2", "--warmup", "1", "--param", "pieces=1"});
  EXPECT_EQ(r.code, detreact::cli::exit_validation);
  EXPECT_NE(r.err.find("Trapezoid"), std::string::npos);
}

TEST(Cli, WorkersFromEnvironment) {
  ::setenv("DETREACT_WORKERS", "3", 1);
  const auto r = invoke({"-b", "PingPong", "-n", "2", "--warmup", "1"});
  ::unsetenv("DETREACT_WORKERS");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("PingPong                     3"), std::string::npos) << r.out;
}
