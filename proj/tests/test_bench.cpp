#include <gtest/gtest.h>

#include <set>

#include "detreact/bench/benchmark.hpp"
#include "detreact/bench/lcg.hpp"

using namespace detreact;
using namespace detreact::bench;

namespace {

/// Small parameters so every benchmark runs in milliseconds.
Params small_params(const BenchmarkSpec& spec) {
  static const std::map<std::string, Params, std::less<>> table = {
      {"PingPong", {{"pings", 50}}},
      {"ThreadRing", {{"actors", 7}, {"pings", 40}}},
      {"CountingActor", {{"messages", 200}}},
      {"ForkJoin", {{"workers", 6}, {"messages", 20}}},
      {"Big", {{"actors", 6}, {"pings", 20}}},
      {"Chameneos", {{"chameneos", 5}, {"meetings", 40}}},
      {"ConcurrentDictionary", {{"workers", 5}, {"messages", 30}, {"keys", 10}, {"write_percent", 40}}},
      {"SleepingBarber", {{"customers", 40}, {"waiting_room", 3}}},
      {"CigaretteSmokers", {{"rounds", 50}, {"smokers", 4}}},
      {"DiningPhilosophers", {{"philosophers", 5}, {"rounds", 10}}},
      {"BankTransaction", {{"accounts", 8}, {"transactions", 120}, {"batch", 4}}},
      {"ProducerConsumer", {{"producers", 4}, {"consumers", 3}, {"items", 15}, {"buffer", 4}}},
      {"Trapezoid", {{"pieces", 10000}, {"workers", 4}}},
      {"PiPrecision", {{"workers", 3}, {"terms", 40}}},
      {"RadixSort", {{"values", 200}, {"bits", 8}}},
      {"FilterBank", {{"samples", 64}, {"branches", 4}, {"taps", 8}}},
  };
  return resolve_params(spec, table.at(spec.name));
}

std::uint64_t traced_digest(const BenchmarkSpec& spec, const Params& p, std::size_t workers) {
  Trace t;
  (void)run_traced(spec, p, workers, true, t);
  return t.digest();
}

}  // namespace

TEST(Registry, ListsSixteenBenchmarksWithSavinaGroups) {
  const std::map<std::string, Group> expected = {
      {"PingPong", Group::micro},
      {"ThreadRing", Group::micro},
      {"CountingActor", Group::micro},
      {"ForkJoin", Group::micro},
      {"Big", Group::micro},
      {"Chameneos", Group::micro},
      {"ConcurrentDictionary", Group::concurrency},
      {"SleepingBarber", Group::concurrency},
      {"CigaretteSmokers", Group::concurrency},
      {"DiningPhilosophers", Group::concurrency},
      {"BankTransaction", Group::concurrency},
      {"ProducerConsumer", Group::concurrency},
      {"Trapezoid", Group::parallelism},
      {"PiPrecision", Group::parallelism},
      {"RadixSort", Group::parallelism},
      {"FilterBank", Group::parallelism},
  };
  const auto all = list_benchmarks();
  ASSERT_EQ(all.size(), expected.size());
  for (const auto& s : all) {
    ASSERT_TRUE(expected.contains(s.name)) << s.name;
    EXPECT_EQ(s.group, expected.at(s.name)) << s.name;
  }
  EXPECT_EQ(find_benchmark("DiningPhilosophers").group, Group::concurrency);
  EXPECT_EQ(find_benchmark("PingPong").group, Group::micro);
}

TEST(Registry, UnknownNameThrows) {
  EXPECT_THROW((void)find_benchmark("Fibonacci"), UnknownBenchmark);
  EXPECT_THROW((void)find_benchmark("pingpong"), UnknownBenchmark);
}

TEST(Params, OverridesAndUnknownKeys) {
  const auto& spec = find_benchmark("ThreadRing");
  const Params p = resolve_params(spec, {{"pings", 77}});
  EXPECT_EQ(p.at("pings"), 77);
  EXPECT_EQ(p.at("actors"), spec.defaults.at("actors"));
  EXPECT_THROW((void)resolve_params(spec, {{"rounds", 1}}), ParameterError);
}

TEST(Params, OutOfRangeRejectedAtBuild) {
  const auto& spec = find_benchmark("ThreadRing");
  EXPECT_THROW((void)spec.build(resolve_params(spec, {{"actors", 1}})), ParameterError);
  const auto& dp = find_benchmark("DiningPhilosophers");
  EXPECT_THROW((void)dp.build(resolve_params(dp, {{"rounds", 0}})), ParameterError);
}

TEST(Stats, StudentT99Interval) {
  // Reference half-widths from scipy.stats.t.ppf(0.995, n - 1) * s / sqrt(n).
  const auto a = summarize({1.0, 2.0, 3.0, 4.0, 5.0});
  EXPECT_DOUBLE_EQ(a.mean_ms, 3.0);
  EXPECT_NEAR(a.ci99_ms, 3.255586704804386, 1e-9);
  const auto b = summarize({10.0, 12.0, 11.0});
  EXPECT_DOUBLE_EQ(b.mean_ms, 11.0);
  EXPECT_NEAR(b.ci99_ms, 5.730110893714875, 1e-9);
  const auto one = summarize({4.0});
  EXPECT_DOUBLE_EQ(one.mean_ms, 4.0);
  EXPECT_EQ(one.ci99_ms, 0.0);
  EXPECT_EQ(summarize({}).samples_ms.size(), 0u);
}

TEST(Runner, WarmupIterationsAreDropped) {
  const auto& spec = find_benchmark("PingPong");
  RunOptions o;
  o.iterations = 32;
  o.warmup = 2;
  std::vector<std::size_t> seen;
  o.on_iteration = [&](std::size_t i, double ms) {
    seen.push_back(i);
    EXPECT_GE(ms, 0.0);
  };
  const auto stats = run_benchmark(spec, resolve_params(spec, {{"pings", 20}}), o);
  EXPECT_EQ(stats.samples_ms.size(), 30u);
  EXPECT_EQ(seen.size(), 32u);
  EXPECT_GE(stats.ci99_ms, 0.0);
}

TEST(Runner, RejectsBadOptions) {
  const auto& spec = find_benchmark("PingPong");
  RunOptions o;
  o.iterations = 2;
  o.warmup = 2;
  EXPECT_THROW((void)run_benchmark(spec, spec.defaults, o), ParameterError);
  o.warmup = 0;
  o.workers = 0;
  EXPECT_THROW((void)run_benchmark(spec, spec.defaults, o), ParameterError);
}

TEST(Runner, ValidatorFailureAborts) {
  // A single trapezoid is far from the closed-form integral.
  const auto& spec = find_benchmark("Trapezoid");
  RunOptions o;
  o.iterations = 3;
  o.warmup = 1;
  EXPECT_THROW((void)run_benchmark(spec, resolve_params(spec, {{"pieces", 1}, {"workers", 1}}), o),
               ValidationError);
}

TEST(Runner, TrapezoidTenThousandPiecesFourWorkers) {
  const auto& spec = find_benchmark("Trapezoid");
  RunOptions o;
  o.iterations = 2;
  o.warmup = 1;
  o.workers = 4;
  EXPECT_NO_THROW((void)run_benchmark(spec, resolve_params(spec, {{"pieces", 10000}, {"workers", 4}}), o));
}

TEST(Runner, PingPongDefaultValidates) {
  const auto& spec = find_benchmark("PingPong");
  RunOptions o;
  o.iterations = 2;
  o.warmup = 1;
  EXPECT_NO_THROW((void)run_benchmark(spec, spec.defaults, o));
}

TEST(Lcg, MatchesReferenceRecurrence) {
  Lcg g(1);
  std::uint64_t s = 1;
  for (int i = 0; i < 5; ++i) {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    EXPECT_EQ(g.next(), s >> 32);
  }
  Lcg u(9);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.unit();
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
  }
}

class EveryBenchmark : public ::testing::TestWithParam<std::string> {};

TEST_P(EveryBenchmark, ValidatesAndTracesIdenticallyAcrossWorkers) {
  const auto& spec = find_benchmark(GetParam());
  const Params p = small_params(spec);
  const std::uint64_t one = traced_digest(spec, p, 1);
  EXPECT_EQ(traced_digest(spec, p, 3), one);
  EXPECT_EQ(traced_digest(spec, p, 8), one);
}

TEST_P(EveryBenchmark, TopologyIndependentOfWorkers) {
  const auto& spec = find_benchmark(GetParam());
  const Params p = small_params(spec);
  EXPECT_EQ(spec.build(p).topology.structure_digest(), spec.build(p).topology.structure_digest());
}

TEST_P(EveryBenchmark, DefaultsValidate) {
  const auto& spec = find_benchmark(GetParam());
  RunOptions o;
  o.iterations = 1;
  o.warmup = 0;
  o.workers = 2;
  EXPECT_NO_THROW((void)run_benchmark(spec, spec.defaults, o));
}

INSTANTIATE_TEST_SUITE_P(Bench, EveryBenchmark, ::testing::ValuesIn([] {
                           std::vector<std::string> names;
                           for (const auto& s : list_benchmarks()) names.push_back(s.name);
                           return names;
                         }()),
                         [](const auto& info) { return info.param; });

TEST(Properties, RandomSeedsKeepInvariants) {
  // Bank conservation, radix permutation and dictionary replay are checked by
  // the validators; vary the seeds that feed them.
  for (std::int64_t seed : {1, 2, 3, 17, 99}) {
    for (const char* name : {"BankTransaction", "RadixSort", "ConcurrentDictionary", "Big", "SleepingBarber"}) {
      const auto& spec = find_benchmark(name);
      Params p = small_params(spec);
      p["seed"] = seed;
      Trace t;
      EXPECT_NO_THROW((void)run_traced(spec, p, 4, true, t)) << name << " seed " << seed;
    }
  }
}

TEST(Properties, SeedChangesRandomizedOutcome) {
  const auto& spec = find_benchmark("BankTransaction");
  Params p = small_params(spec);
  const auto a = traced_digest(spec, p, 1);
  p["seed"] = 7;
  EXPECT_NE(traced_digest(spec, p, 1), a);
}
