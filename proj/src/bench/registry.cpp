#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>
#include <fmt/format.h>

#include "catalog.hpp"

namespace detreact::bench {

std::string_view to_string(Group g) {
  switch (g) {
    case Group::micro:
      return "micro";
    case Group::concurrency:
      return "concurrency";
    case Group::parallelism:
      return "parallelism";
  }
  return "?";
}

namespace detail {

std::int64_t param(const Params& p, std::string_view key, std::int64_t min, std::int64_t max) {
  const auto it = p.find(key);
  if (it == p.end()) throw ParameterError(fmt::format("missing parameter {}", key));
  if (it->second < min || it->second > max) {
    throw ParameterError(fmt::format("parameter {}={} out of range [{}, {}]", key, it->second, min, max));
  }
  return it->second;
}

std::optional<std::string> check(bool ok, std::string_view what, std::int64_t got,
                                 std::int64_t expected) {
  if (ok) return std::nullopt;
  return fmt::format("{}: got {}, expected {}", what, got, expected);
}

}  // namespace detail

std::span<const BenchmarkSpec> list_benchmarks() {
  static const std::vector<BenchmarkSpec> all = [] {
    std::vector<BenchmarkSpec> v = detail::micro_benchmarks();
    for (auto& s : detail::concurrency_benchmarks()) v.push_back(std::move(s));
    for (auto& s : detail::parallelism_benchmarks()) v.push_back(std::move(s));
    return v;
  }();
  return all;
}

const BenchmarkSpec& find_benchmark(std::string_view name) {
  for (const auto& s : list_benchmarks()) {
    if (s.name == name) return s;
  }
  throw UnknownBenchmark(fmt::format("unknown benchmark '{}'", name));
}

Params resolve_params(const BenchmarkSpec& spec, const Params& overrides) {
  Params out = spec.defaults;
  for (const auto& [k, v] : overrides) {
    const auto it = out.find(k);
    if (it == out.end()) {
      throw ParameterError(fmt::format("benchmark {} has no parameter '{}'", spec.name, k));
    }
    it->second = v;
  }
  return out;
}

MeasurementStats summarize(std::vector<double> samples_ms) {
  MeasurementStats s;
  s.samples_ms = std::move(samples_ms);
  const auto n = s.samples_ms.size();
  if (n == 0) return s;
  s.mean_ms = std::accumulate(s.samples_ms.begin(), s.samples_ms.end(), 0.0) / static_cast<double>(n);
  if (n < 2) return s;
  double ss = 0.0;
  for (double x : s.samples_ms) ss += (x - s.mean_ms) * (x - s.mean_ms);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  const boost::math::students_t dist(static_cast<double>(n - 1));
  const double t = boost::math::quantile(boost::math::complement(dist, 0.005));
  s.ci99_ms = t * sd / std::sqrt(static_cast<double>(n));
  return s;
}

namespace {

void validate(const BenchmarkSpec& spec, const Instance& inst, const TerminationReport& report,
              std::size_t workers) {
  if (!inst.validate) return;
  if (auto err = inst.validate(report)) {
    throw ValidationError(fmt::format("{} (workers={}): {}", spec.name, workers, *err));
  }
}

}  // namespace

MeasurementStats run_benchmark(const BenchmarkSpec& spec, const Params& params,
                               const RunOptions& options) {
  if (options.workers == 0) throw ParameterError("workers must be >= 1");
  if (options.warmup >= options.iterations) {
    throw ParameterError(fmt::format("warmup ({}) must be less than iterations ({})", options.warmup,
                                     options.iterations));
  }
  std::vector<double> retained;
  retained.reserve(options.iterations - options.warmup);
  for (std::size_t i = 0; i < options.iterations; ++i) {
    Instance inst = spec.build(params);
    Config config;
    config.workers = options.workers;
    config.fast = options.fast;
    Environment env(std::move(inst.topology), config);
    const auto start = std::chrono::steady_clock::now();
    const TerminationReport report = env.run();
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    validate(spec, inst, report, options.workers);
    if (options.on_iteration) options.on_iteration(i, ms);
    if (i >= options.warmup) retained.push_back(ms);
  }
  return summarize(std::move(retained));
}

TerminationReport run_traced(const BenchmarkSpec& spec, const Params& params, std::size_t workers,
                             bool fast, Trace& trace) {
  Instance inst = spec.build(params);
  Config config;
  config.workers = workers;
  config.fast = fast;
  config.trace = &trace;
  Environment env(std::move(inst.topology), config);
  const TerminationReport report = env.run();
  validate(spec, inst, report, workers);
  return report;
}

}  // namespace detreact::bench
