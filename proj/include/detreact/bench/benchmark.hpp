#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "detreact/environment.hpp"

namespace detreact::bench {

/// Savina benchmark families.
enum class Group { micro, concurrency, parallelism };

[[nodiscard]] std::string_view to_string(Group g);

/// Named integer problem-size knobs, ordered by name.
using Params = std::map<std::string, std::int64_t, std::less<>>;

/// One freshly built program plus the check of its final state.
struct Instance {
  Topology topology;
  /// Returns a diagnostic on failure. Called once, after run().
  std::function<std::optional<std::string>(const TerminationReport&)> validate;
};

struct BenchmarkSpec {
  std::string name;
  Group group;
  std::string summary;
  Params defaults;
  std::function<Instance(const Params&)> build;
};

class UnknownBenchmark : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// All benchmarks in registry order (micro, concurrency, parallelism).
[[nodiscard]] std::span<const BenchmarkSpec> list_benchmarks();

/// Case-sensitive lookup. Throws UnknownBenchmark.
[[nodiscard]] const BenchmarkSpec& find_benchmark(std::string_view name);

/// Defaults with `overrides` applied. Unknown keys throw ParameterError;
/// out-of-range values are rejected when the benchmark is built.
[[nodiscard]] Params resolve_params(const BenchmarkSpec& spec, const Params& overrides);

struct MeasurementStats {
  std::vector<double> samples_ms;  // retained iterations only
  double mean_ms = 0.0;
  /// Half-width of the Student-t 99% confidence interval; 0 with fewer
  /// than two samples.
  double ci99_ms = 0.0;
};

[[nodiscard]] MeasurementStats summarize(std::vector<double> samples_ms);

struct RunOptions {
  std::size_t workers = 1;
  std::size_t iterations = 32;
  std::size_t warmup = 2;
  bool fast = true;
  /// Invoked with the iteration index and its time in milliseconds.
  std::function<void(std::size_t, double)> on_iteration;
};

/// Builds a fresh environment per iteration and times run() only. Every
/// iteration is validated; the first failure throws ValidationError.
[[nodiscard]] MeasurementStats run_benchmark(const BenchmarkSpec& spec, const Params& params,
                                             const RunOptions& options);

/// One untimed, validated run that records its trace into `trace`.
TerminationReport run_traced(const BenchmarkSpec& spec, const Params& params, std::size_t workers,
                             bool fast, Trace& trace);

}  // namespace detreact::bench
