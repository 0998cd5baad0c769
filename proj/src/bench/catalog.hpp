#pragma once

#include <limits>
#include <memory>
#include <string_view>
#include <vector>

#include "detreact/bench/benchmark.hpp"

namespace detreact::bench::detail {

std::vector<BenchmarkSpec> micro_benchmarks();
std::vector<BenchmarkSpec> concurrency_benchmarks();
std::vector<BenchmarkSpec> parallelism_benchmarks();

/// Value of `key`, range-checked. Throws ParameterError.
std::int64_t param(const Params& p, std::string_view key, std::int64_t min = 1,
                   std::int64_t max = std::numeric_limits<std::int32_t>::max());

/// Formats a failed check; returns nullopt when `ok`.
std::optional<std::string> check(bool ok, std::string_view what, std::int64_t got,
                                 std::int64_t expected);

}  // namespace detreact::bench::detail
