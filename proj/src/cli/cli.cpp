#include "detreact/cli.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "detreact/bench/benchmark.hpp"

namespace detreact::cli {

namespace {

struct RunConfig {
  std::vector<std::string> benchmarks;
  std::vector<std::size_t> workers{1};
  std::size_t iterations = 32;
  std::size_t warmup = 2;
  bool fast = true;
  std::vector<std::string> params;
  std::optional<std::int64_t> seed;
  std::string csv_path;
  std::string trace_dir;
  bool list = false;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Selected {
  const bench::BenchmarkSpec* spec;
  bench::Params params;
};

bench::Params parse_overrides(const std::vector<std::string>& raw) {
  bench::Params out;
  for (const auto& kv : raw) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError(fmt::format("--param expects k=v, got '{}'", kv));
    std::int64_t v = 0;
    const char* first = kv.data() + eq + 1;
    const char* last = kv.data() + kv.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || first == last) {
      throw UsageError(fmt::format("--param {}: value must be an integer", kv));
    }
    out[kv.substr(0, eq)] = v;
  }
  return out;
}

std::vector<Selected> select(const RunConfig& cfg) {
  std::vector<const bench::BenchmarkSpec*> specs;
  for (const auto& name : cfg.benchmarks) {
    if (name == "all") {
      for (const auto& s : bench::list_benchmarks()) specs.push_back(&s);
    } else {
      try {
        specs.push_back(&bench::find_benchmark(name));
      } catch (const bench::UnknownBenchmark& e) {
        throw UsageError(e.what());
      }
    }
  }
  if (specs.empty()) throw UsageError("no benchmark selected");

  bench::Params overrides = parse_overrides(cfg.params);
  if (cfg.seed) overrides["seed"] = *cfg.seed;
  // An override applies to every selected benchmark that declares it.
  for (const auto& [key, value] : overrides) {
    const bool known = std::any_of(specs.begin(), specs.end(),
                                   [&](const auto* s) { return s->defaults.contains(key); });
    if (!known && key != "seed") throw UsageError(fmt::format("no selected benchmark has parameter '{}'", key));
  }
  std::vector<Selected> out;
  for (const auto* s : specs) {
    bench::Params mine;
    for (const auto& [key, value] : overrides) {
      if (s->defaults.contains(key)) mine[key] = value;
    }
    out.push_back({s, bench::resolve_params(*s, mine)});
  }
  return out;
}

void print_list(std::ostream& out) {
  fmt::print(out, "{:<22} {:<12} {}\n", "benchmark", "group", "parameters");
  for (const auto& s : bench::list_benchmarks()) {
    std::string params;
    for (const auto& [k, v] : s.defaults) params += fmt::format("{}{}={}", params.empty() ? "" : " ", k, v);
    fmt::print(out, "{:<22} {:<12} {}\n", s.name, bench::to_string(s.group), params);
  }
}

std::string param_summary(const bench::Params& p) {
  std::string out;
  for (const auto& [k, v] : p) out += fmt::format("{}{}={}", out.empty() ? "" : " ", k, v);
  return out;
}

struct Row {
  std::string benchmark;
  std::size_t workers;
  bench::MeasurementStats stats;
  std::size_t first_retained;
};

void write_csv(const std::string& path, const std::vector<Row>& rows) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error(fmt::format("cannot write {}", path));
  f << "benchmark,workers,iteration,millis\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.stats.samples_ms.size(); ++i) {
      fmt::print(f, "{},{},{},{:.6f}\n", r.benchmark, r.workers, r.first_retained + i, r.stats.samples_ms[i]);
    }
  }
  f << "\nbenchmark,workers,mean_ms,ci99_ms\n";
  for (const auto& r : rows) fmt::print(f, "{},{},{:.6f},{:.6f}\n", r.benchmark, r.workers, r.stats.mean_ms, r.stats.ci99_ms);
}

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.warmup >= cfg.iterations) {
    throw UsageError(fmt::format("--warmup ({}) must be less than --iterations ({})", cfg.warmup, cfg.iterations));
  }
  for (std::size_t w : cfg.workers) {
    if (w == 0) throw UsageError("--workers values must be >= 1");
  }
  const auto selected = select(cfg);
  if (!cfg.trace_dir.empty()) std::filesystem::create_directories(cfg.trace_dir);

  std::vector<Row> rows;
  bool failed = false;
  fmt::print(out, "{:<22} {:>7} {:>12} {:>12} {:>7}\n", "benchmark", "workers", "mean_ms", "ci99_ms", "samples");
  for (const auto& sel : selected) {
    const auto& spec = *sel.spec;
    fmt::print(out, "# {} {}\n", spec.name, param_summary(sel.params));
    for (std::size_t w : cfg.workers) {
      try {
        bench::RunOptions opts;
        opts.workers = w;
        opts.iterations = cfg.iterations;
        opts.warmup = cfg.warmup;
        opts.fast = cfg.fast;
        auto stats = bench::run_benchmark(spec, sel.params, opts);
        fmt::print(out, "{:<22} {:>7} {:>12.3f} {:>12.3f} {:>7}\n", spec.name, w, stats.mean_ms, stats.ci99_ms,
                   stats.samples_ms.size());
        rows.push_back({spec.name, w, std::move(stats), cfg.warmup});
        if (!cfg.trace_dir.empty()) {
          const auto path = std::filesystem::path(cfg.trace_dir) / fmt::format("{}-w{}.trace", spec.name, w);
          std::ofstream f(path);
          if (!f) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
          Trace trace(&f);
          trace.set_header(spec.name, {sel.params.begin(), sel.params.end()}, w);
          (void)bench::run_traced(spec, sel.params, w, cfg.fast, trace);
          fmt::print(out, "  trace {} digest={:016x}\n", path.string(), trace.digest());
        }
      } catch (const bench::ValidationError& e) {
        fmt::print(err, "validation failed: {}\n", e.what());
        failed = true;
      }
    }
  }
  if (!cfg.csv_path.empty()) write_csv(cfg.csv_path, rows);
  return failed ? exit_validation : exit_ok;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Runs the benchmark suite on the reactor runtime."};
  app.name("detreact-bench");
  app.add_option("-b,--benchmark", cfg.benchmarks, "Benchmark names, comma separated, or 'all'")->delimiter(',');
  app.add_option("-w,--workers", cfg.workers, "Worker counts, comma separated")
      ->delimiter(',')
      ->envname("DETREACT_WORKERS");
  app.add_option("-n,--iterations", cfg.iterations, "Iterations per measurement")->capture_default_str();
  app.add_option("--warmup", cfg.warmup, "Leading iterations excluded from statistics")->capture_default_str();
  app.add_flag("--fast,!--no-fast", cfg.fast, "Do not wait for physical time (default on)");
  app.add_option("-p,--param", cfg.params, "Parameter override k=v (repeatable)");
  app.add_option("--seed", cfg.seed, "Seed for benchmarks with random inputs");
  app.add_option("--csv", cfg.csv_path, "Write per-iteration and summary CSV to PATH");
  app.add_option("--trace", cfg.trace_dir, "Write one trace per benchmark and worker count to DIR");
  app.add_flag("--list", cfg.list, "List benchmarks and their default parameters");

  if (argc <= 1) {
    out << app.help();
    return exit_usage;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    fmt::print(err, "{}\n", e.what());
    out << app.help();
    return exit_usage;
  }
  if (cfg.list) {
    print_list(out);
    return exit_ok;
  }
  try {
    return execute(cfg, out, err);
  } catch (const UsageError& e) {
    fmt::print(err, "{}\n", e.what());
    out << app.help();
    return exit_usage;
  } catch (const bench::ParameterError& e) {
    fmt::print(err, "{}\n", e.what());
    return exit_usage;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return exit_validation;
  }
}

}  // namespace detreact::cli
