#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "catalog.hpp"
#include "detreact/bench/lcg.hpp"
#include "detreact/patterns.hpp"

namespace detreact::bench::detail {

namespace {

using Int = std::int64_t;
using Pair = std::pair<Int, Int>;

std::uint32_t width_of(Int n) { return static_cast<std::uint32_t>(n); }

// -- Trapezoidal Approximation ------------------------------------------------------------

double integrand(double x) { return std::exp(x) * std::sin(x); }

/// Closed form of the integral of e^x sin x over [0, 1].
double integral_exact() {
  return std::numbers::e * (std::sin(1.0) - std::cos(1.0)) / 2.0 + 0.5;
}

constexpr double kTrapezoidTolerance = 1e-6;

Instance trapezoid(const Params& p) {
  const Int pieces = param(p, "pieces", 1, Int{1} << 40);
  const Int n = param(p, "workers", 1, 4096);
  auto area = std::make_shared<double>(0.0);
  struct Worker {
    Input<Pair> range;
    Output<double> partial;
  };
  Topology t = build_topology([&](Builder& b) {
    auto master = b.reactor("master");
    auto assign = master.output<Pair>("assign", width_of(n));
    auto results = master.input<double>("result", width_of(n));
    master.reaction("distribute").triggered_by(startup).effects(assign).body([=](ReactionContext& ctx) {
      for (Int w = 0; w < n; ++w) {
        ctx.set(assign, static_cast<std::uint32_t>(w), Pair{pieces * w / n, pieces * (w + 1) / n});
      }
    });
    master.reaction("collect").triggered_by(results).body([=](ReactionContext& ctx) {
      for (const auto& [w, part] : ctx.present(results)) *area += part;
    });
    auto workers = b.bank("worker", static_cast<std::size_t>(n), [&](ReactorBuilder& r) {
      auto range = r.input<Pair>("range");
      auto partial = r.output<double>("partial");
      r.reaction("integrate").triggered_by(range).effects(partial).body([=](ReactionContext& ctx) {
        const auto [lo, hi] = *ctx.get(range);
        const double h = 1.0 / static_cast<double>(pieces);
        double sum = 0.0;
        for (Int k = lo; k < hi; ++k) {
          const double x0 = static_cast<double>(k) * h;
          const double x1 = static_cast<double>(k + 1) * h;
          sum += (integrand(x0) + integrand(x1)) * 0.5 * h;
        }
        ctx.set(partial, sum);
      });
      return Worker{range, partial};
    });
    connect(b, {ports(assign)}, {ports(workers, &Worker::range)});
    connect(b, {ports(workers, &Worker::partial)}, {ports(results)});
  });
  return {std::move(t), [area](const TerminationReport&) -> std::optional<std::string> {
            const double err = std::abs(*area - integral_exact());
            if (err < kTrapezoidTolerance) return std::nullopt;
            return fmt::format("area {:.12f} differs from {:.12f} by {:.3g}", *area, integral_exact(), err);
          }};
}

// -- Pi Precision ---------------------------------------------------------------------------

/// k-th term of the Bailey-Borwein-Plouffe series.
double bbp_term(Int k) {
  const auto k8 = 8.0 * static_cast<double>(k);
  return std::pow(16.0, -static_cast<double>(k)) *
         (4.0 / (k8 + 1.0) - 2.0 / (k8 + 4.0) - 1.0 / (k8 + 5.0) - 1.0 / (k8 + 6.0));
}

constexpr double kPiTolerance = 1e-12;

Instance pi_precision(const Params& p) {
  const Int n = param(p, "workers", 1, 4096);
  const Int terms = param(p, "terms", 11);
  struct State {
    double pi = 0.0;
    Int next = 0;
    Int received = 0;
  };
  auto st = std::make_shared<State>();
  struct Worker {
    Input<Int> index;
    Output<double> term;
  };
  Topology t = build_topology([&](Builder& b) {
    auto master = b.reactor("master");
    auto work = master.output<Int>("work", width_of(n));
    auto results = master.input<double>("term", width_of(n));
    auto round = master.logical_action<Int>("round");
    master.reaction("dispatch").triggered_by(startup, round).effects(work).body([=](ReactionContext& ctx) {
      for (Int w = 0; w < n && st->next + w < terms; ++w) {
        ctx.set(work, static_cast<std::uint32_t>(w), st->next + w);
      }
    });
    master.reaction("accumulate").triggered_by(results).effects(round).body([=](ReactionContext& ctx) {
      for (const auto& [w, term] : ctx.present(results)) {
        st->pi += term;
        ++st->received;
      }
      st->next += n;
      if (st->next < terms) ctx.schedule(round, Int{0});
    });
    auto workers = b.bank("worker", static_cast<std::size_t>(n), [&](ReactorBuilder& r) {
      auto index = r.input<Int>("index");
      auto term = r.output<double>("term");
      r.reaction("compute").triggered_by(index).effects(term).body(
          [=](ReactionContext& ctx) { ctx.set(term, bbp_term(*ctx.get(index))); });
      return Worker{index, term};
    });
    connect(b, {ports(work)}, {ports(workers, &Worker::index)});
    connect(b, {ports(workers, &Worker::term)}, {ports(results)});
  });
  return {std::move(t), [st, terms](const TerminationReport&) -> std::optional<std::string> {
            if (auto e = check(st->received == terms, "terms summed", st->received, terms)) return e;
            const double err = std::abs(st->pi - std::numbers::pi);
            if (err < kPiTolerance) return std::nullopt;
            return fmt::format("pi {:.17f} off by {:.3g}", st->pi, err);
          }};
}

// -- Radix Sort -------------------------------------------------------------------------------

constexpr Int kEndOfStream = -1;

Instance radix_sort(const Params& p) {
  const Int count = param(p, "values");
  const Int bits = param(p, "bits", 1, 62);
  const auto seed = static_cast<std::uint64_t>(param(p, "seed", 0));
  auto input = std::make_shared<std::vector<Int>>();
  {
    Lcg rng(seed);
    for (Int k = 0; k < count; ++k) {
      const std::uint64_t v = (rng.next() << 32 | rng.next()) & ((std::uint64_t{1} << bits) - 1);
      input->push_back(static_cast<Int>(v));
    }
  }
  auto output = std::make_shared<std::vector<Int>>();
  auto ended = std::make_shared<bool>(false);
  struct Stage {
    Input<Int> in;
    Output<Int> out;
  };
  Topology t = build_topology([&](Builder& b) {
    auto src = b.reactor("source");
    auto src_out = src.output<Int>("out");
    auto next = src.logical_action<Int>("next");
    src.reaction("emit").triggered_by(startup, next).effects(src_out, next).body([=](ReactionContext& ctx) {
      const Int k = ctx.is_present(next) ? *ctx.get(next) : 0;
      if (k == static_cast<Int>(input->size())) {
        ctx.set(src_out, kEndOfStream);
        return;
      }
      ctx.set(src_out, (*input)[static_cast<std::size_t>(k)]);
      ctx.schedule(next, k + 1);
    });
    // Stage b passes values with bit b clear at once and holds the rest
    // until the stream ends, which keeps each pass stable.
    auto stages = b.bank("stage", static_cast<std::size_t>(bits), [&](ReactorBuilder& r) {
      const auto bit = static_cast<Int>(*r.bank_index());
      auto in = r.input<Int>("in");
      auto out = r.output<Int>("out");
      auto flush = r.logical_action<Int>("flush");
      auto held = std::make_shared<std::vector<Int>>();
      auto cursor = std::make_shared<std::size_t>(0);
      r.reaction("flush").triggered_by(flush).effects(out, flush).body([=](ReactionContext& ctx) {
        if (*cursor == held->size()) {
          ctx.set(out, kEndOfStream);
          return;
        }
        ctx.set(out, (*held)[(*cursor)++]);
        ctx.schedule(flush, Int{0});
      });
      r.reaction("sort").triggered_by(in).effects(out, flush).body([=](ReactionContext& ctx) {
        const Int v = *ctx.get(in);
        if (v == kEndOfStream) {
          ctx.schedule(flush, Int{0});
        } else if (((v >> bit) & 1) == 0) {
          ctx.set(out, v);
        } else {
          held->push_back(v);
        }
      });
      return Stage{in, out};
    });
    auto sink = b.reactor("sink");
    auto sink_in = sink.input<Int>("in");
    sink.reaction("collect").triggered_by(sink_in).body([=](ReactionContext& ctx) {
      const Int v = *ctx.get(sink_in);
      if (v == kEndOfStream) {
        *ended = true;
      } else {
        output->push_back(v);
      }
    });
    connect(b, {ports(src_out), ports(stages, &Stage::out)}, {ports(stages, &Stage::in), ports(sink_in)});
  });
  return {std::move(t), [input, output, ended](const TerminationReport&) -> std::optional<std::string> {
            if (!*ended) return std::string("end of stream never reached the sink");
            if (!std::is_sorted(output->begin(), output->end())) return std::string("output is not sorted");
            auto expected = *input;
            std::sort(expected.begin(), expected.end());
            if (*output != expected) return std::string("output is not a permutation of the input");
            return std::nullopt;
          }};
}

// -- Filter Bank ------------------------------------------------------------------------------

struct FilterCoefficients {
  std::vector<std::vector<double>> analysis;
  std::vector<std::vector<double>> synthesis;
};

FilterCoefficients filter_coefficients(Int branches, Int taps) {
  FilterCoefficients c;
  for (Int b = 0; b < branches; ++b) {
    std::vector<double> h;
    std::vector<double> f;
    for (Int t = 0; t < taps; ++t) {
      const double phase = std::numbers::pi * (static_cast<double>(b) + 0.5) *
                           (static_cast<double>(t) - static_cast<double>(taps - 1) / 2.0) /
                           static_cast<double>(branches);
      h.push_back(std::cos(phase) / static_cast<double>(taps));
      f.push_back(std::cos(phase) * static_cast<double>(branches) / static_cast<double>(taps));
    }
    c.analysis.push_back(std::move(h));
    c.synthesis.push_back(std::move(f));
  }
  return c;
}

double filter_input(Int k) {
  const auto x = static_cast<double>(k);
  return std::sin(0.05 * x) + 0.5 * std::cos(0.31 * x) + 0.25 * std::sin(1.7 * x);
}

/// Direct-form FIR over a history of the most recent inputs, newest last.
class Fir {
 public:
  explicit Fir(const std::vector<double>& coeffs) : coeffs_(coeffs), history_(coeffs.size(), 0.0) {}
  double push(double x) {
    history_[pos_] = x;
    double y = 0.0;
    const std::size_t n = coeffs_.size();
    for (std::size_t t = 0; t < n; ++t) y += coeffs_[t] * history_[(pos_ + n - t) % n];
    pos_ = (pos_ + 1) % n;
    return y;
  }

 private:
  std::vector<double> coeffs_;
  std::vector<double> history_;
  std::size_t pos_ = 0;
};

constexpr double kFilterTolerance = 1e-9;

Instance filter_bank(const Params& p) {
  const Int samples = param(p, "samples");
  const Int branches = param(p, "branches", 1, 1024);
  const Int taps = param(p, "taps");
  const auto coeffs = std::make_shared<FilterCoefficients>(filter_coefficients(branches, taps));
  auto output = std::make_shared<std::vector<double>>();
  struct Branch {
    Input<double> in;
    Output<double> out;
  };
  Topology t = build_topology([&](Builder& b) {
    auto src = b.reactor("source");
    auto out = src.output<double>("out");
    auto next = src.logical_action<Int>("next");
    src.reaction("emit").triggered_by(startup, next).effects(out, next).body([=](ReactionContext& ctx) {
      const Int k = ctx.is_present(next) ? *ctx.get(next) : 0;
      ctx.set(out, filter_input(k));
      if (k + 1 < samples) ctx.schedule(next, k + 1);
    });
    // Analysis filter followed by decimation by the branch count.
    auto analysis = b.bank("analysis", static_cast<std::size_t>(branches), [&](ReactorBuilder& r) {
      auto fir = std::make_shared<Fir>(coeffs->analysis[*r.bank_index()]);
      auto count = std::make_shared<Int>(0);
      auto in = r.input<double>("in");
      auto res = r.output<double>("out");
      r.reaction("filter").triggered_by(in).effects(res).body([=](ReactionContext& ctx) {
        const double y = fir->push(*ctx.get(in));
        ctx.set(res, (*count)++ % branches == 0 ? y : 0.0);
      });
      return Branch{in, res};
    });
    auto synthesis = b.bank("synthesis", static_cast<std::size_t>(branches), [&](ReactorBuilder& r) {
      auto fir = std::make_shared<Fir>(coeffs->synthesis[*r.bank_index()]);
      auto in = r.input<double>("in");
      auto res = r.output<double>("out");
      r.reaction("filter").triggered_by(in).effects(res).body(
          [=](ReactionContext& ctx) { ctx.set(res, fir->push(*ctx.get(in))); });
      return Branch{in, res};
    });
    auto combine = b.reactor("combine");
    auto parts = combine.input<double>("in", width_of(branches));
    combine.reaction("sum").triggered_by(parts).body([=](ReactionContext& ctx) {
      double y = 0.0;
      for (const auto& [j, v] : ctx.present(parts)) y += v;
      output->push_back(y);
    });
    connect(b, {ports(out)}, {ports(analysis, &Branch::in)}, true);
    connect(b, {ports(analysis, &Branch::out)}, {ports(synthesis, &Branch::in)});
    connect(b, {ports(synthesis, &Branch::out)}, {ports(parts)});
  });
  return {std::move(t), [output, coeffs, samples, branches, taps](const TerminationReport&)
                            -> std::optional<std::string> {
            if (auto e = check(static_cast<Int>(output->size()) == samples, "output samples",
                               static_cast<Int>(output->size()), samples)) {
              return e;
            }
            // Direct convolution over the whole signal.
            std::vector<double> x;
            for (Int k = 0; k < samples; ++k) x.push_back(filter_input(k));
            for (Int k = 0; k < samples; ++k) {
              double y = 0.0;
              for (Int br = 0; br < branches; ++br) {
                const auto& h = coeffs->analysis[static_cast<std::size_t>(br)];
                const auto& f = coeffs->synthesis[static_cast<std::size_t>(br)];
                double v = 0.0;
                for (Int s = 0; s < taps && s <= k; ++s) {
                  const Int m = k - s;
                  if (m % branches != 0) continue;
                  double u = 0.0;
                  for (Int q = 0; q < taps && q <= m; ++q) {
                    u += h[static_cast<std::size_t>(q)] * x[static_cast<std::size_t>(m - q)];
                  }
                  v += f[static_cast<std::size_t>(s)] * u;
                }
                y += v;
              }
              const double got = (*output)[static_cast<std::size_t>(k)];
              if (std::abs(got - y) > kFilterTolerance * (1.0 + std::abs(y))) {
                return fmt::format("sample {}: got {:.15g}, expected {:.15g}", k, got, y);
              }
            }
            return std::nullopt;
          }};
}

}  // namespace

std::vector<BenchmarkSpec> parallelism_benchmarks() {
  return {
      {"Trapezoid", Group::parallelism, "workers integrate slices of a smooth function",
       {{"pieces", 1'000'000}, {"workers", 100}}, trapezoid},
      {"PiPrecision", Group::parallelism, "workers evaluate terms of a series for pi",
       {{"workers", 20}, {"terms", 2000}}, pi_precision},
      {"RadixSort", Group::parallelism, "a pipeline of one-bit stable partition stages",
       {{"values", 5000}, {"bits", 16}, {"seed", 42}}, radix_sort},
      {"FilterBank", Group::parallelism, "parallel analysis and synthesis filter branches",
       {{"samples", 1024}, {"branches", 8}, {"taps", 32}}, filter_bank},
  };
}

}  // namespace detreact::bench::detail
