#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "detreact/tag.hpp"
#include "detreact/value.hpp"

namespace detreact {

/// One executed reaction at one tag.
struct TraceRecord {
  Tag tag;
  std::string reactor;
  std::uint32_t index = 0;
  std::vector<std::pair<std::string, std::uint64_t>> effects;  // port channel, value digest
  std::vector<std::pair<std::string, Tag>> scheduled;           // action, target tag

  /// TAG=<t>.<m> RX=<reactor>.<index> FX=<port:digest,...> SCHED=<action@t.m,...>
  [[nodiscard]] std::string line() const;
};

/// "0123456789abcdef"
[[nodiscard]] std::string hex_digest(std::uint64_t digest);

/// Canonical execution record. The digest covers record lines only, so it
/// does not depend on the header (and therefore not on the worker count).
class Trace {
 public:
  Trace() = default;

  /// Records are also written as text to `text`, if given. `keep` retains
  /// them in memory.
  explicit Trace(std::ostream* text, bool keep = false) : text_(text), keep_(keep) {}

  void set_header(std::string program, std::vector<std::pair<std::string, std::int64_t>> params,
                  std::size_t workers);

  void append(const TraceRecord& record);

  [[nodiscard]] std::uint64_t digest() const noexcept { return hash_.value(); }
  [[nodiscard]] std::size_t size() const noexcept { return count_; }
  [[nodiscard]] std::span<const TraceRecord> records() const noexcept { return records_; }
  [[nodiscard]] std::string header() const;

 private:
  std::ostream* text_ = nullptr;
  bool keep_ = false;
  std::string program_;
  std::vector<std::pair<std::string, std::int64_t>> params_;
  std::size_t workers_ = 0;
  hashing::Fnv1a hash_;
  std::size_t count_ = 0;
  std::vector<TraceRecord> records_;
};

/// Digest of a list of records, as Trace would compute it.
[[nodiscard]] std::uint64_t trace_digest(std::span<const TraceRecord> records);

/// Digest of a trace text file (header lines starting with '#' are skipped).
[[nodiscard]] std::uint64_t trace_digest_of_text(std::istream& in);

}  // namespace detreact
