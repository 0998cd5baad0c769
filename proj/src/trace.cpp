#include "detreact/trace.hpp"

#include <fmt/format.h>

#include <istream>
#include <ostream>

namespace detreact {

std::string hex_digest(std::uint64_t digest) { return fmt::format("{:016x}", digest); }

std::string TraceRecord::line() const {
  std::string out = fmt::format("TAG={}.{} RX={}.{} FX=", tag.time.count(), tag.microstep,
                                reactor, index);
  for (std::size_t i = 0; i < effects.size(); ++i) {
    if (i != 0) out += ',';
    out += effects[i].first;
    out += ':';
    out += hex_digest(effects[i].second);
  }
  out += " SCHED=";
  for (std::size_t i = 0; i < scheduled.size(); ++i) {
    if (i != 0) out += ',';
    out += fmt::format("{}@{}.{}", scheduled[i].first, scheduled[i].second.time.count(),
                       scheduled[i].second.microstep);
  }
  return out;
}

void Trace::set_header(std::string program,
                       std::vector<std::pair<std::string, std::int64_t>> params,
                       std::size_t workers) {
  program_ = std::move(program);
  params_ = std::move(params);
  workers_ = workers;
  if (text_ != nullptr) *text_ << header();
}

std::string Trace::header() const {
  std::string out = fmt::format("# program={} workers={}\n", program_, workers_);
  for (const auto& [k, v] : params_) out += fmt::format("# param {}={}\n", k, v);
  return out;
}

void Trace::append(const TraceRecord& record) {
  const std::string text = record.line();
  hash_.update(text);
  hash_.update("\n");
  ++count_;
  if (text_ != nullptr) *text_ << text << '\n';
  if (keep_) records_.push_back(record);
}

std::uint64_t trace_digest(std::span<const TraceRecord> records) {
  hashing::Fnv1a h;
  for (const auto& r : records) {
    h.update(r.line());
    h.update("\n");
  }
  return h.value();
}

std::uint64_t trace_digest_of_text(std::istream& in) {
  hashing::Fnv1a h;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.front() == '#') continue;
    h.update(line);
    h.update("\n");
  }
  return h.value();
}

}  // namespace detreact
