#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "detreact/graph.hpp"

namespace detreact {

/// Reactions triggered at the current tag, bucketed by APG level. push()
/// may run concurrently from several workers; take() only from the
/// scheduler while workers are quiescent.
class ReactionQueue {
 public:
  explicit ReactionQueue(const Apg& apg);

  /// Stages `r`; returns false if it was already staged at this tag.
  bool push(ReactionId r) noexcept {
    if (queued_[r.index()].exchange(true, std::memory_order_relaxed)) return false;
    auto& b = buckets_[level_[r.index()]];
    const auto slot = b.size.fetch_add(1, std::memory_order_relaxed);
    b.items[slot] = r;
    return true;
  }

  [[nodiscard]] std::size_t levels() const noexcept { return buckets_.size(); }

  [[nodiscard]] std::size_t size(std::size_t level) const noexcept {
    return buckets_[level].size.load(std::memory_order_relaxed);
  }

  /// Empties bucket `level` into `out`, sorted by reaction id, and makes
  /// those reactions stageable again.
  void take(std::size_t level, std::vector<ReactionId>& out);

 private:
  struct Bucket {
    std::unique_ptr<ReactionId[]> items;
    std::atomic<std::size_t> size{0};
  };

  std::vector<std::uint32_t> level_;
  std::unique_ptr<std::atomic<bool>[]> queued_;
  std::vector<Bucket> buckets_;
};

}  // namespace detreact
