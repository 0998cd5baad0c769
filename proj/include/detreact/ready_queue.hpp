#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "detreact/ids.hpp"

namespace detreact {

/// Fixed-capacity buffer plus an atomic counter. pop() decrements the
/// counter; a negative result means empty, otherwise it is the slot to
/// read. fill() must only run while no reaction from the previous fill is
/// still being read.
class ReadyQueue {
 public:
  explicit ReadyQueue(std::size_t capacity) : buffer_(capacity) {}

  [[nodiscard]] std::size_t capacity() const noexcept { return buffer_.size(); }

  void fill(std::span<const ReactionId> items) {
    std::copy(items.begin(), items.end(), buffer_.begin());
    counter_.store(static_cast<std::ptrdiff_t>(items.size()), std::memory_order_release);
  }

  [[nodiscard]] std::optional<ReactionId> pop() noexcept {
    const std::ptrdiff_t i = counter_.fetch_sub(1, std::memory_order_acq_rel) - 1;
    if (i < 0) return std::nullopt;
    return buffer_[static_cast<std::size_t>(i)];
  }

  /// Items not yet popped; racy while pops are in flight.
  [[nodiscard]] std::size_t available() const noexcept {
    const auto c = counter_.load(std::memory_order_acquire);
    return c > 0 ? static_cast<std::size_t>(c) : 0;
  }

 private:
  std::vector<ReactionId> buffer_;
  std::atomic<std::ptrdiff_t> counter_{0};
};

}  // namespace detreact
