#include <algorithm>
#include <stdexcept>

#include "detreact/event_queue.hpp"
#include "detreact/reaction_queue.hpp"

namespace detreact {

ReactionQueue::ReactionQueue(const Apg& apg)
    : level_(apg.levels().begin(), apg.levels().end()),
      queued_(std::make_unique<std::atomic<bool>[]>(apg.size())),
      buckets_(apg.level_count()) {
  for (std::size_t l = 0; l < buckets_.size(); ++l) {
    buckets_[l].items = std::make_unique<ReactionId[]>(apg.at_level(l).size());
  }
}

void ReactionQueue::take(std::size_t level, std::vector<ReactionId>& out) {
  auto& b = buckets_[level];
  const auto n = b.size.load(std::memory_order_relaxed);
  out.assign(b.items.get(), b.items.get() + n);
  std::sort(out.begin(), out.end());
  for (ReactionId r : out) queued_[r.index()].store(false, std::memory_order_relaxed);
  b.size.store(0, std::memory_order_relaxed);
}

void EventQueue::push(const Tag& tag, TriggerKey key, Value value) {
  auto& bucket = events_[tag];
  for (auto& e : bucket) {
    if (e.key == key) {
      e.value = std::move(value);
      return;
    }
  }
  bucket.push_back(Event{key, std::move(value)});
  ++count_;
}

std::optional<Tag> EventQueue::next_tag() const {
  if (events_.empty()) return std::nullopt;
  return events_.begin()->first;
}

const std::vector<Event>* EventQueue::at(const Tag& tag) const {
  auto it = events_.find(tag);
  return it == events_.end() ? nullptr : &it->second;
}

std::pair<Tag, std::vector<Event>> EventQueue::pop() {
  if (events_.empty()) throw std::logic_error("pop from empty event queue");
  auto node = events_.extract(events_.begin());
  count_ -= node.mapped().size();
  return {node.key(), std::move(node.mapped())};
}

void EventQueue::clear() noexcept {
  events_.clear();
  count_ = 0;
}

}  // namespace detreact
