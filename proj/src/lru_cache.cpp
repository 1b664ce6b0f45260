#include "gwtw/lru_cache.hpp"

#include <algorithm>
#include <stdexcept>

namespace gwtw {

LruCache::LruCache(std::size_t capacity) {
  if (capacity == 0) throw std::domain_error("LruCache: capacity must be >= 1");
  slots_.resize(capacity);
  index_.reserve(capacity);
}

void LruCache::unlink(std::uint32_t slot) {
  Slot& s = slots_[slot];
  if (s.prev != kNil) slots_[s.prev].next = s.next; else head_ = s.next;
  if (s.next != kNil) slots_[s.next].prev = s.prev; else tail_ = s.prev;
  s.prev = s.next = kNil;
}

void LruCache::push_front(std::uint32_t slot) {
  Slot& s = slots_[slot];
  s.prev = kNil;
  s.next = head_;
  if (head_ != kNil) slots_[head_].prev = slot;
  head_ = slot;
  if (tail_ == kNil) tail_ = slot;
}

AccessOutcome LruCache::access(ContentId item) {
  if (auto it = index_.find(item); it != index_.end()) {
    if (it->second != head_) {
      unlink(it->second);
      push_front(it->second);
    }
    return {true, std::nullopt};
  }

  AccessOutcome outcome;
  std::uint32_t slot;
  if (used_ < slots_.size()) {
    slot = used_++;
  } else {
    slot = tail_;
    outcome.evicted = slots_[slot].item;
    index_.erase(slots_[slot].item);
    unlink(slot);
  }
  slots_[slot].item = item;
  push_front(slot);
  index_.emplace(item, slot);
  return outcome;
}

std::vector<ContentId> LruCache::entries() const {
  std::vector<ContentId> out;
  out.reserve(index_.size());
  for (auto s = head_; s != kNil; s = slots_[s].next) out.push_back(slots_[s].item);
  return out;
}

ReferenceLru::ReferenceLru(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::domain_error("ReferenceLru: capacity must be >= 1");
}

AccessOutcome ReferenceLru::access(ContentId item) {
  AccessOutcome outcome;
  for (std::size_t i = 0; i < recency_.size(); ++i) {
    if (recency_[i] == item) {
      outcome.hit = true;
      recency_.erase(recency_.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  recency_.insert(recency_.begin(), item);
  if (recency_.size() > capacity_) {
    outcome.evicted = recency_.back();
    recency_.pop_back();
  }
  return outcome;
}

}  // namespace gwtw
