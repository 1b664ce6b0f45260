#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "gwtw/distributions.hpp"

namespace gwtw {

struct AccessOutcome {
  bool hit = false;
  std::optional<ContentId> evicted;  // set only on a miss into a full cache

  friend bool operator==(const AccessOutcome&, const AccessOutcome&) = default;
};

/// Fixed-capacity LRU set of content ids. O(1) access: an index-linked
/// recency list over a slot array plus a hash index. Starts empty.
class LruCache {
 public:
  explicit LruCache(std::size_t capacity);

  AccessOutcome access(ContentId item);

  bool contains(ContentId item) const { return index_.contains(item); }
  std::size_t size() const noexcept { return index_.size(); }
  std::size_t capacity() const noexcept { return slots_.size(); }

  /// Resident ids, most recent first.
  std::vector<ContentId> entries() const;

 private:
  static constexpr std::uint32_t kNil = UINT32_MAX;

  struct Slot {
    ContentId item = 0;
    std::uint32_t prev = kNil;  // toward head (more recent)
    std::uint32_t next = kNil;  // toward tail (less recent)
  };

  void unlink(std::uint32_t slot);
  void push_front(std::uint32_t slot);

  std::vector<Slot> slots_;
  std::unordered_map<ContentId, std::uint32_t> index_;
  std::uint32_t head_ = kNil;
  std::uint32_t tail_ = kNil;
  std::uint32_t used_ = 0;
};

/// Brute-force LRU used as a test oracle: a plain recency vector rescanned
/// on every access.
class ReferenceLru {
 public:
  explicit ReferenceLru(std::size_t capacity);

  AccessOutcome access(ContentId item);

  std::size_t size() const noexcept { return recency_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }
  const std::vector<ContentId>& entries() const noexcept { return recency_; }

 private:
  std::size_t capacity_;
  std::vector<ContentId> recency_;  // most recent first
};

}  // namespace gwtw
