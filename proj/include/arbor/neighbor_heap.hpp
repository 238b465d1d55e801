#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "arbor/common.hpp"

namespace arbor {

using Key = std::uint32_t;

/// Stable reference to one element of a NeighborHeap. A handle is never
/// reused: once its element is erased every operation on it reports
/// STALE_HANDLE, even if the same id is inserted again.
class HeapHandle {
 public:
  HeapHandle() = default;

  bool valid() const noexcept { return slot_ != kNil; }

  friend bool operator==(const HeapHandle&, const HeapHandle&) = default;

 private:
  friend class NeighborHeap;
  static constexpr std::uint32_t kNil = std::numeric_limits<std::uint32_t>::max();

  HeapHandle(std::uint32_t slot, std::uint32_t generation) : slot_(slot), generation_(generation) {}

  std::uint32_t slot_ = kNil;
  std::uint32_t generation_ = 0;
};

/// Key-bucketed set with a distinguished center whose key is k0.
///
/// Buckets for keys 0..k0+1 are reachable through a direct-indexed array;
/// nonempty buckets for keys >= k0+2 form an ascending doubly linked list so
/// that the largest key sits at the tail. Element and bucket motion are
/// splices, giving O(1) worst case for everything except the two center
/// operations, which move at most one bucket between the regions and resize
/// the array by one slot.
///
/// The center itself is not stored as an element; only its key is tracked.
class NeighborHeap {
 public:
  explicit NeighborHeap(Vertex center = kNoVertex, Key center_key = 0);

  Vertex center() const noexcept { return center_; }
  Key center_key() const noexcept { return center_key_; }
  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  /// Requires key <= k0 + 1. The payload is opaque caller data.
  HeapHandle insert(Vertex id, Key key, std::uint32_t payload = 0);
  void erase(HeapHandle h);
  void increment(HeapHandle h);
  void decrement(HeapHandle h);
  void increment_center();
  void decrement_center();

  /// An element of maximum key among those with key >= k0 + 2, if any.
  std::optional<HeapHandle> report_max() const;
  /// An element of maximum key among those with key >= k0 + 1, if any. The
  /// extra slot k0+1 is one array read, so this stays O(1).
  std::optional<HeapHandle> report_max_above_center() const;

  bool contains(HeapHandle h) const noexcept;
  Key key(HeapHandle h) const;
  Vertex id(HeapHandle h) const;
  std::uint32_t payload(HeapHandle h) const;
  std::optional<HeapHandle> find(Vertex id) const;

  template <typename F>
  void for_each(F&& f) const {
    for (const auto& e : elements_) {
      if (e.live) f(e.id, e.key);
    }
  }

  /// Human-readable descriptions of every broken structural invariant.
  std::vector<std::string> check_structure() const;

  /// Live buckets plus array slots; bounded by size() + k0 + 2.
  std::size_t bucket_slots() const noexcept { return live_buckets_ + low_.size(); }
  std::size_t low_slot_count() const noexcept { return low_.size(); }
  /// Nonempty buckets for keys >= k0 + 2.
  std::size_t high_bucket_count() const noexcept;
  /// Number of single-bucket element moves performed so far.
  std::uint64_t element_moves() const noexcept { return element_moves_; }

 private:
  static constexpr std::uint32_t kNil = HeapHandle::kNil;

  struct Element {
    Vertex id = kNoVertex;
    Key key = 0;
    std::uint32_t payload = 0;
    std::uint32_t bucket = kNil;
    std::uint32_t prev = kNil;
    std::uint32_t next = kNil;
    std::uint32_t generation = 0;
    bool live = false;
  };

  struct Bucket {
    Key key = 0;
    std::uint32_t first = kNil;
    std::uint32_t size = 0;
    std::uint32_t prev = kNil;  // high-list links
    std::uint32_t next = kNil;
    bool high = false;
  };

  std::uint32_t resolve(HeapHandle h) const;
  std::uint32_t acquire_bucket(Key key);
  void release_bucket(std::uint32_t b);
  std::uint32_t low_bucket(Key key);
  void link(std::uint32_t b, std::uint32_t e);
  void unlink(std::uint32_t e);
  void drop_if_empty(std::uint32_t b);
  void high_insert_before(std::uint32_t b, std::uint32_t before);
  void high_insert_after(std::uint32_t b, std::uint32_t after);
  void high_unlink(std::uint32_t b);
  void move_to(std::uint32_t e, std::uint32_t dst);
  HeapHandle handle_of(std::uint32_t e) const { return {e, elements_[e].generation}; }

  Vertex center_;
  Key center_key_;
  std::size_t size_ = 0;
  std::size_t live_buckets_ = 0;
  std::uint64_t element_moves_ = 0;

  std::vector<Element> elements_;
  std::vector<std::uint32_t> free_elements_;
  std::vector<Bucket> buckets_;
  std::vector<std::uint32_t> free_buckets_;
  std::vector<std::uint32_t> low_;  // k0 + 2 slots, kNil when empty
  std::uint32_t high_head_ = kNil;
  std::uint32_t high_tail_ = kNil;
  std::unordered_map<Vertex, std::uint32_t> index_;
};

}  // namespace arbor
