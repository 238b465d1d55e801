#include "arbor/neighbor_heap.hpp"

namespace arbor {

NeighborHeap::NeighborHeap(Vertex center, Key center_key)
    : center_(center), center_key_(center_key), low_(static_cast<std::size_t>(center_key) + 2, kNil) {}

std::uint32_t NeighborHeap::resolve(HeapHandle h) const {
  if (!contains(h)) throw Error(ErrorCode::stale_handle, "handle does not refer to a live element");
  return h.slot_;
}

bool NeighborHeap::contains(HeapHandle h) const noexcept {
  return h.slot_ < elements_.size() && elements_[h.slot_].live &&
         elements_[h.slot_].generation == h.generation_;
}

Key NeighborHeap::key(HeapHandle h) const { return elements_[resolve(h)].key; }
Vertex NeighborHeap::id(HeapHandle h) const { return elements_[resolve(h)].id; }
std::uint32_t NeighborHeap::payload(HeapHandle h) const { return elements_[resolve(h)].payload; }

std::optional<HeapHandle> NeighborHeap::find(Vertex id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return handle_of(it->second);
}

std::uint32_t NeighborHeap::acquire_bucket(Key key) {
  std::uint32_t b;
  if (!free_buckets_.empty()) {
    b = free_buckets_.back();
    free_buckets_.pop_back();
    buckets_[b] = Bucket{};
  } else {
    b = static_cast<std::uint32_t>(buckets_.size());
    buckets_.emplace_back();
  }
  buckets_[b].key = key;
  ++live_buckets_;
  return b;
}

void NeighborHeap::release_bucket(std::uint32_t b) {
  free_buckets_.push_back(b);
  --live_buckets_;
}

std::uint32_t NeighborHeap::low_bucket(Key key) {
  auto& slot = low_[key];
  if (slot == kNil) slot = acquire_bucket(key);
  return slot;
}

void NeighborHeap::link(std::uint32_t b, std::uint32_t e) {
  auto& bucket = buckets_[b];
  auto& el = elements_[e];
  el.bucket = b;
  el.prev = kNil;
  el.next = bucket.first;
  if (bucket.first != kNil) elements_[bucket.first].prev = e;
  bucket.first = e;
  ++bucket.size;
}

void NeighborHeap::unlink(std::uint32_t e) {
  auto& el = elements_[e];
  auto& bucket = buckets_[el.bucket];
  if (el.prev != kNil) {
    elements_[el.prev].next = el.next;
  } else {
    bucket.first = el.next;
  }
  if (el.next != kNil) elements_[el.next].prev = el.prev;
  --bucket.size;
  el.prev = el.next = kNil;
}

void NeighborHeap::drop_if_empty(std::uint32_t b) {
  auto& bucket = buckets_[b];
  if (bucket.size != 0) return;
  if (bucket.high) {
    high_unlink(b);
  } else {
    low_[bucket.key] = kNil;
  }
  release_bucket(b);
}

void NeighborHeap::high_insert_before(std::uint32_t b, std::uint32_t before) {
  auto& bucket = buckets_[b];
  bucket.high = true;
  bucket.next = before;
  bucket.prev = before == kNil ? high_tail_ : buckets_[before].prev;
  if (bucket.prev != kNil) {
    buckets_[bucket.prev].next = b;
  } else {
    high_head_ = b;
  }
  if (before != kNil) {
    buckets_[before].prev = b;
  } else {
    high_tail_ = b;
  }
}

void NeighborHeap::high_insert_after(std::uint32_t b, std::uint32_t after) {
  high_insert_before(b, buckets_[after].next);
}

void NeighborHeap::high_unlink(std::uint32_t b) {
  auto& bucket = buckets_[b];
  if (bucket.prev != kNil) {
    buckets_[bucket.prev].next = bucket.next;
  } else {
    high_head_ = bucket.next;
  }
  if (bucket.next != kNil) {
    buckets_[bucket.next].prev = bucket.prev;
  } else {
    high_tail_ = bucket.prev;
  }
  bucket.prev = bucket.next = kNil;
  bucket.high = false;
}

void NeighborHeap::move_to(std::uint32_t e, std::uint32_t dst) {
  const std::uint32_t src = elements_[e].bucket;
  unlink(e);
  link(dst, e);
  elements_[e].key = buckets_[dst].key;
  drop_if_empty(src);
  ++element_moves_;
}

HeapHandle NeighborHeap::insert(Vertex id, Key key, std::uint32_t payload) {
  if (key > center_key_ + 1) {
    throw Error(ErrorCode::key_too_high, "insert key " + std::to_string(key) + " exceeds center key + 1");
  }
  if (index_.contains(id)) throw Error(ErrorCode::duplicate_id, "id " + std::to_string(id) + " already present");
  std::uint32_t e;
  if (!free_elements_.empty()) {
    e = free_elements_.back();
    free_elements_.pop_back();
  } else {
    e = static_cast<std::uint32_t>(elements_.size());
    elements_.emplace_back();
  }
  auto& el = elements_[e];
  el.id = id;
  el.key = key;
  el.payload = payload;
  el.live = true;
  link(low_bucket(key), e);
  index_.emplace(id, e);
  ++size_;
  return handle_of(e);
}

void NeighborHeap::erase(HeapHandle h) {
  const std::uint32_t e = resolve(h);
  const std::uint32_t b = elements_[e].bucket;
  unlink(e);
  drop_if_empty(b);
  auto& el = elements_[e];
  index_.erase(el.id);
  el.live = false;
  el.bucket = kNil;
  ++el.generation;
  free_elements_.push_back(e);
  --size_;
}

void NeighborHeap::increment(HeapHandle h) {
  const std::uint32_t e = resolve(h);
  const std::uint32_t src = elements_[e].bucket;
  const Key next_key = elements_[e].key + 1;
  std::uint32_t dst;
  if (next_key <= center_key_ + 1) {
    dst = low_bucket(next_key);
  } else if (buckets_[src].high) {
    const std::uint32_t nb = buckets_[src].next;
    if (nb != kNil && buckets_[nb].key == next_key) {
      dst = nb;
    } else {
      dst = acquire_bucket(next_key);
      high_insert_after(dst, src);
    }
  } else {
    // crossing from slot k0+1 into the high region
    if (high_head_ != kNil && buckets_[high_head_].key == next_key) {
      dst = high_head_;
    } else {
      dst = acquire_bucket(next_key);
      high_insert_before(dst, high_head_);
    }
  }
  move_to(e, dst);
}

void NeighborHeap::decrement(HeapHandle h) {
  const std::uint32_t e = resolve(h);
  if (elements_[e].key == 0) throw Error(ErrorCode::decrement_below_zero, "key is already 0");
  const std::uint32_t src = elements_[e].bucket;
  const Key next_key = elements_[e].key - 1;
  std::uint32_t dst;
  if (next_key <= center_key_ + 1) {
    dst = low_bucket(next_key);
  } else {
    const std::uint32_t pb = buckets_[src].prev;
    if (pb != kNil && buckets_[pb].key == next_key) {
      dst = pb;
    } else {
      dst = acquire_bucket(next_key);
      high_insert_before(dst, src);
    }
  }
  move_to(e, dst);
}

void NeighborHeap::increment_center() {
  ++center_key_;
  low_.push_back(kNil);
  // the smallest high bucket may now have key k0+1
  if (high_head_ != kNil && buckets_[high_head_].key == center_key_ + 1) {
    const std::uint32_t b = high_head_;
    high_unlink(b);
    low_[center_key_ + 1] = b;
  }
}

void NeighborHeap::decrement_center() {
  if (center_key_ == 0) throw Error(ErrorCode::center_below_zero, "center key is already 0");
  const std::uint32_t b = low_.back();
  low_.pop_back();
  --center_key_;
  if (b != kNil) high_insert_before(b, high_head_);
}

std::optional<HeapHandle> NeighborHeap::report_max() const {
  if (high_tail_ == kNil) return std::nullopt;
  return handle_of(buckets_[high_tail_].first);
}

std::optional<HeapHandle> NeighborHeap::report_max_above_center() const {
  if (high_tail_ != kNil) return handle_of(buckets_[high_tail_].first);
  const std::uint32_t b = low_[center_key_ + 1];
  if (b == kNil) return std::nullopt;
  return handle_of(buckets_[b].first);
}

std::vector<std::string> NeighborHeap::check_structure() const {
  std::vector<std::string> issues;
  auto fail = [&](std::string msg) { issues.push_back("heap " + std::to_string(center_) + ": " + std::move(msg)); };

  if (low_.size() != static_cast<std::size_t>(center_key_) + 2) fail("low slot count != k0+2");

  std::size_t counted = 0;
  auto walk_bucket = [&](std::uint32_t b) {
    std::uint32_t n = 0;
    std::uint32_t prev = kNil;
    for (std::uint32_t e = buckets_[b].first; e != kNil; e = elements_[e].next) {
      const auto& el = elements_[e];
      if (!el.live) fail("dead element linked in bucket");
      if (el.bucket != b) fail("element bucket link mismatch");
      if (el.key != buckets_[b].key) fail("element key differs from bucket key");
      if (el.prev != prev) fail("broken element back link");
      prev = e;
      ++n;
    }
    if (n != buckets_[b].size) fail("bucket size mismatch");
    if (n == 0) fail("empty bucket retained");
    counted += n;
  };

  for (std::size_t k = 0; k < low_.size(); ++k) {
    if (low_[k] == kNil) continue;
    if (buckets_[low_[k]].key != k) fail("low slot " + std::to_string(k) + " holds wrong key");
    if (buckets_[low_[k]].high) fail("low bucket flagged high");
    walk_bucket(low_[k]);
  }
  std::uint32_t prev = kNil;
  std::size_t high_count = 0;
  for (std::uint32_t b = high_head_; b != kNil; b = buckets_[b].next) {
    const auto& bucket = buckets_[b];
    if (!bucket.high) fail("high bucket not flagged high");
    if (bucket.key < center_key_ + 2) fail("high bucket key below k0+2");
    if (prev != kNil && buckets_[prev].key >= bucket.key) fail("high buckets not strictly ascending");
    if (bucket.prev != prev) fail("broken high back link");
    walk_bucket(b);
    prev = b;
    if (++high_count > buckets_.size()) {
      fail("cycle in high list");
      break;
    }
  }
  if (prev != high_tail_) fail("high tail mismatch");
  if (counted != size_) fail("bucketed element count != size");
  if (index_.size() != size_) fail("id index size != size");
  for (const auto& [id, e] : index_) {
    if (e >= elements_.size() || !elements_[e].live || elements_[e].id != id) fail("id index stale");
  }
  return issues;
}

std::size_t NeighborHeap::high_bucket_count() const noexcept {
  std::size_t k = 0;
  for (std::uint32_t b = high_head_; b != kNil; b = buckets_[b].next) ++k;
  return k;
}

}  // namespace arbor
