#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "hjkit/core.hpp"

namespace hjkit {

/// Binary min-heap over node ids 0..capacity-1 with a position index, so a
/// stored id can have its key lowered in O(log n). Equal keys pop in
/// increasing id order.
class IndexedMinHeap {
 public:
  explicit IndexedMinHeap(std::size_t capacity)
      : keys_(capacity, kInfinity), position_(capacity, kAbsent) {}

  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  std::size_t capacity() const { return keys_.size(); }
  bool contains(NodeId id) const { return position_[id] != kAbsent; }
  double key(NodeId id) const { return keys_[id]; }

  /// Inserts id, or lowers its key. Attempts to raise a stored key are
  /// ignored. Returns true when the heap changed.
  bool insert_or_decrease(NodeId id, double key) {
    if (position_[id] == kAbsent) {
      keys_[id] = key;
      position_[id] = heap_.size();
      heap_.push_back(id);
      sift_up(position_[id]);
      return true;
    }
    if (!(key < keys_[id])) return false;
    keys_[id] = key;
    sift_up(position_[id]);
    return true;
  }

  std::pair<NodeId, double> top() const { return {heap_.front(), keys_[heap_.front()]}; }

  std::pair<NodeId, double> pop_min() {
    const NodeId id = heap_.front();
    swap_slots(0, heap_.size() - 1);
    heap_.pop_back();
    position_[id] = kAbsent;
    if (!heap_.empty()) sift_down(0);
    return {id, keys_[id]};
  }

  /// Checks the heap property and the position index; O(n), for tests.
  bool is_consistent() const {
    for (std::size_t p = 0; p < heap_.size(); ++p) {
      if (position_[heap_[p]] != p) return false;
      if (p > 0 && less(p, (p - 1) / 2)) return false;
    }
    std::size_t present = 0;
    for (std::size_t pos : position_)
      if (pos != kAbsent) ++present;
    return present == heap_.size();
  }

 private:
  static constexpr std::size_t kAbsent = static_cast<std::size_t>(-1);

  bool less(std::size_t a, std::size_t b) const {
    const NodeId ia = heap_[a], ib = heap_[b];
    if (keys_[ia] != keys_[ib]) return keys_[ia] < keys_[ib];
    return ia < ib;
  }

  void swap_slots(std::size_t a, std::size_t b) {
    std::swap(heap_[a], heap_[b]);
    position_[heap_[a]] = a;
    position_[heap_[b]] = b;
  }

  void sift_up(std::size_t p) {
    while (p > 0) {
      const std::size_t parent = (p - 1) / 2;
      if (!less(p, parent)) break;
      swap_slots(p, parent);
      p = parent;
    }
  }

  void sift_down(std::size_t p) {
    for (;;) {
      const std::size_t l = 2 * p + 1, r = l + 1;
      std::size_t best = p;
      if (l < heap_.size() && less(l, best)) best = l;
      if (r < heap_.size() && less(r, best)) best = r;
      if (best == p) return;
      swap_slots(p, best);
      p = best;
    }
  }

  std::vector<double> keys_;
  std::vector<std::size_t> position_;
  std::vector<NodeId> heap_;
};

}  // namespace hjkit
