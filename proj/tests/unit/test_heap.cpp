#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "hjkit/indexed_min_heap.hpp"

using hjkit::IndexedMinHeap;

TEST_CASE("heap basics") {
  SUBCASE("insert then pop") {
    IndexedMinHeap h(10);
    h.insert_or_decrease(7, 3.0);
    CHECK(h.pop_min() == std::pair<std::size_t, double>{7, 3.0});
    CHECK(h.empty());
  }
  SUBCASE("decrease key") {
    IndexedMinHeap h(10);
    h.insert_or_decrease(7, 3.0);
    CHECK(h.insert_or_decrease(7, 2.0));
    CHECK(h.pop_min() == std::pair<std::size_t, double>{7, 2.0});
  }
  SUBCASE("increase ignored") {
    IndexedMinHeap h(10);
    h.insert_or_decrease(7, 3.0);
    CHECK_FALSE(h.insert_or_decrease(7, 5.0));
    CHECK(h.pop_min() == std::pair<std::size_t, double>{7, 3.0});
  }
  SUBCASE("ties pop by id") {
    IndexedMinHeap h(10);
    for (std::size_t id : {5u, 2u, 9u, 0u}) h.insert_or_decrease(id, 1.0);
    for (std::size_t id : {0u, 2u, 5u, 9u}) CHECK(h.pop_min().first == id);
  }
  SUBCASE("infinite keys are ordered last") {
    IndexedMinHeap h(4);
    h.insert_or_decrease(0, hjkit::kInfinity);
    h.insert_or_decrease(1, 4.0);
    CHECK(h.pop_min().first == 1);
    CHECK(h.pop_min().second == hjkit::kInfinity);
  }
}

TEST_CASE("heap agrees with a sorted reference on random operations") {
  for (unsigned seed : {1u, 2u, 3u}) {
    constexpr std::size_t kIds = 500;
    IndexedMinHeap h(kIds);
    std::set<std::pair<double, std::size_t>> ref;
    std::map<std::size_t, double> key_of;
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> key(0.0, 100.0);
    for (int op = 0; op < 10000; ++op) {
      const unsigned kind = rng() % 3;
      if (kind < 2) {
        const std::size_t id = rng() % kIds;
        const double k = key(rng);
        h.insert_or_decrease(id, k);
        auto it = key_of.find(id);
        if (it == key_of.end()) {
          key_of[id] = k;
          ref.insert({k, id});
        } else if (k < it->second) {
          ref.erase({it->second, id});
          it->second = k;
          ref.insert({k, id});
        }
      } else if (!ref.empty()) {
        const auto expected = *ref.begin();
        ref.erase(ref.begin());
        key_of.erase(expected.second);
        const auto got = h.pop_min();
        REQUIRE(got.first == expected.second);
        REQUIRE(got.second == expected.first);
      }
      REQUIRE(h.size() == ref.size());
    }
    CHECK(h.is_consistent());
    double prev = -1.0;
    while (!h.empty()) {
      const auto got = h.pop_min();
      CHECK(got.second >= prev);
      CHECK(got.second == ref.begin()->first);
      ref.erase(ref.begin());
      prev = got.second;
    }
  }
}
