#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "coflow/coloring.hpp"

using namespace coflow;

namespace {

// Every class is a matching and item i is used exactly mult_i times.
void check_decomposition(const std::vector<Flow>& edges, const MatchingDecomposition& d) {
  CHECK(d.degree == max_degree(edges));
  std::int64_t total = 0;
  std::vector<std::int64_t> used(edges.size(), 0);
  for (const ColorClass& c : d.classes) {
    REQUIRE(c.count > 0);
    total += c.count;
    std::set<int> left, right;
    for (std::size_t i : c.items) {
      CHECK(left.insert(edges[i].u).second);
      CHECK(right.insert(edges[i].v).second);
      used[i] += c.count;
    }
  }
  CHECK(total == d.degree);
  for (std::size_t i = 0; i < edges.size(); ++i) CHECK(used[i] == edges[i].mult);
}

}  // namespace

TEST_SUITE("coloring") {
  TEST_CASE("single edge") {
    const std::vector<Flow> e{{0, 0, 1}};
    const auto d = decompose(e);
    CHECK(d.matchings().size() == 1);
    check_decomposition(e, d);
  }

  TEST_CASE("K22 splits into two perfect matchings") {
    const std::vector<Flow> e{{0, 0, 1}, {0, 1, 1}, {1, 0, 1}, {1, 1, 1}};
    const auto d = decompose(e);
    const auto m = d.matchings();
    REQUIRE(m.size() == 2);
    CHECK(m[0].size() == 2);
    CHECK(m[1].size() == 2);
    check_decomposition(e, d);
  }

  TEST_CASE("(0,0)x3 and (1,1)x2") {
    const std::vector<Flow> e{{0, 0, 3}, {1, 1, 2}};
    const auto d = decompose(e);
    const auto m = d.matchings();
    REQUIRE(m.size() == 3);
    int with_first = 0, with_second = 0;
    for (const auto& items : m) {
      for (std::size_t i : items) (i == 0 ? with_first : with_second)++;
    }
    CHECK(with_first == 3);
    CHECK(with_second == 2);
    check_decomposition(e, d);
  }

  TEST_CASE("empty edge set") {
    const auto d = decompose(std::span<const Flow>{});
    CHECK(d.degree == 0);
    CHECK(d.classes.empty());
  }

  TEST_CASE("random multigraphs including huge multiplicities") {
    std::mt19937_64 gen(7);
    for (int round = 0; round < 60; ++round) {
      const int l = 1 + static_cast<int>(gen() % 5), r = 1 + static_cast<int>(gen() % 5);
      const std::int64_t cap = round % 3 == 0 ? 1000000 : 4;
      std::map<std::pair<int, int>, std::int64_t> m;
      const int count = 1 + static_cast<int>(gen() % 10);
      for (int k = 0; k < count; ++k) {
        m[{static_cast<int>(gen() % l), static_cast<int>(gen() % r)}] += 1 + static_cast<std::int64_t>(gen() % cap);
      }
      std::vector<Flow> e;
      for (auto& [uv, mult] : m) e.push_back({uv.first, uv.second, mult});
      check_decomposition(e, decompose(e));
    }
  }
}
