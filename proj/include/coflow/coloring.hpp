#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "coflow/model.hpp"

namespace coflow {

/// A matching used `count` times in a row. `items` index into the edge list
/// passed to decompose(); an item appears at most once per class.
struct ColorClass {
  std::vector<std::size_t> items;
  std::int64_t count = 0;
};

/// Partition of a bipartite multigraph into exactly `degree` matchings,
/// stored as classes whose counts sum to `degree`.
struct MatchingDecomposition {
  std::int64_t degree = 0;
  std::vector<ColorClass> classes;

  /// One item list per matching (degree lists in total). Only sensible for
  /// small degrees.
  std::vector<std::vector<std::size_t>> matchings() const;
};

/// Kőnig edge colouring. The graph is padded to a degree-regular bipartite
/// multigraph and peeled into weighted perfect matchings, so the running
/// time depends on the number of distinct edges and vertices but not on the
/// multiplicities.
MatchingDecomposition decompose(std::span<const Flow> edges);

}  // namespace coflow
