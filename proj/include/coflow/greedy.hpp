#pragma once

#include <cstddef>
#include <vector>

#include "coflow/deadlines.hpp"
#include "coflow/model.hpp"

namespace coflow {

struct GreedyTrace {
  /// copy_slots[g][k]: slot of the k-th copy of global flow g.
  std::vector<std::vector<Slot>> copy_slots;
  std::vector<Slot> finish;
};

struct GreedyResult {
  Schedule schedule;
  GreedyTrace trace;
};

/// Coflows in deadline order, flows in input order, every unit copy in the
/// earliest slot after the release where both endpoints are free. Checks
/// finish_j <= r_j + 2 C_j - 1 and throws std::logic_error if it fails.
/// greedy() refuses instances with release dates.
GreedyResult greedy(const Instance& instance, const CertifiedProfile& profile);
GreedyResult greedy_r(const Instance& instance, const CertifiedProfile& profile);

struct MultiplicityGreedyResult {
  Schedule schedule;
  std::vector<Slot> finish;
  /// Maximum degree of each edge set, in deadline order.
  std::vector<std::int64_t> set_degree;
  std::size_t decompose_calls = 0;
};

/// Set-based greedy that never expands multiplicities: flow is moved into
/// the earliest earlier set that can take it without raising that set's
/// maximum degree, and each set is then coloured into consecutive slots.
/// Release dates are not supported (std::invalid_argument).
MultiplicityGreedyResult greedy_multiplicity(const Instance& instance, const CertifiedProfile& profile);

}  // namespace coflow
