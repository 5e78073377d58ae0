#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>

#include "coflow/deadlines.hpp"
#include "coflow/model.hpp"

namespace coflow {

struct OracleOptions {
  /// opt() refuses instances with more unit copies than this.
  std::int64_t copy_limit = 10;
  /// deadline_feasible_integral() limit; the deadlines cap the depth.
  std::int64_t feasibility_copy_limit = 24;
  /// Defaults to max release + total copies.
  std::optional<Slot> horizon;
};

class OracleRefused : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleResult {
  CostReport report;
  Schedule schedule;
  std::uint64_t nodes = 0;
  std::uint64_t memo_hits = 0;
};

/// Exact minimum weighted completion time. Branches over maximal matchings
/// of the eligible remaining edges per slot (an empty slot only when nothing
/// is released yet), prunes with max(t, r_j) + Delta(remaining_j) and
/// memoises on (slot, remaining).
OracleResult opt(const Instance& instance, const OracleOptions& options = {});

/// Plain enumeration over every matching (maximal or not) in every slot up to
/// the horizon. Only for cross-checking opt on tiny instances.
Rational exhaustive_opt(const Instance& instance, const OracleOptions& options = {});

/// True iff some valid schedule finishes every coflow j by floor(C_j).
bool deadline_feasible_integral(const Instance& instance, const DeadlineProfile& profile,
                                const OracleOptions& options = {});

/// The 4-coflow gadget on 7 + 7 vertices (0-based), weights 1, with its
/// deadlines (1, 2, 3, 3).
std::pair<Instance, DeadlineProfile> a1_fixture();

}  // namespace coflow
