#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "coflow/lp.hpp"
#include "coflow/model.hpp"

namespace coflow {

/// (coflow, index into its flow list), enumerated coflow by coflow.
struct FlowRef {
  std::size_t coflow = 0;
  std::size_t flow = 0;
};

std::vector<FlowRef> flow_refs(const Instance& instance);

struct DeadlineProfile {
  std::vector<Rational> deadlines;
  /// Coflows sorted by deadline, ties by index.
  std::vector<std::size_t> order;
  std::vector<std::int64_t> releases;
  std::optional<Rational> theta;

  Rational weighted_sum(const Instance& instance) const;
};

/// Builds a profile and its order. Throws std::invalid_argument if the sizes
/// disagree or a deadline does not exceed its release.
DeadlineProfile make_profile(const Instance& instance, std::vector<Rational> deadlines,
                             std::optional<Rational> theta = std::nullopt);

// ---------------------------------------------------------------------------
// Deadline LPs

/// A deadline LP plus the meaning of its columns. Column x of `cells[k]`
/// carries the amount of flow `flow` (global index into flow_refs) processed
/// during the time interval (start, end].
struct DeadlineLp {
  struct Cell {
    std::size_t flow;
    std::size_t var;
    Rational start;
    Rational end;
  };
  LinearProgram lp;
  std::vector<Cell> cells;
  /// Column of c_j per coflow.
  std::vector<std::size_t> completion_var;
  std::int64_t horizon = 0;
};

/// Time-indexed LP on the unit-copy expansion; horizon max r + 2 Δ(E).
DeadlineLp build_lp_d(const Instance& instance);

/// Interval-indexed LP whose size is polynomial in log of the multiplicities.
/// Breakpoints are floor((1+eps)^i) up to the horizon plus every release
/// date; interval (t_{i-1}, t_i] has capacity t_i - t_{i-1} and charges its
/// flow at time t_i. Throws std::invalid_argument when eps <= 0.
DeadlineLp build_lp_d_intervals(const Instance& instance, const Rational& epsilon);

struct FlowPiece {
  Rational start;
  Rational end;
  Rational amount;
};

/// Continuous view of a fractional schedule: every piece spreads its amount
/// uniformly over (start, end]. Pieces of a flow are sorted and disjoint.
struct FractionalFlow {
  std::size_t coflow = 0;
  std::size_t flow = 0;
  Rational demand;
  std::vector<FlowPiece> pieces;
};

struct FractionalSchedule {
  std::vector<FractionalFlow> flows;
  Rational lp_cost;
  std::int64_t horizon = 0;
};

class LpFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Solves a deadline LP and returns its schedule. Throws LpFailure if the
/// LP is not solved to optimality.
FractionalSchedule solve_deadline_lp(const Instance& instance, const DeadlineLp& dlp);

/// Time at which every flow of coflow j has received a theta fraction of its
/// demand. theta must lie in (0, 1].
Rational completion_curve(const FractionalSchedule& frac, std::size_t coflow, const Rational& theta);

/// Every theta in (0, 1] where some C_j(.) changes slope, plus 1.
std::vector<Rational> curve_breakpoints(const FractionalSchedule& frac);

struct SeededRounding {
  std::uint64_t seed = 0;
};
struct CandidateRounding {
  std::size_t count = 16;
};
using RoundingMode = std::variant<SeededRounding, CandidateRounding>;

/// theta drawn with density 2x from a 64-bit seeded generator.
Rational draw_theta(std::uint64_t seed);

DeadlineProfile profile_for_theta(const Instance& instance, const FractionalSchedule& frac, const Rational& theta);

DeadlineProfile round_deadlines(const Instance& instance, const FractionalSchedule& frac, const RoundingMode& mode);

// ---------------------------------------------------------------------------
// Block LPs

enum class BlockLpKind { NoRelease, WithRelease };

/// A fractional assignment of flow to the blocks (ends[s-1], ends[s]].
struct BlockFeasibility {
  bool feasible = false;
  BlockLpKind kind = BlockLpKind::NoRelease;
  std::vector<Rational> ends;
  /// amount[global flow][block]
  std::vector<std::vector<Rational>> amount;
  std::size_t rows = 0;
  std::size_t strictly_inside = 0;
};

/// Block LP between consecutive sorted deadlines. Requires all releases 0.
BlockFeasibility check_lp_i(const Instance& instance, const DeadlineProfile& profile);

/// Block LP on the merged chain of releases and deadlines.
BlockFeasibility check_lp_r(const Instance& instance, const DeadlineProfile& profile);

class ProfileRejected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A profile that has passed the block LP check matching the instance
/// (the release-free LP when every release is 0). Allocators only accept
/// this type.
class CertifiedProfile {
 public:
  const DeadlineProfile& profile() const { return profile_; }
  BlockLpKind kind() const { return kind_; }
  const Rational& deadline(std::size_t j) const { return profile_.deadlines.at(j); }
  const std::vector<std::size_t>& order() const { return profile_.order; }

 private:
  CertifiedProfile(DeadlineProfile profile, BlockLpKind kind) : profile_(std::move(profile)), kind_(kind) {}
  friend CertifiedProfile certify(const Instance&, DeadlineProfile);

  DeadlineProfile profile_;
  BlockLpKind kind_;
};

/// Throws ProfileRejected if the block LP is infeasible.
CertifiedProfile certify(const Instance& instance, DeadlineProfile profile);

enum class DeadlineLpChoice { Auto, TimeIndexed, Intervals };

struct DeadlineOptions {
  RoundingMode mode = CandidateRounding{};
  DeadlineLpChoice lp = DeadlineLpChoice::Auto;
  Rational epsilon = Rational(1, 4);
  /// Auto uses the time-indexed LP while copies * horizon stays below this.
  std::int64_t time_indexed_limit = 4096;
};

/// LP, rounding and certification in one call.
CertifiedProfile generate_deadlines(const Instance& instance, const DeadlineOptions& options = {});

/// The LP `options` selects.
DeadlineLp deadline_lp(const Instance& instance, const DeadlineOptions& options);

/// Solves whichever LP `options` selects.
FractionalSchedule fractional_schedule(const Instance& instance, const DeadlineOptions& options);

}  // namespace coflow
