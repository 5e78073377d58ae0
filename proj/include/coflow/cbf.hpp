#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "coflow/deadlines.hpp"
#include "coflow/model.hpp"

namespace coflow {

/// Blocks (ends[b-1], ends[b]] on the lattice {0} ∪ {lambda + i tau}
/// (plain multiples of tau when lambda = 0).
struct BlockStructure {
  std::int64_t tau = 0;
  std::int64_t lambda = 0;
  std::vector<std::int64_t> ends;
  std::vector<std::int64_t> rounded_deadline;
  std::vector<std::int64_t> rounded_release;
  /// Inclusive range of blocks each coflow may use.
  std::vector<std::size_t> first_block;
  std::vector<std::size_t> last_block;

  std::size_t size() const { return ends.size(); }
  std::int64_t start(std::size_t b) const { return b == 0 ? 0 : ends[b - 1]; }
  std::int64_t length(std::size_t b) const { return ends[b] - start(b); }
};

/// Offsets tried for a given tau: 0, 2, ..., tau-1, tau+1.
std::vector<std::int64_t> lambda_offsets(std::int64_t tau);

/// Deadlines rounded up onto the lattice; equal rounded deadlines share a
/// block. Throws std::invalid_argument for tau < 2 or a disallowed lambda.
BlockStructure build_blocks(const DeadlineProfile& profile, std::int64_t tau, std::int64_t lambda);

/// Release variant: a release r > 0 is rounded up onto the lattice, a
/// deadline to the first lattice point strictly above it plus tau. Blocks
/// are cut at every rounded deadline and every positive rounded release.
BlockStructure build_release_blocks(const DeadlineProfile& profile, std::int64_t tau, std::int64_t lambda);

struct RoundingIteration {
  std::size_t fractional_vars = 0;
  std::size_t active_copies = 0;
  std::size_t rows = 0;
  std::size_t dropped = 0;
  std::size_t max_dropped_fractional = 0;
  bool objective_shift = false;
  std::size_t newly_fixed = 0;
};

struct RoundingAudit {
  std::vector<RoundingIteration> iterations;
  /// LP solves, the initial one included.
  std::size_t lp_solves = 0;
  std::size_t max_dropped_fractional = 0;
  std::size_t min_newly_fixed = 0;
  /// max over (block, vertex) of final load minus block length
  std::int64_t max_violation = 0;
  bool counting_ok = true;

  /// One JSON object per line, one line per iteration.
  std::string jsonl() const;
};

struct BlockAssignment {
  /// count[global flow][block]
  std::vector<std::vector<std::int64_t>> count;
  std::vector<std::int64_t> nominal;
  std::vector<std::int64_t> realized;
  RoundingAudit audit;
};

class RoundingInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iterated rounding of the block LP. Every degree constraint ends up
/// exceeded by at most 2; throws RoundingInfeasible when the initial LP is
/// infeasible and std::logic_error if an internal invariant breaks.
BlockAssignment iterated_round(const Instance& instance, const BlockStructure& blocks);

/// Lays blocks out in order; block b starts at max(end of block b-1,
/// start_offset + nominal start) and lasts its realized degree.
Schedule schedule_blocks(const Instance& instance, const BlockStructure& blocks, const BlockAssignment& assignment,
                         std::int64_t start_offset = 0);

struct CbfTrial {
  std::int64_t lambda = 0;
  Rational cost;
  std::vector<Slot> finish;
  BlockStructure blocks;
  BlockAssignment assignment;
};

struct CbfResult {
  Schedule schedule;
  std::vector<Slot> finish;
  Rational cost;
  std::int64_t lambda = 0;
  std::vector<CbfTrial> trials;
  /// Weighted bound asserted on the output.
  Rational bound;
  /// Release variant only: coflows above (tau+2)/tau C + 2 tau + 2 in the
  /// lambda = 0 trial (reported, never fatal).
  std::size_t tight_bound_misses = 0;
};

/// Per-coflow bound of one trial: rounded deadline plus two per lattice
/// block up to it.
Rational trial_bound(const Rational& deadline, std::int64_t tau, std::int64_t lambda, bool release_variant);

Rational cbf_weighted_bound(const Instance& instance, const DeadlineProfile& profile, std::int64_t tau);
Rational cbf_r_weighted_bound(const Instance& instance, const DeadlineProfile& profile, std::int64_t tau);
Rational ckbf_weighted_bound(const Instance& instance, const DeadlineProfile& profile, std::int64_t tau,
                             std::int64_t b);

/// Minimum-cost trial over all lambda offsets. Requires a release-free
/// profile.
CbfResult cbf(const Instance& instance, const CertifiedProfile& profile, std::int64_t tau);

/// Same with release-aware rounding.
CbfResult cbf_r(const Instance& instance, const CertifiedProfile& profile, std::int64_t tau);

/// Single trial, no minimisation.
CbfTrial cbf_trial(const Instance& instance, const CertifiedProfile& profile, std::int64_t tau, std::int64_t lambda,
                   bool release_variant);

struct CkbfResult {
  Schedule schedule;
  std::vector<Slot> finish;
  Rational cost;
  std::vector<std::size_t> prefix;
  std::int64_t prefix_degree = 0;
  std::optional<CbfResult> rest;
  Rational bound;
};

/// Coflows with C < b+1 are coloured into slots 1..b, the rest run through
/// cbf shifted by b slots.
CkbfResult ckbf(const Instance& instance, const CertifiedProfile& profile, std::int64_t tau, std::int64_t b);

}  // namespace coflow
