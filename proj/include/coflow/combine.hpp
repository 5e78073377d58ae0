#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coflow/deadlines.hpp"
#include "coflow/model.hpp"

namespace coflow {

enum class Allocator { Greedy, GreedyMultiplicity, Cbf, CbfR, Ckbf };

struct PortfolioMember {
  Allocator kind = Allocator::Greedy;
  std::int64_t tau = 6;
  std::int64_t b = 1;

  /// "greedy", "greedy-m", "cbf6", "cbf-r4", "ckbf6,1"
  std::string name() const;
};

/// Accepts greedy, greedy-m, cbfN / cbf:N, cbf-rN, ckbfN,B. Throws
/// std::invalid_argument otherwise.
PortfolioMember parse_member(const std::string& text);

/// Greedy + CBF^tau.
std::vector<PortfolioMember> main_portfolio(std::int64_t tau = 6);
/// Greedy_R + CBF_R^tau.
std::vector<PortfolioMember> release_portfolio(std::int64_t tau = 4);

struct MemberOutcome {
  PortfolioMember member;
  Schedule schedule;
  CostReport report;
  /// Chosen lambda offset for the CBF members.
  std::optional<std::int64_t> lambda;
  /// Weighted bound asserted by the allocator, where it has one.
  std::optional<Rational> bound;
  /// Per-coflow finishing-time bound the allocator guarantees.
  std::vector<Rational> coflow_bound;
  double ms = 0;
};

struct CombinedResult {
  Schedule schedule;
  CostReport report;
  std::size_t best = 0;
  std::vector<MemberOutcome> members;
};

/// Runs one allocator and validates its schedule; an invalid schedule is an
/// internal error (std::logic_error).
MemberOutcome run_member(const Instance& instance, const CertifiedProfile& profile, const PortfolioMember& member);

/// Runs every member (up to `jobs` at a time) and returns the cheapest
/// schedule, ties to the earlier member.
CombinedResult combined(const Instance& instance, const CertifiedProfile& profile,
                        std::span<const PortfolioMember> portfolio, unsigned jobs = 1);

struct AsymptoticReport {
  std::int64_t tau = 0;
  Rational cost;
  /// OPT if known, otherwise the lower bound sum w_j (r_j + Delta_j).
  Rational opt;
  bool opt_exact = false;
  /// sum w_j / opt
  Rational eps_hat;
  /// 2 + 4/tau + eps_hat (2 tau + 2)
  Rational bound;
  Rational ratio;
  bool holds = false;
};

/// Sum over coflows of w_j (r_j + Delta(E_j)).
Rational degree_lower_bound(const Instance& instance);

/// Runs cbf_r(tau) and compares cost / OPT with 2 + 4/tau + eps_hat (2 tau + 2).
/// With a known OPT a violation throws std::logic_error; without one only
/// the report is produced.
AsymptoticReport asymptotic_check(const Instance& instance, const CertifiedProfile& profile, std::int64_t tau,
                                  const std::optional<Rational>& known_opt = std::nullopt);

}  // namespace coflow
