#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "coflow/rational.hpp"

namespace coflow {

/// Time slots are 1-indexed; a release r blocks slots 1..r.
using Slot = std::int64_t;

/// An edge (u, v) of the bipartite port graph carried `mult` times.
struct Flow {
  int u = 0;
  int v = 0;
  std::int64_t mult = 1;
};

struct Coflow {
  Rational weight = 1;
  std::int64_t release = 0;
  std::vector<Flow> flows;
};

/// Raised when an instance or schedule is malformed (bad indices, empty
/// coflows, references to flows that do not exist). Distinct from a schedule
/// that is well-formed but breaks a validity rule.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Instance {
 public:
  Instance() = default;
  /// Validates the invariants and throws StructuralError when one fails.
  Instance(int left_count, int right_count, std::vector<Coflow> coflows);

  int left_count() const { return left_; }
  int right_count() const { return right_; }
  std::size_t size() const { return coflows_.size(); }
  const std::vector<Coflow>& coflows() const { return coflows_; }
  const Coflow& coflow(std::size_t j) const { return coflows_.at(j); }

  std::int64_t total_copies() const;
  std::int64_t max_release() const;
  bool has_releases() const { return max_release() > 0; }
  Rational total_weight() const;

  /// Same instance with every flow split into unit-multiplicity copies,
  /// placed consecutively in input order.
  Instance expanded() const;

  /// Sub-instance keeping the listed coflows in the given order.
  Instance restricted(std::span<const std::size_t> keep) const;

 private:
  int left_ = 0;
  int right_ = 0;
  std::vector<Coflow> coflows_;
};

/// Maximum over vertices of the total multiplicity of incident flows.
std::int64_t max_degree(std::span<const Flow> edges);
std::int64_t max_degree(const Coflow& coflow);

struct ScheduleEntry {
  std::size_t coflow = 0;
  int u = 0;
  int v = 0;
  friend bool operator==(const ScheduleEntry&, const ScheduleEntry&) = default;
  friend auto operator<=>(const ScheduleEntry&, const ScheduleEntry&) = default;
};

/// The same set of entries repeated in slots first, first+1, ...,
/// first+length-1.
struct SlotRun {
  Slot first = 1;
  std::int64_t length = 1;
  std::vector<ScheduleEntry> entries;

  Slot last() const { return first + length - 1; }
};

/// Map from time slots to edge copies, stored as runs so that
/// high-multiplicity schedules stay compact.
class Schedule {
 public:
  void add(Slot slot, ScheduleEntry entry);
  void add_run(Slot first, std::int64_t length, std::vector<ScheduleEntry> entries);
  void append(const Schedule& other);

  const std::vector<SlotRun>& runs() const { return runs_; }
  bool empty() const { return runs_.empty(); }
  Slot makespan() const;
  std::int64_t total_entries() const;
  Schedule shifted(std::int64_t offset) const;

  /// Explicit per-slot form; entries within a slot are sorted.
  std::map<Slot, std::vector<ScheduleEntry>> expand() const;

 private:
  std::vector<SlotRun> runs_;
  std::map<Slot, std::size_t> unit_run_;
};

enum class ViolationKind { VertexConflict, ReleaseDate, CopyCount, NonPositiveSlot };

struct Violation {
  ViolationKind kind;
  Slot slot = 0;
  std::size_t coflow = 0;
  int u = -1;
  int v = -1;
  std::string message;
};

std::string to_string(ViolationKind kind);

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks every schedule rule: one matching per slot, release dates, and the
/// exact number of copies per flow. Throws StructuralError when the schedule
/// references a coflow or flow that does not exist.
ValidationReport validate(const Instance& instance, const Schedule& schedule);

struct CostReport {
  std::vector<Slot> completion;
  Rational total;
};

/// Thrown by cost() when handed an invalid schedule.
class InvalidSchedule : public std::runtime_error {
 public:
  explicit InvalidSchedule(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

CostReport cost(const Instance& instance, const Schedule& schedule);

/// Weighted cost of given completion times (no validation).
Rational weighted_sum(const Instance& instance, std::span<const Slot> completion);

}  // namespace coflow
