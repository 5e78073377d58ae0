#include "coflow/model.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>
#include <utility>

namespace coflow {

Instance::Instance(int left_count, int right_count, std::vector<Coflow> coflows)
    : left_(left_count), right_(right_count), coflows_(std::move(coflows)) {
  if (left_ < 1 || right_ < 1) throw StructuralError("instance needs at least one vertex per side");
  if (coflows_.empty()) throw StructuralError("instance needs at least one coflow");
  for (std::size_t j = 0; j < coflows_.size(); ++j) {
    const Coflow& c = coflows_[j];
    const std::string where = "coflow " + std::to_string(j) + ": ";
    if (c.weight <= 0) throw StructuralError(where + "weight must be positive");
    if (c.release < 0) throw StructuralError(where + "release must be nonnegative");
    if (c.flows.empty()) throw StructuralError(where + "no flows");
    for (const Flow& f : c.flows) {
      if (f.u < 0 || f.u >= left_ || f.v < 0 || f.v >= right_) {
        throw StructuralError(where + "flow endpoint out of range");
      }
      if (f.mult < 1) throw StructuralError(where + "multiplicity must be at least 1");
    }
  }
}

std::int64_t Instance::total_copies() const {
  std::int64_t total = 0;
  for (const Coflow& c : coflows_)
    for (const Flow& f : c.flows) total += f.mult;
  return total;
}

std::int64_t Instance::max_release() const {
  std::int64_t r = 0;
  for (const Coflow& c : coflows_) r = std::max(r, c.release);
  return r;
}

Rational Instance::total_weight() const {
  Rational w = 0;
  for (const Coflow& c : coflows_) w += c.weight;
  return w;
}

Instance Instance::expanded() const {
  std::vector<Coflow> out = coflows_;
  for (Coflow& c : out) {
    std::vector<Flow> unit;
    for (const Flow& f : c.flows)
      for (std::int64_t k = 0; k < f.mult; ++k) unit.push_back(Flow{f.u, f.v, 1});
    c.flows = std::move(unit);
  }
  return Instance(left_, right_, std::move(out));
}

Instance Instance::restricted(std::span<const std::size_t> keep) const {
  std::vector<Coflow> out;
  out.reserve(keep.size());
  for (std::size_t j : keep) out.push_back(coflows_.at(j));
  return Instance(left_, right_, std::move(out));
}

std::int64_t max_degree(std::span<const Flow> edges) {
  std::map<int, std::int64_t> left, right;
  std::int64_t best = 0;
  for (const Flow& f : edges) {
    best = std::max(best, left[f.u] += f.mult);
    best = std::max(best, right[f.v] += f.mult);
  }
  return best;
}

std::int64_t max_degree(const Coflow& coflow) { return max_degree(coflow.flows); }

// ---------------------------------------------------------------------------

void Schedule::add(Slot slot, ScheduleEntry entry) {
  auto it = unit_run_.find(slot);
  if (it == unit_run_.end()) {
    unit_run_.emplace(slot, runs_.size());
    runs_.push_back(SlotRun{slot, 1, {entry}});
  } else {
    runs_[it->second].entries.push_back(entry);
  }
}

void Schedule::add_run(Slot first, std::int64_t length, std::vector<ScheduleEntry> entries) {
  if (length < 1) throw std::invalid_argument("slot run length must be positive");
  if (entries.empty()) return;
  if (length == 1) {
    for (const ScheduleEntry& e : entries) add(first, e);
    return;
  }
  runs_.push_back(SlotRun{first, length, std::move(entries)});
}

void Schedule::append(const Schedule& other) {
  for (const SlotRun& run : other.runs_) add_run(run.first, run.length, run.entries);
}

Slot Schedule::makespan() const {
  Slot m = 0;
  for (const SlotRun& run : runs_) m = std::max(m, run.last());
  return m;
}

std::int64_t Schedule::total_entries() const {
  std::int64_t n = 0;
  for (const SlotRun& run : runs_) n += run.length * static_cast<std::int64_t>(run.entries.size());
  return n;
}

Schedule Schedule::shifted(std::int64_t offset) const {
  Schedule out;
  for (const SlotRun& run : runs_) out.add_run(run.first + offset, run.length, run.entries);
  return out;
}

std::map<Slot, std::vector<ScheduleEntry>> Schedule::expand() const {
  std::map<Slot, std::vector<ScheduleEntry>> slots;
  for (const SlotRun& run : runs_)
    for (std::int64_t k = 0; k < run.length; ++k) {
      auto& bucket = slots[run.first + k];
      bucket.insert(bucket.end(), run.entries.begin(), run.entries.end());
    }
  for (auto& [slot, entries] : slots) std::sort(entries.begin(), entries.end());
  return slots;
}

// ---------------------------------------------------------------------------

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::VertexConflict: return "vertex conflict";
    case ViolationKind::ReleaseDate: return "release date";
    case ViolationKind::CopyCount: return "copy count";
    case ViolationKind::NonPositiveSlot: return "non-positive slot";
  }
  return "unknown";
}

namespace {

using FlowKey = std::tuple<std::size_t, int, int>;

std::map<FlowKey, std::int64_t> required_copies(const Instance& instance) {
  std::map<FlowKey, std::int64_t> need;
  for (std::size_t j = 0; j < instance.size(); ++j)
    for (const Flow& f : instance.coflow(j).flows) need[{j, f.u, f.v}] += f.mult;
  return need;
}

std::string describe(const ScheduleEntry& e) {
  std::ostringstream os;
  os << "coflow " << e.coflow << " edge (" << e.u << "," << e.v << ")";
  return os.str();
}

}  // namespace

ValidationReport validate(const Instance& instance, const Schedule& schedule) {
  const auto need = required_copies(instance);
  ValidationReport report;

  std::map<FlowKey, std::int64_t> have;
  for (const SlotRun& run : schedule.runs()) {
    if (run.length < 1) throw StructuralError("slot run with non-positive length");
    for (const ScheduleEntry& e : run.entries) {
      if (e.coflow >= instance.size()) {
        throw StructuralError("schedule references unknown coflow " + std::to_string(e.coflow));
      }
      FlowKey key{e.coflow, e.u, e.v};
      if (!need.contains(key)) throw StructuralError("schedule references unknown flow: " + describe(e));
      have[key] += run.length;
      if (run.first < 1) {
        report.violations.push_back({ViolationKind::NonPositiveSlot, run.first, e.coflow, e.u, e.v,
                                     "slot " + std::to_string(run.first) + " is not positive: " + describe(e)});
      }
      const std::int64_t release = instance.coflow(e.coflow).release;
      if (run.first <= release) {
        report.violations.push_back({ViolationKind::ReleaseDate, run.first, e.coflow, e.u, e.v,
                                     "slot " + std::to_string(run.first) + " precedes release " +
                                         std::to_string(release) + " of " + describe(e)});
      }
    }
  }
  for (const auto& [key, count] : need) {
    const auto it = have.find(key);
    const std::int64_t got = it == have.end() ? 0 : it->second;
    if (got != count) {
      const auto& [j, u, v] = key;
      report.violations.push_back({ViolationKind::CopyCount, 0, j, u, v,
                                   describe({j, u, v}) + " scheduled " + std::to_string(got) +
                                       " times, needs " + std::to_string(count)});
    }
  }

  // Sweep over elementary slot intervals on which the set of covering runs is
  // constant; each such interval must carry a matching.
  const auto& runs = schedule.runs();
  std::vector<Slot> points;
  points.reserve(2 * runs.size());
  for (const SlotRun& run : runs) {
    points.push_back(run.first);
    points.push_back(run.last() + 1);
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  std::vector<std::size_t> order(runs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return runs[a].first < runs[b].first; });

  std::vector<std::size_t> active;
  std::size_t next = 0;
  for (std::size_t p = 0; p + 1 < points.size(); ++p) {
    const Slot at = points[p];
    while (next < order.size() && runs[order[next]].first <= at) active.push_back(order[next++]);
    std::erase_if(active, [&](std::size_t r) { return runs[r].last() < at; });
    if (active.empty()) continue;

    std::map<int, const ScheduleEntry*> left_used, right_used;
    for (std::size_t r : active) {
      for (const ScheduleEntry& e : runs[r].entries) {
        auto [lit, lnew] = left_used.emplace(e.u, &e);
        if (!lnew) {
          report.violations.push_back({ViolationKind::VertexConflict, at, e.coflow, e.u, e.v,
                                       "slot " + std::to_string(at) + ": left vertex " + std::to_string(e.u) +
                                           " used by " + describe(*lit->second) + " and " + describe(e)});
        }
        auto [rit, rnew] = right_used.emplace(e.v, &e);
        if (!rnew) {
          report.violations.push_back({ViolationKind::VertexConflict, at, e.coflow, e.u, e.v,
                                       "slot " + std::to_string(at) + ": right vertex " + std::to_string(e.v) +
                                           " used by " + describe(*rit->second) + " and " + describe(e)});
        }
      }
    }
  }
  return report;
}

InvalidSchedule::InvalidSchedule(ValidationReport report)
    : std::runtime_error(report.violations.empty() ? "invalid schedule"
                                                   : "invalid schedule: " + report.violations.front().message),
      report_(std::move(report)) {}

CostReport cost(const Instance& instance, const Schedule& schedule) {
  ValidationReport report = validate(instance, schedule);
  if (!report.ok()) throw InvalidSchedule(std::move(report));
  CostReport out;
  out.completion.assign(instance.size(), 0);
  for (const SlotRun& run : schedule.runs())
    for (const ScheduleEntry& e : run.entries)
      out.completion[e.coflow] = std::max(out.completion[e.coflow], run.last());
  out.total = weighted_sum(instance, out.completion);
  return out;
}

Rational weighted_sum(const Instance& instance, std::span<const Slot> completion) {
  Rational total = 0;
  for (std::size_t j = 0; j < instance.size(); ++j) total += instance.coflow(j).weight * from_int(completion[j]);
  return total;
}

}  // namespace coflow
