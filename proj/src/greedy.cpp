#include "coflow/greedy.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <tuple>

#include "coflow/coloring.hpp"

namespace coflow {

namespace {

class Occupancy {
 public:
  explicit Occupancy(int vertices) : busy_(static_cast<std::size_t>(vertices)) {}

  bool free(int vertex, Slot t) const {
    const auto& row = busy_[static_cast<std::size_t>(vertex)];
    return static_cast<std::size_t>(t) >= row.size() || !row[static_cast<std::size_t>(t)];
  }

  void take(int vertex, Slot t) {
    auto& row = busy_[static_cast<std::size_t>(vertex)];
    if (row.size() <= static_cast<std::size_t>(t)) row.resize(static_cast<std::size_t>(t) * 2 + 2, false);
    row[static_cast<std::size_t>(t)] = true;
  }

 private:
  std::vector<std::vector<bool>> busy_;
};

void check_bound(const Instance& instance, const CertifiedProfile& profile, const std::vector<Slot>& finish) {
  for (std::size_t j = 0; j < instance.size(); ++j) {
    const Rational bound = from_int(instance.coflow(j).release) + 2 * profile.deadline(j) - 1;
    if (from_int(finish[j]) > bound) {
      throw std::logic_error("greedy finish " + std::to_string(finish[j]) + " of coflow " + std::to_string(j) +
                             " exceeds r + 2C - 1 = " + to_string(bound));
    }
  }
}

GreedyResult run_greedy(const Instance& instance, const CertifiedProfile& profile) {
  const auto refs = flow_refs(instance);
  std::vector<std::size_t> first_ref(instance.size() + 1, 0);
  for (std::size_t j = 0; j < instance.size(); ++j) first_ref[j + 1] = first_ref[j] + instance.coflow(j).flows.size();

  Occupancy left(instance.left_count()), right(instance.right_count());
  GreedyResult out;
  out.trace.copy_slots.resize(refs.size());
  out.trace.finish.assign(instance.size(), 0);
  for (std::size_t j : profile.order()) {
    const Coflow& c = instance.coflow(j);
    for (std::size_t f = 0; f < c.flows.size(); ++f) {
      const Flow& flow = c.flows[f];
      auto& slots = out.trace.copy_slots[first_ref[j] + f];
      Slot t = c.release + 1;
      for (std::int64_t k = 0; k < flow.mult; ++k) {
        while (!left.free(flow.u, t) || !right.free(flow.v, t)) ++t;
        left.take(flow.u, t);
        right.take(flow.v, t);
        slots.push_back(t);
        out.schedule.add(t, ScheduleEntry{j, flow.u, flow.v});
        out.trace.finish[j] = std::max(out.trace.finish[j], t);
      }
    }
  }
  check_bound(instance, profile, out.trace.finish);
  return out;
}

}  // namespace

GreedyResult greedy(const Instance& instance, const CertifiedProfile& profile) {
  if (instance.has_releases() || profile.kind() != BlockLpKind::NoRelease) {
    throw std::invalid_argument("greedy needs a release-free instance; use greedy_r");
  }
  return run_greedy(instance, profile);
}

GreedyResult greedy_r(const Instance& instance, const CertifiedProfile& profile) {
  return run_greedy(instance, profile);
}

MultiplicityGreedyResult greedy_multiplicity(const Instance& instance, const CertifiedProfile& profile) {
  if (instance.has_releases()) throw std::invalid_argument("greedy_multiplicity does not support release dates");

  struct EdgeSet {
    std::map<std::tuple<std::size_t, int, int>, std::int64_t> content;
    std::map<int, std::int64_t> left, right;
    std::int64_t degree = 0;

    std::int64_t room(int u, int v) const {
      auto l = left.find(u);
      auto r = right.find(v);
      const std::int64_t used = std::max(l == left.end() ? 0 : l->second, r == right.end() ? 0 : r->second);
      return degree - used;
    }
    void add(std::size_t j, int u, int v, std::int64_t amount) {
      content[{j, u, v}] += amount;
      degree = std::max(degree, left[u] += amount);
      degree = std::max(degree, right[v] += amount);
    }
  };

  const auto& order = profile.order();
  std::vector<EdgeSet> sets(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    const std::size_t j = order[k];
    for (const Flow& f : instance.coflow(j).flows) {
      std::int64_t left_over = f.mult;
      for (std::size_t i = 0; i < k && left_over > 0; ++i) {
        const std::int64_t take = std::min(left_over, sets[i].room(f.u, f.v));
        if (take <= 0) continue;
        sets[i].add(j, f.u, f.v, take);
        left_over -= take;
      }
      if (left_over > 0) sets[k].add(j, f.u, f.v, left_over);
    }
  }

  MultiplicityGreedyResult out;
  out.finish.assign(instance.size(), 0);
  Slot offset = 0;
  for (const EdgeSet& set : sets) {
    out.set_degree.push_back(set.degree);
    if (set.content.empty()) continue;
    std::vector<Flow> edges;
    std::vector<std::size_t> owner;
    for (const auto& [key, count] : set.content) {
      const auto& [j, u, v] = key;
      edges.push_back(Flow{u, v, count});
      owner.push_back(j);
    }
    const MatchingDecomposition dec = decompose(edges);
    ++out.decompose_calls;
    Slot t = offset + 1;
    for (const ColorClass& cls : dec.classes) {
      std::vector<ScheduleEntry> entries;
      for (std::size_t item : cls.items) {
        entries.push_back(ScheduleEntry{owner[item], edges[item].u, edges[item].v});
        out.finish[owner[item]] = std::max(out.finish[owner[item]], t + cls.count - 1);
      }
      out.schedule.add_run(t, cls.count, std::move(entries));
      t += cls.count;
    }
    offset += set.degree;
  }
  check_bound(instance, profile, out.finish);
  return out;
}

}  // namespace coflow
