#include "coflow/oracle.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

namespace coflow {

namespace {

// nullopt stands for +infinity (no schedule within the horizon, or no budget).
using Value = std::optional<Rational>;

bool less(const Value& a, const Value& b) {
  if (!a) return false;
  if (!b) return true;
  return *a < *b;
}

Value plus(const Rational& a, const Value& b) {
  if (!b) return std::nullopt;
  return Rational(a + *b);
}

struct ItemType {
  std::size_t coflow = 0;
  int u = 0;
  int v = 0;
};

// Identical (u, v) flows of one coflow are merged into one item type.
struct Reduced {
  std::vector<ItemType> types;
  std::vector<std::int64_t> count;
  std::vector<std::vector<std::size_t>> of_coflow;
};

Reduced reduce(const Instance& instance) {
  Reduced out;
  out.of_coflow.resize(instance.size());
  std::map<std::tuple<std::size_t, int, int>, std::size_t> index;
  for (std::size_t j = 0; j < instance.size(); ++j) {
    for (const Flow& f : instance.coflow(j).flows) {
      auto [it, fresh] = index.try_emplace({j, f.u, f.v}, out.types.size());
      if (fresh) {
        out.types.push_back(ItemType{j, f.u, f.v});
        out.count.push_back(0);
        out.of_coflow[j].push_back(it->second);
      }
      out.count[it->second] += f.mult;
    }
  }
  return out;
}

void check_size(const Instance& instance, std::int64_t limit, const char* what) {
  if (instance.total_copies() > limit) {
    throw OracleRefused(std::string(what) + ": instance has " + std::to_string(instance.total_copies()) +
                        " unit copies, limit is " + std::to_string(limit));
  }
}

// Shared state walk for opt and the feasibility search.
class Search {
 public:
  Search(const Instance& instance, Slot horizon)
      : instance_(instance), red_(reduce(instance)), horizon_(horizon), left_used_(instance.left_count(), 0),
        right_used_(instance.right_count(), 0) {}

  bool done(const std::vector<std::int64_t>& rem, std::size_t j) const {
    return std::all_of(red_.of_coflow[j].begin(), red_.of_coflow[j].end(), [&](std::size_t k) { return rem[k] == 0; });
  }

  std::int64_t degree(const std::vector<std::int64_t>& rem, std::size_t j) const {
    std::map<int, std::int64_t> left, right;
    std::int64_t d = 0;
    for (std::size_t k : red_.of_coflow[j]) {
      if (rem[k] == 0) continue;
      d = std::max({d, left[red_.types[k].u] += rem[k], right[red_.types[k].v] += rem[k]});
    }
    return d;
  }

  // Earliest possible finish of unfinished coflow j after slot t.
  Slot earliest_finish(const std::vector<std::int64_t>& rem, std::size_t j, Slot t) const {
    return std::max(t, instance_.coflow(j).release) + degree(rem, j);
  }

  // Maximal matchings of the item types with remaining copies that are
  // released before slot s.
  std::vector<std::vector<std::size_t>> maximal_matchings(const std::vector<std::int64_t>& rem, Slot s) {
    std::vector<std::size_t> eligible;
    for (std::size_t k = 0; k < red_.types.size(); ++k) {
      if (rem[k] > 0 && instance_.coflow(red_.types[k].coflow).release < s) eligible.push_back(k);
    }
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> chosen;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == eligible.size()) {
        for (std::size_t k : eligible) {
          const ItemType& e = red_.types[k];
          if (!left_used_[e.u] && !right_used_[e.v]) return;
        }
        out.push_back(chosen);
        return;
      }
      const ItemType& e = red_.types[eligible[i]];
      if (!left_used_[e.u] && !right_used_[e.v]) {
        left_used_[e.u] = right_used_[e.v] = 1;
        chosen.push_back(eligible[i]);
        rec(i + 1);
        chosen.pop_back();
        left_used_[e.u] = right_used_[e.v] = 0;
      }
      rec(i + 1);
    };
    rec(0);
    return out;
  }

  // Slot the next release makes usable, for when nothing is eligible.
  Slot next_release(const std::vector<std::int64_t>& rem) const {
    Slot r = horizon_;
    for (std::size_t j = 0; j < instance_.size(); ++j) {
      if (!done(rem, j)) r = std::min(r, instance_.coflow(j).release);
    }
    return r;
  }

  const Instance& instance_;
  Reduced red_;
  Slot horizon_;

 private:
  std::vector<char> left_used_, right_used_;
};

using Key = std::pair<Slot, std::vector<std::int64_t>>;

class BranchAndBound : public Search {
 public:
  using Search::Search;

  struct Entry {
    Value value;
    bool exact = false;
  };

  Value lower_bound(const std::vector<std::int64_t>& rem, Slot t) const {
    Rational lb = 0;
    for (std::size_t j = 0; j < instance_.size(); ++j) {
      if (done(rem, j)) continue;
      const Slot f = earliest_finish(rem, j, t);
      if (f > horizon_) return std::nullopt;
      lb += instance_.coflow(j).weight * f;
    }
    return lb;
  }

  // Cost of the unfinished coflows from state (t, rem) on. Exact when below
  // the budget, otherwise a lower bound.
  Value solve(Slot t, const std::vector<std::int64_t>& rem, const Value& budget) {
    ++nodes;
    Key key{t, rem};
    if (auto it = memo_.find(key); it != memo_.end()) {
      if (it->second.exact || !less(it->second.value, budget)) {
        ++memo_hits;
        return it->second.value;
      }
    }
    const Value lb = lower_bound(rem, t);
    if (!less(lb, budget)) return remember(key, lb, false);
    if (*lb == 0) return remember(key, Rational(0), true);

    auto options = children(t, rem);
    Value best;
    for (const Child& c : options) {
      const Value limit = less(budget, best) ? budget : best;
      if (!less(plus(c.slot_cost, c.bound), limit)) break;
      const Value child_budget = limit ? Value(Rational(*limit - c.slot_cost)) : std::nullopt;
      const Value v = plus(c.slot_cost, solve(c.slot, c.rem, child_budget));
      if (less(v, best)) best = v;
    }
    // Pruned siblings only guarantee the budget.
    if (!less(best, budget)) best = budget;
    const bool exact = less(best, budget);
    return remember(key, best, exact);
  }

  struct Child {
    Slot slot = 0;
    std::vector<std::int64_t> rem;
    Rational slot_cost;
    Value bound;
    std::vector<std::size_t> matching;
  };

  std::vector<Child> children(Slot t, const std::vector<std::int64_t>& rem) {
    std::vector<Child> out;
    Slot s = t + 1;
    auto matchings = maximal_matchings(rem, s);
    if (matchings.size() == 1 && matchings[0].empty()) {
      const Slot jump = std::max(t, next_release(rem));
      Child c{jump, rem, 0, lower_bound(rem, jump), {}};
      out.push_back(std::move(c));
      return out;
    }
    for (auto& m : matchings) {
      Child c{s, rem, 0, std::nullopt, m};
      for (std::size_t k : m) --c.rem[k];
      for (std::size_t j = 0; j < instance_.size(); ++j) {
        if (!done(rem, j) && done(c.rem, j)) c.slot_cost += instance_.coflow(j).weight * s;
      }
      c.bound = lower_bound(c.rem, s);
      out.push_back(std::move(c));
    }
    std::stable_sort(out.begin(), out.end(), [](const Child& a, const Child& b) {
      return less(plus(a.slot_cost, a.bound), plus(b.slot_cost, b.bound));
    });
    return out;
  }

  Schedule reconstruct(Slot t, std::vector<std::int64_t> rem, Value total) {
    Schedule out;
    while (total && *total > 0) {
      bool moved = false;
      for (Child& c : children(t, rem)) {
        const Value v = plus(c.slot_cost, solve(c.slot, c.rem, std::nullopt));
        if (v && *v == *total) {
          for (std::size_t k : c.matching) {
            const ItemType& e = red_.types[k];
            out.add(c.slot, ScheduleEntry{e.coflow, e.u, e.v});
          }
          total = Rational(*total - c.slot_cost);
          t = c.slot;
          rem = std::move(c.rem);
          moved = true;
          break;
        }
      }
      if (!moved) throw std::logic_error("oracle could not rebuild its optimal schedule");
    }
    return out;
  }

  std::uint64_t nodes = 0;
  std::uint64_t memo_hits = 0;

 private:
  Value remember(const Key& key, const Value& v, bool exact) {
    Entry& e = memo_[key];
    if (!e.exact) e = Entry{v, exact};
    return e.exact ? e.value : v;
  }

  std::map<Key, Entry> memo_;
};

Slot default_horizon(const Instance& instance, const OracleOptions& options) {
  return options.horizon.value_or(instance.max_release() + instance.total_copies());
}

}  // namespace

OracleResult opt(const Instance& instance, const OracleOptions& options) {
  check_size(instance, options.copy_limit, "opt");
  BranchAndBound bnb(instance, default_horizon(instance, options));
  const Value best = bnb.solve(0, bnb.red_.count, std::nullopt);
  if (!best) throw OracleRefused("opt: no schedule fits in the horizon");
  OracleResult out;
  out.schedule = bnb.reconstruct(0, bnb.red_.count, best);
  out.report = cost(instance, out.schedule);
  if (out.report.total != *best) throw std::logic_error("oracle schedule cost differs from its search value");
  out.nodes = bnb.nodes;
  out.memo_hits = bnb.memo_hits;
  return out;
}

Rational exhaustive_opt(const Instance& instance, const OracleOptions& options) {
  check_size(instance, options.copy_limit, "exhaustive_opt");
  const Reduced red = reduce(instance);
  const Slot horizon = default_horizon(instance, options);
  std::vector<std::int64_t> rem = red.count;
  std::vector<Slot> finish(instance.size(), 0);
  std::int64_t left_copies = instance.total_copies();
  Value best;

  std::vector<char> lu(instance.left_count(), 0), rv(instance.right_count(), 0);
  std::function<void(Slot)> slot;
  // Every subset of the remaining types that forms a matching, per slot.
  std::function<void(Slot, std::size_t)> pick = [&](Slot t, std::size_t k) {
    if (k == red.types.size()) {
      const auto saved_left = lu, saved_right = rv;
      std::fill(lu.begin(), lu.end(), 0);
      std::fill(rv.begin(), rv.end(), 0);
      slot(t + 1);
      lu = saved_left;
      rv = saved_right;
      return;
    }
    pick(t, k + 1);
    const ItemType& e = red.types[k];
    if (rem[k] == 0 || lu[e.u] || rv[e.v] || instance.coflow(e.coflow).release >= t) return;
    lu[e.u] = rv[e.v] = 1;
    --rem[k];
    --left_copies;
    const Slot before = finish[e.coflow];
    finish[e.coflow] = t;
    pick(t, k + 1);
    finish[e.coflow] = before;
    ++left_copies;
    ++rem[k];
    lu[e.u] = rv[e.v] = 0;
  };
  slot = [&](Slot t) {
    if (left_copies == 0) {
      const Rational total = weighted_sum(instance, finish);
      if (less(total, best)) best = total;
      return;
    }
    if (t > horizon) return;
    pick(t, 0);
  };
  slot(1);
  if (!best) throw OracleRefused("exhaustive_opt: no schedule fits in the horizon");
  return *best;
}

bool deadline_feasible_integral(const Instance& instance, const DeadlineProfile& profile,
                                const OracleOptions& options) {
  check_size(instance, options.feasibility_copy_limit, "deadline_feasible_integral");
  if (profile.deadlines.size() != instance.size()) throw std::invalid_argument("profile size does not match instance");
  std::vector<Slot> due(instance.size());
  Slot horizon = 0;
  for (std::size_t j = 0; j < instance.size(); ++j) {
    due[j] = to_int64(floor_of(profile.deadlines[j]));
    horizon = std::max(horizon, due[j]);
  }
  Search search(instance, horizon);
  std::map<Key, bool> failed;

  std::function<bool(Slot, const std::vector<std::int64_t>&)> feasible = [&](Slot t,
                                                                            const std::vector<std::int64_t>& rem) {
    bool all_done = true;
    for (std::size_t j = 0; j < instance.size(); ++j) {
      if (search.done(rem, j)) continue;
      all_done = false;
      if (search.earliest_finish(rem, j, t) > due[j]) return false;
    }
    if (all_done) return true;
    Key key{t, rem};
    if (failed.count(key)) return false;
    auto matchings = search.maximal_matchings(rem, t + 1);
    if (matchings.size() == 1 && matchings[0].empty()) {
      if (feasible(std::max(t, search.next_release(rem)), rem)) return true;
    } else {
      for (const auto& m : matchings) {
        std::vector<std::int64_t> next = rem;
        for (std::size_t k : m) --next[k];
        if (feasible(t + 1, next)) return true;
      }
    }
    failed.emplace(std::move(key), true);
    return false;
  };
  return feasible(0, search.red_.count);
}

std::pair<Instance, DeadlineProfile> a1_fixture() {
  // Edge lists as (u, v) with 1-based vertices.
  const std::vector<std::vector<std::pair<int, int>>> edges = {
      {{6, 2}, {7, 7}},
      {{6, 4}, {7, 5}},
      {{6, 1}, {7, 3}},
      {{1, 1}, {2, 1}, {3, 3}, {4, 3}, {1, 4}, {3, 4}, {2, 5}, {4, 5}, {2, 2}, {3, 2}},
  };
  std::vector<Coflow> coflows;
  for (const auto& list : edges) {
    Coflow c;
    for (auto [u, v] : list) c.flows.push_back(Flow{u - 1, v - 1, 1});
    coflows.push_back(std::move(c));
  }
  Instance instance(7, 7, std::move(coflows));
  DeadlineProfile profile = make_profile(instance, {from_int(1), from_int(2), from_int(3), from_int(3)});
  return {std::move(instance), std::move(profile)};
}

}  // namespace coflow
