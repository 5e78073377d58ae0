#include "coflow/cbf.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include <json.hpp>

#include "coflow/coloring.hpp"
#include "coflow/lp.hpp"

namespace coflow {

namespace {

void check_parameters(std::int64_t tau, std::int64_t lambda) {
  if (tau < 2) throw std::invalid_argument("tau must be at least 2");
  const bool ok = lambda == 0 || (lambda >= 2 && lambda <= tau - 1) || lambda == tau + 1;
  if (!ok) throw std::invalid_argument("lambda " + std::to_string(lambda) + " not allowed for tau " + std::to_string(tau));
}

// Lattice {lambda + i tau : i >= 0} for lambda > 0, {i tau : i >= 1} for 0.
struct Lattice {
  std::int64_t tau;
  std::int64_t lambda;

  std::int64_t at_least(const Rational& x) const {
    if (lambda == 0) return tau * std::max<std::int64_t>(1, to_int64(ceil_of(x / tau)));
    if (x <= lambda) return lambda;
    return lambda + tau * to_int64(ceil_of((x - lambda) / tau));
  }
  std::int64_t above(const Rational& x) const {
    if (lambda == 0) return tau * (to_int64(floor_of(x / tau)) + 1);
    if (x < lambda) return lambda;
    return lambda + tau * (to_int64(floor_of((x - lambda) / tau)) + 1);
  }
  std::int64_t count_upto(std::int64_t y) const {
    if (lambda == 0) return y / tau;
    if (y < lambda) return 0;
    return (y - lambda) / tau + 1;
  }
};

BlockStructure assemble(const DeadlineProfile& profile, std::int64_t tau, std::int64_t lambda,
                        std::vector<std::int64_t> deadline, std::vector<std::int64_t> release) {
  BlockStructure bs;
  bs.tau = tau;
  bs.lambda = lambda;
  std::set<std::int64_t> cuts(deadline.begin(), deadline.end());
  for (std::int64_t r : release)
    if (r > 0) cuts.insert(r);
  bs.ends.assign(cuts.begin(), cuts.end());
  for (std::size_t j = 0; j < profile.deadlines.size(); ++j) {
    auto last = std::lower_bound(bs.ends.begin(), bs.ends.end(), deadline[j]);
    bs.last_block.push_back(static_cast<std::size_t>(last - bs.ends.begin()));
    // first block whose start is >= the rounded release
    auto first = std::upper_bound(bs.ends.begin(), bs.ends.end(), release[j]);
    bs.first_block.push_back(static_cast<std::size_t>(first - bs.ends.begin()));
  }
  bs.rounded_deadline = std::move(deadline);
  bs.rounded_release = std::move(release);
  return bs;
}

}  // namespace

std::vector<std::int64_t> lambda_offsets(std::int64_t tau) {
  if (tau < 2) throw std::invalid_argument("tau must be at least 2");
  std::vector<std::int64_t> out{0};
  for (std::int64_t l = 2; l < tau; ++l) out.push_back(l);
  out.push_back(tau + 1);
  return out;
}

BlockStructure build_blocks(const DeadlineProfile& profile, std::int64_t tau, std::int64_t lambda) {
  check_parameters(tau, lambda);
  const Lattice lat{tau, lambda};
  std::vector<std::int64_t> deadline, release(profile.deadlines.size(), 0);
  for (const Rational& c : profile.deadlines) deadline.push_back(lat.at_least(c));
  return assemble(profile, tau, lambda, std::move(deadline), std::move(release));
}

BlockStructure build_release_blocks(const DeadlineProfile& profile, std::int64_t tau, std::int64_t lambda) {
  check_parameters(tau, lambda);
  const Lattice lat{tau, lambda};
  std::vector<std::int64_t> deadline, release;
  for (std::size_t j = 0; j < profile.deadlines.size(); ++j) {
    deadline.push_back(lat.above(profile.deadlines[j]) + tau);
    const std::int64_t r = profile.releases.at(j);
    release.push_back(r == 0 ? 0 : lat.at_least(from_int(r)));
  }
  return assemble(profile, tau, lambda, std::move(deadline), std::move(release));
}

Rational trial_bound(const Rational& deadline, std::int64_t tau, std::int64_t lambda, bool release_variant) {
  check_parameters(tau, lambda);
  const Lattice lat{tau, lambda};
  const std::int64_t rounded = release_variant ? lat.above(deadline) + tau : lat.at_least(deadline);
  return from_int(rounded + 2 * lat.count_upto(rounded));
}

// ---------------------------------------------------------------------------

std::string RoundingAudit::jsonl() const {
  std::string out;
  for (std::size_t i = 0; i < iterations.size(); ++i) {
    const RoundingIteration& it = iterations[i];
    nlohmann::json j = {{"iteration", i},
                        {"fractional_vars", it.fractional_vars},
                        {"active_copies", it.active_copies},
                        {"rows", it.rows},
                        {"dropped", it.dropped},
                        {"max_dropped_fractional", it.max_dropped_fractional},
                        {"objective_shift", it.objective_shift},
                        {"newly_fixed", it.newly_fixed}};
    out += j.dump() + "\n";
  }
  return out;
}

namespace {

using RowKey = std::tuple<std::size_t, int, int>;  // block, side, vertex

}  // namespace

BlockAssignment iterated_round(const Instance& instance, const BlockStructure& blocks) {
  const auto refs = flow_refs(instance);
  const std::size_t nb = blocks.size();
  auto flow_of = [&](std::size_t g) -> const Flow& { return instance.coflow(refs[g].coflow).flows[refs[g].flow]; };

  // Initial LP with right-hand sides p_e.
  LinearProgram lp;
  std::vector<std::vector<long>> var(refs.size(), std::vector<long>(nb, -1));
  std::map<RowKey, std::vector<LpTerm>> degree;
  for (std::size_t g = 0; g < refs.size(); ++g) {
    const Flow& f = flow_of(g);
    const std::size_t j = refs[g].coflow;
    std::vector<LpTerm> total;
    for (std::size_t b = blocks.first_block[j]; b <= blocks.last_block[j] && b < nb; ++b) {
      const std::size_t v = lp.add_variable(from_int(f.mult));
      var[g][b] = static_cast<long>(v);
      total.push_back({v, 1});
      degree[{b, 0, f.u}].push_back({v, 1});
      degree[{b, 1, f.v}].push_back({v, 1});
    }
    lp.add_row(std::move(total), Relation::Equal, from_int(f.mult));
  }
  for (auto& [key, terms] : degree) lp.add_row(std::move(terms), Relation::LessEqual, from_int(blocks.length(std::get<0>(key))));

  const FeasibilityResult first = feasible(lp);
  if (!first.feasible) throw RoundingInfeasible("block LP is infeasible for the rounded deadlines");

  BlockAssignment out;
  out.audit.lp_solves = 1;
  out.count.assign(refs.size(), std::vector<std::int64_t>(nb, 0));
  std::map<RowKey, std::int64_t> load;

  // Fix integral parts and split the fractional rest into unit copies.
  struct Var {
    std::size_t copy;
    std::size_t flow;
    std::size_t block;
    Rational value;
    bool active;
  };
  std::vector<Var> vars;
  std::size_t copies = 0;
  for (std::size_t g = 0; g < refs.size(); ++g) {
    const Flow& f = flow_of(g);
    Rational room = 1;
    bool open = false;
    for (std::size_t b = 0; b < nb; ++b) {
      if (var[g][b] < 0) continue;
      const Rational& x = first.witness.values[static_cast<std::size_t>(var[g][b])];
      const Integer whole = floor_of(x);
      const std::int64_t w = to_int64(whole);
      out.count[g][b] += w;
      load[{b, 0, f.u}] += w;
      load[{b, 1, f.v}] += w;
      Rational part = x - Rational(whole);
      while (sgn(part) > 0) {
        if (!open) {
          open = true;
          room = 1;
          ++copies;
        }
        Rational take = part < room ? part : room;
        vars.push_back(Var{copies - 1, g, b, take, true});
        part -= take;
        room -= take;
        if (sgn(room) == 0) open = false;
      }
    }
    if (open) throw std::logic_error("fractional parts of a flow do not sum to an integer");
  }

  std::set<RowKey> dropped;
  std::size_t min_fixed = 0;
  bool first_round = true;
  while (true) {
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (vars[i].active) active.push_back(i);
    if (active.empty()) break;

    RoundingIteration it;
    it.fractional_vars = active.size();

    std::map<RowKey, std::vector<std::size_t>> incident;
    std::set<std::size_t> live_copies;
    for (std::size_t i : active) {
      const Flow& f = flow_of(vars[i].flow);
      incident[{vars[i].block, 0, f.u}].push_back(i);
      incident[{vars[i].block, 1, f.v}].push_back(i);
      live_copies.insert(vars[i].copy);
    }
    std::vector<RowKey> rows;
    for (const auto& [key, list] : incident) {
      if (dropped.contains(key)) continue;
      if (list.size() <= 3) {
        dropped.insert(key);
        ++it.dropped;
        it.max_dropped_fractional = std::max(it.max_dropped_fractional, list.size());
        continue;
      }
      rows.push_back(key);
    }
    it.rows = rows.size();
    it.active_copies = live_copies.size();
    if (it.rows + it.active_copies > it.fractional_vars) {
      out.audit.counting_ok = false;
      throw std::logic_error("rounding LP has more constraints than fractional variables");
    }
    std::optional<RowKey> shifted;
    if (it.rows + it.active_copies == it.fractional_vars && !rows.empty()) {
      shifted = rows.front();
      it.objective_shift = true;
    }

    LinearProgram step;
    std::map<std::size_t, std::size_t> column;  // var index -> column
    std::map<std::size_t, std::vector<LpTerm>> copy_rows;
    for (std::size_t i : active) {
      const std::size_t c = step.add_variable(Rational(1));
      column[i] = c;
      copy_rows[vars[i].copy].push_back({c, 1});
    }
    for (auto& [copy, terms] : copy_rows) step.add_row(std::move(terms), Relation::Equal, 1);
    for (const RowKey& key : rows) {
      std::vector<LpTerm> terms;
      for (std::size_t i : incident[key]) terms.push_back({column[i], 1});
      if (shifted && key == *shifted) {
        for (const LpTerm& t : terms) step.set_cost(t.index, 1);
        continue;
      }
      const std::int64_t cap = blocks.length(std::get<0>(key)) - load[key];
      step.add_row(std::move(terms), Relation::LessEqual, from_int(cap));
    }

    const VertexSolution sol = solve(step);
    ++out.audit.lp_solves;
    if (!sol.has_point()) throw std::logic_error("rounding LP lost feasibility: " + to_string(sol.status));

    for (std::size_t i : active) {
      Var& v = vars[i];
      v.value = sol.values[column[i]];
      if (sgn(v.value) == 0 || v.value == 1) {
        v.active = false;
        ++it.newly_fixed;
        if (v.value == 1) {
          const Flow& f = flow_of(v.flow);
          out.count[v.flow][v.block] += 1;
          load[{v.block, 0, f.u}] += 1;
          load[{v.block, 1, f.v}] += 1;
        }
      }
    }
    if (it.newly_fixed == 0) throw std::logic_error("rounding iteration fixed no variable");
    min_fixed = first_round ? it.newly_fixed : std::min(min_fixed, it.newly_fixed);
    first_round = false;
    out.audit.max_dropped_fractional = std::max(out.audit.max_dropped_fractional, it.max_dropped_fractional);
    out.audit.iterations.push_back(it);
  }
  out.audit.min_newly_fixed = min_fixed;

  out.nominal.resize(nb);
  out.realized.assign(nb, 0);
  for (std::size_t b = 0; b < nb; ++b) out.nominal[b] = blocks.length(b);
  for (const auto& [key, l] : load) {
    const std::size_t b = std::get<0>(key);
    out.realized[b] = std::max(out.realized[b], l);
    out.audit.max_violation = std::max(out.audit.max_violation, l - out.nominal[b]);
  }
  if (out.audit.max_violation > 2) throw std::logic_error("rounded block exceeds its length by more than 2");
  return out;
}

Schedule schedule_blocks(const Instance& instance, const BlockStructure& blocks, const BlockAssignment& assignment,
                         std::int64_t start_offset) {
  const auto refs = flow_refs(instance);
  Schedule out;
  Slot end = start_offset;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const Slot start = std::max(end, start_offset + blocks.start(b));
    std::vector<Flow> edges;
    std::vector<std::size_t> owner;
    for (std::size_t g = 0; g < refs.size(); ++g) {
      const std::int64_t n = assignment.count[g][b];
      if (n == 0) continue;
      const Flow& f = instance.coflow(refs[g].coflow).flows[refs[g].flow];
      edges.push_back(Flow{f.u, f.v, n});
      owner.push_back(refs[g].coflow);
    }
    if (edges.empty()) {
      end = start;
      continue;
    }
    const MatchingDecomposition dec = decompose(edges);
    Slot t = start + 1;
    for (const ColorClass& cls : dec.classes) {
      std::vector<ScheduleEntry> entries;
      for (std::size_t item : cls.items) entries.push_back(ScheduleEntry{owner[item], edges[item].u, edges[item].v});
      out.add_run(t, cls.count, std::move(entries));
      t += cls.count;
    }
    end = start + dec.degree;
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

Rational weighted_bound(const Instance& instance, const DeadlineProfile& profile, std::int64_t tau,
                        const Rational& additive) {
  Rational total = 0;
  const Rational slope = make_rational(tau + 2, tau);
  for (std::size_t j = 0; j < instance.size(); ++j) {
    total += instance.coflow(j).weight * (slope * profile.deadlines[j] + additive);
  }
  return total;
}

Rational cbf_additive(std::int64_t tau) { return make_rational(tau, 2) + make_rational(5, 2) - make_rational(2, tau); }

}  // namespace

Rational cbf_weighted_bound(const Instance& instance, const DeadlineProfile& profile, std::int64_t tau) {
  return weighted_bound(instance, profile, tau, cbf_additive(tau));
}

Rational cbf_r_weighted_bound(const Instance& instance, const DeadlineProfile& profile, std::int64_t tau) {
  return weighted_bound(instance, profile, tau, make_rational(3 * tau, 2) + make_rational(9, 2) - make_rational(2, tau));
}

Rational ckbf_weighted_bound(const Instance& instance, const DeadlineProfile& profile, std::int64_t tau,
                             std::int64_t b) {
  Rational total = 0;
  const Rational slope = make_rational(tau + 2, tau);
  for (std::size_t j = 0; j < instance.size(); ++j) {
    const Rational& c = profile.deadlines[j];
    const Rational& w = instance.coflow(j).weight;
    if (c < b + 1) total += w * b;
    else total += w * (slope * c + cbf_additive(tau) + b);
  }
  return total;
}

CbfTrial cbf_trial(const Instance& instance, const CertifiedProfile& profile, std::int64_t tau, std::int64_t lambda,
                   bool release_variant) {
  CbfTrial trial;
  trial.lambda = lambda;
  trial.blocks = release_variant ? build_release_blocks(profile.profile(), tau, lambda)
                                 : build_blocks(profile.profile(), tau, lambda);
  trial.assignment = iterated_round(instance, trial.blocks);
  Schedule schedule = schedule_blocks(instance, trial.blocks, trial.assignment);
  CostReport report = cost(instance, schedule);
  trial.cost = report.total;
  trial.finish = report.completion;
  for (std::size_t j = 0; j < instance.size(); ++j) {
    const Rational bound = trial_bound(profile.deadline(j), tau, lambda, release_variant);
    if (from_int(trial.finish[j]) > bound) {
      throw std::logic_error("coflow " + std::to_string(j) + " finishes at " + std::to_string(trial.finish[j]) +
                             " beyond its block bound " + to_string(bound));
    }
  }
  return trial;
}

namespace {

CbfResult run_trials(const Instance& instance, const CertifiedProfile& profile, std::int64_t tau, bool release_variant) {
  CbfResult out;
  const Rational slope = make_rational(tau + 2, tau);
  std::optional<std::size_t> best;
  for (std::int64_t lambda : lambda_offsets(tau)) {
    CbfTrial trial = cbf_trial(instance, profile, tau, lambda, release_variant);
    if (lambda == 0) {
      // hard per-coflow bound of the plain rounding
      const std::int64_t extra = release_variant ? 2 * tau + 4 : tau + 2;
      for (std::size_t j = 0; j < instance.size(); ++j) {
        const Rational hard = slope * profile.deadline(j) + extra;
        if (from_int(trial.finish[j]) > hard) {
          throw std::logic_error("coflow " + std::to_string(j) + " exceeds (tau+2)/tau C + " + std::to_string(extra));
        }
        if (release_variant && from_int(trial.finish[j]) > slope * profile.deadline(j) + 2 * tau + 2) {
          ++out.tight_bound_misses;
        }
      }
    }
    if (!best || trial.cost < out.trials[*best].cost) best = out.trials.size();
    out.trials.push_back(std::move(trial));
  }
  const CbfTrial& win = out.trials[*best];
  out.lambda = win.lambda;
  out.cost = win.cost;
  out.finish = win.finish;
  out.schedule = schedule_blocks(instance, win.blocks, win.assignment);
  out.bound = release_variant ? cbf_r_weighted_bound(instance, profile.profile(), tau)
                              : cbf_weighted_bound(instance, profile.profile(), tau);
  if (out.cost > out.bound) throw std::logic_error("weighted bound violated: " + to_string(out.cost) + " > " + to_string(out.bound));
  return out;
}

}  // namespace

CbfResult cbf(const Instance& instance, const CertifiedProfile& profile, std::int64_t tau) {
  if (instance.has_releases() || profile.kind() != BlockLpKind::NoRelease) {
    throw std::invalid_argument("cbf needs a release-free instance; use cbf_r");
  }
  return run_trials(instance, profile, tau, false);
}

CbfResult cbf_r(const Instance& instance, const CertifiedProfile& profile, std::int64_t tau) {
  return run_trials(instance, profile, tau, true);
}

CkbfResult ckbf(const Instance& instance, const CertifiedProfile& profile, std::int64_t tau, std::int64_t b) {
  if (b < 1) throw std::invalid_argument("b must be at least 1");
  if (instance.has_releases() || profile.kind() != BlockLpKind::NoRelease) {
    throw std::invalid_argument("ckbf needs a release-free instance");
  }
  CkbfResult out;
  std::vector<std::size_t> rest;
  std::vector<Flow> prefix_edges;
  std::vector<std::size_t> prefix_owner;
  for (std::size_t j = 0; j < instance.size(); ++j) {
    if (profile.deadline(j) < b + 1) {
      out.prefix.push_back(j);
      for (const Flow& f : instance.coflow(j).flows) {
        prefix_edges.push_back(f);
        prefix_owner.push_back(j);
      }
    } else {
      rest.push_back(j);
    }
  }
  out.prefix_degree = max_degree(prefix_edges);
  if (out.prefix_degree > b) {
    throw StructuralError("coflows with deadline below b+1 have degree " + std::to_string(out.prefix_degree) +
                          " > b; profile is not block-LP feasible");
  }
  if (!prefix_edges.empty()) {
    const MatchingDecomposition dec = decompose(prefix_edges);
    Slot t = 1;
    for (const ColorClass& cls : dec.classes) {
      std::vector<ScheduleEntry> entries;
      for (std::size_t item : cls.items) {
        entries.push_back(ScheduleEntry{prefix_owner[item], prefix_edges[item].u, prefix_edges[item].v});
      }
      out.schedule.add_run(t, cls.count, std::move(entries));
      t += cls.count;
    }
  }
  if (!rest.empty()) {
    const Instance sub = instance.restricted(rest);
    std::vector<Rational> deadlines;
    for (std::size_t j : rest) deadlines.push_back(profile.deadline(j));
    const CertifiedProfile sub_profile = certify(sub, make_profile(sub, std::move(deadlines)));
    CbfResult inner = cbf(sub, sub_profile, tau);
    for (const SlotRun& run : inner.schedule.runs()) {
      std::vector<ScheduleEntry> entries = run.entries;
      for (ScheduleEntry& e : entries) e.coflow = rest[e.coflow];
      out.schedule.add_run(run.first + b, run.length, std::move(entries));
    }
    out.rest = std::move(inner);
  }
  const CostReport report = cost(instance, out.schedule);
  out.cost = report.total;
  out.finish = report.completion;
  out.bound = ckbf_weighted_bound(instance, profile.profile(), tau, b);
  if (out.cost > out.bound) throw std::logic_error("ckbf weighted bound violated");
  return out;
}

}  // namespace coflow
