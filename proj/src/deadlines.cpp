#include "coflow/deadlines.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <tuple>

namespace coflow {

std::vector<FlowRef> flow_refs(const Instance& instance) {
  std::vector<FlowRef> refs;
  for (std::size_t j = 0; j < instance.size(); ++j)
    for (std::size_t f = 0; f < instance.coflow(j).flows.size(); ++f) refs.push_back({j, f});
  return refs;
}

Rational DeadlineProfile::weighted_sum(const Instance& instance) const {
  Rational total = 0;
  for (std::size_t j = 0; j < deadlines.size(); ++j) total += instance.coflow(j).weight * deadlines[j];
  return total;
}

DeadlineProfile make_profile(const Instance& instance, std::vector<Rational> deadlines, std::optional<Rational> theta) {
  if (deadlines.size() != instance.size()) throw std::invalid_argument("profile size does not match instance");
  DeadlineProfile p;
  p.releases.reserve(instance.size());
  for (std::size_t j = 0; j < instance.size(); ++j) {
    const std::int64_t r = instance.coflow(j).release;
    if (deadlines[j] <= r) {
      throw std::invalid_argument("deadline of coflow " + std::to_string(j) + " must exceed its release");
    }
    p.releases.push_back(r);
  }
  p.order.resize(deadlines.size());
  std::iota(p.order.begin(), p.order.end(), std::size_t{0});
  std::stable_sort(p.order.begin(), p.order.end(),
                   [&](std::size_t a, std::size_t b) { return deadlines[a] < deadlines[b]; });
  p.deadlines = std::move(deadlines);
  p.theta = std::move(theta);
  return p;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<Flow> all_flows(const Instance& instance) {
  std::vector<Flow> out;
  for (const Coflow& c : instance.coflows()) out.insert(out.end(), c.flows.begin(), c.flows.end());
  return out;
}

std::int64_t deadline_horizon(const Instance& instance) {
  return instance.max_release() + 2 * max_degree(all_flows(instance));
}

// Adds one "<= cap" row per (interval, vertex) touched by at least `min_vars`
// columns.
void add_vertex_rows(LinearProgram& lp, const std::vector<DeadlineLp::Cell>& cells, const Instance& instance,
                     const std::vector<FlowRef>& refs, std::size_t min_vars,
                     const std::function<Rational(const Rational&, const Rational&)>& capacity) {
  using Key = std::tuple<Rational, Rational, int, int>;  // start, end, side, vertex
  std::map<Key, std::vector<LpTerm>> rows;
  for (const auto& cell : cells) {
    const Flow& f = instance.coflow(refs[cell.flow].coflow).flows[refs[cell.flow].flow];
    rows[{cell.start, cell.end, 0, f.u}].push_back({cell.var, 1});
    rows[{cell.start, cell.end, 1, f.v}].push_back({cell.var, 1});
  }
  for (auto& [key, terms] : rows) {
    if (terms.size() < min_vars) continue;
    const auto& [start, end, side, vertex] = key;
    lp.add_row(std::move(terms), Relation::LessEqual, capacity(start, end),
               std::string(side == 0 ? "L" : "R") + std::to_string(vertex) + "@" + to_string(end));
  }
}

}  // namespace

DeadlineLp build_lp_d(const Instance& instance) {
  DeadlineLp out;
  const auto refs = flow_refs(instance);
  out.horizon = deadline_horizon(instance);
  for (std::size_t j = 0; j < instance.size(); ++j) {
    out.completion_var.push_back(out.lp.add_variable(std::nullopt, "c" + std::to_string(j)));
    out.lp.set_cost(out.completion_var.back(), instance.coflow(j).weight);
  }
  for (std::size_t g = 0; g < refs.size(); ++g) {
    const Coflow& c = instance.coflow(refs[g].coflow);
    const Flow& f = c.flows[refs[g].flow];
    for (std::int64_t copy = 0; copy < f.mult; ++copy) {
      std::vector<LpTerm> charge, total;
      for (std::int64_t t = c.release + 1; t <= out.horizon; ++t) {
        const std::size_t var = out.lp.add_variable(
            Rational(1), "x" + std::to_string(t) + "_" + std::to_string(g) + "_" + std::to_string(copy));
        out.cells.push_back({g, var, from_int(t - 1), from_int(t)});
        charge.push_back({var, from_int(t)});
        total.push_back({var, 1});
      }
      charge.push_back({out.completion_var[refs[g].coflow], -1});
      out.lp.add_row(std::move(charge), Relation::LessEqual, 0);
      out.lp.add_row(std::move(total), Relation::Equal, 1);
    }
  }
  add_vertex_rows(out.lp, out.cells, instance, refs, 2, [](const Rational&, const Rational&) { return Rational(1); });
  return out;
}

DeadlineLp build_lp_d_intervals(const Instance& instance, const Rational& epsilon) {
  if (epsilon <= 0) throw std::invalid_argument("epsilon must be positive");
  DeadlineLp out;
  const auto refs = flow_refs(instance);
  out.horizon = deadline_horizon(instance);

  std::set<std::int64_t> points;
  Rational power = 1;
  const Rational base = 1 + epsilon;
  while (true) {
    const std::int64_t p = to_int64(floor_of(power));
    points.insert(p);
    if (p >= out.horizon) break;
    power *= base;
  }
  for (const Coflow& c : instance.coflows())
    if (c.release > 0) points.insert(c.release);
  std::vector<std::int64_t> t(points.begin(), points.end());
  t.insert(t.begin(), 0);

  for (std::size_t j = 0; j < instance.size(); ++j) {
    out.completion_var.push_back(out.lp.add_variable(std::nullopt, "c" + std::to_string(j)));
    out.lp.set_cost(out.completion_var.back(), instance.coflow(j).weight);
  }
  for (std::size_t g = 0; g < refs.size(); ++g) {
    const Coflow& c = instance.coflow(refs[g].coflow);
    const Flow& f = c.flows[refs[g].flow];
    std::vector<LpTerm> charge, total;
    for (std::size_t i = 1; i < t.size(); ++i) {
      if (t[i - 1] < c.release) continue;
      const std::size_t var =
          out.lp.add_variable(from_int(f.mult), "x" + std::to_string(t[i]) + "_" + std::to_string(g));
      out.cells.push_back({g, var, from_int(t[i - 1]), from_int(t[i])});
      charge.push_back({var, from_int(t[i])});
      total.push_back({var, 1});
    }
    charge.push_back({out.completion_var[refs[g].coflow], -from_int(f.mult)});
    out.lp.add_row(std::move(charge), Relation::LessEqual, 0);
    out.lp.add_row(std::move(total), Relation::Equal, from_int(f.mult));
  }
  add_vertex_rows(out.lp, out.cells, instance, refs, 1,
                  [](const Rational& start, const Rational& end) { return Rational(end - start); });
  return out;
}

FractionalSchedule solve_deadline_lp(const Instance& instance, const DeadlineLp& dlp) {
  const VertexSolution sol = solve(dlp.lp);
  if (sol.status != LpStatus::Optimal) throw LpFailure("deadline LP not optimal: " + to_string(sol.status));
  const auto refs = flow_refs(instance);
  std::vector<std::map<std::pair<Rational, Rational>, Rational>> acc(refs.size());
  for (const auto& cell : dlp.cells) {
    if (cell.flow >= refs.size()) throw std::invalid_argument("deadline LP was built for a different instance");
    const Rational& v = sol.values[cell.var];
    if (sgn(v) > 0) acc[cell.flow][{cell.start, cell.end}] += v;
  }
  FractionalSchedule frac;
  frac.lp_cost = sol.objective;
  frac.horizon = dlp.horizon;
  for (std::size_t g = 0; g < refs.size(); ++g) {
    FractionalFlow ff;
    ff.coflow = refs[g].coflow;
    ff.flow = refs[g].flow;
    ff.demand = from_int(instance.coflow(ff.coflow).flows[ff.flow].mult);
    for (auto& [span, amount] : acc[g]) ff.pieces.push_back({span.first, span.second, amount});
    frac.flows.push_back(std::move(ff));
  }
  return frac;
}

// ---------------------------------------------------------------------------

namespace {

Rational flow_time(const FractionalFlow& f, const Rational& theta) {
  const Rational target = theta * f.demand;
  Rational cum = 0;
  for (const FlowPiece& p : f.pieces) {
    if (cum + p.amount >= target) return p.start + (target - cum) / p.amount * (p.end - p.start);
    cum += p.amount;
  }
  throw std::logic_error("fractional flow does not reach its demand");
}

}  // namespace

Rational completion_curve(const FractionalSchedule& frac, std::size_t coflow, const Rational& theta) {
  if (sgn(theta) <= 0 || theta > 1) throw std::invalid_argument("theta must lie in (0, 1]");
  std::optional<Rational> best;
  for (const FractionalFlow& f : frac.flows) {
    if (f.coflow != coflow) continue;
    Rational t = flow_time(f, theta);
    if (!best || t > *best) best = std::move(t);
  }
  if (!best) throw std::invalid_argument("coflow has no flows in the fractional schedule");
  return *best;
}

std::vector<Rational> curve_breakpoints(const FractionalSchedule& frac) {
  std::map<std::size_t, std::vector<const FractionalFlow*>> by_coflow;
  for (const FractionalFlow& f : frac.flows) by_coflow[f.coflow].push_back(&f);

  std::set<Rational> out{Rational(1)};
  for (const auto& [j, flows] : by_coflow) {
    std::set<Rational> own{Rational(1)};
    for (const FractionalFlow* f : flows) {
      Rational cum = 0;
      for (const FlowPiece& p : f->pieces) {
        cum += p.amount;
        own.insert(cum / f->demand);
      }
    }
    // Kinks of the upper envelope: pairwise crossings inside each segment on
    // which every flow's curve is linear.
    Rational lo = 0;
    for (const Rational& hi : own) {
      if (sgn(hi) <= 0) continue;
      const Rational mid = (lo + hi) / 2;
      std::vector<std::pair<Rational, Rational>> lines;  // value = a + b theta
      for (const FractionalFlow* f : flows) {
        Rational at_hi = flow_time(*f, hi);
        Rational at_mid = flow_time(*f, mid);
        Rational slope = (at_hi - at_mid) / (hi - mid);
        lines.emplace_back(at_hi - slope * hi, slope);
      }
      for (std::size_t a = 0; a < lines.size(); ++a)
        for (std::size_t b = a + 1; b < lines.size(); ++b) {
          if (lines[a].second == lines[b].second) continue;
          Rational x = (lines[a].first - lines[b].first) / (lines[b].second - lines[a].second);
          if (x > lo && x < hi) out.insert(x);
        }
      out.insert(hi);
      lo = hi;
    }
  }
  return {out.begin(), out.end()};
}

Rational draw_theta(std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  Integer two64;
  mpz_ui_pow_ui(two64.get_mpz_t(), 2, 64);
  while (true) {
    const std::uint64_t k = gen();
    Integer num;
    mpz_import(num.get_mpz_t(), 1, 1, sizeof(k), 0, 0, &k);
    Rational u(num, two64);
    u.canonicalize();
    Rational theta = sqrt_truncated(u);
    if (sgn(theta) > 0) return theta;
  }
}

DeadlineProfile profile_for_theta(const Instance& instance, const FractionalSchedule& frac, const Rational& theta) {
  std::vector<Rational> deadlines;
  deadlines.reserve(instance.size());
  for (std::size_t j = 0; j < instance.size(); ++j) deadlines.push_back(completion_curve(frac, j, theta) / theta);
  return make_profile(instance, std::move(deadlines), theta);
}

DeadlineProfile round_deadlines(const Instance& instance, const FractionalSchedule& frac, const RoundingMode& mode) {
  if (const auto* seeded = std::get_if<SeededRounding>(&mode)) {
    return profile_for_theta(instance, frac, draw_theta(seeded->seed));
  }
  const std::size_t n = std::get<CandidateRounding>(mode).count;
  if (n == 0) throw std::invalid_argument("candidate count must be positive");
  std::set<Rational> candidates;
  for (std::size_t k = 1; k <= n; ++k) {
    candidates.insert(sqrt_truncated(make_rational(static_cast<std::int64_t>(k), static_cast<std::int64_t>(n))));
  }
  for (Rational& b : curve_breakpoints(frac)) candidates.insert(std::move(b));

  std::optional<DeadlineProfile> best;
  Rational best_cost;
  for (const Rational& theta : candidates) {
    if (sgn(theta) <= 0) continue;
    DeadlineProfile p = profile_for_theta(instance, frac, theta);
    Rational c = p.weighted_sum(instance);
    // candidates are visited in increasing theta, so strict < keeps the
    // (cost, theta) lexicographic minimum
    if (!best || c < best_cost) {
      best_cost = std::move(c);
      best = std::move(p);
    }
  }
  return *best;
}

// ---------------------------------------------------------------------------

namespace {

BlockFeasibility solve_block_lp(const Instance& instance, std::vector<Rational> ends, BlockLpKind kind,
                                const std::function<bool(std::size_t coflow, std::size_t block)>& allowed) {
  const auto refs = flow_refs(instance);
  const std::size_t blocks = ends.size();
  LinearProgram lp;
  std::vector<std::vector<long>> var(refs.size(), std::vector<long>(blocks, -1));
  std::map<std::tuple<std::size_t, int, int>, std::vector<LpTerm>> degree;
  for (std::size_t g = 0; g < refs.size(); ++g) {
    const Flow& f = instance.coflow(refs[g].coflow).flows[refs[g].flow];
    std::vector<LpTerm> total;
    for (std::size_t s = 0; s < blocks; ++s) {
      if (!allowed(refs[g].coflow, s)) continue;
      const std::size_t v = lp.add_variable(from_int(f.mult));
      var[g][s] = static_cast<long>(v);
      total.push_back({v, 1});
      degree[{s, 0, f.u}].push_back({v, 1});
      degree[{s, 1, f.v}].push_back({v, 1});
    }
    lp.add_row(std::move(total), Relation::Equal, from_int(f.mult));
  }
  for (auto& [key, terms] : degree) {
    const std::size_t s = std::get<0>(key);
    const Rational cap = ends[s] - (s == 0 ? Rational(0) : ends[s - 1]);
    lp.add_row(std::move(terms), Relation::LessEqual, cap);
  }

  BlockFeasibility out;
  out.kind = kind;
  out.rows = lp.row_count();
  const FeasibilityResult res = feasible(lp);
  out.feasible = res.feasible;
  if (res.feasible) {
    out.amount.assign(refs.size(), std::vector<Rational>(blocks, Rational(0)));
    for (std::size_t g = 0; g < refs.size(); ++g)
      for (std::size_t s = 0; s < blocks; ++s)
        if (var[g][s] >= 0) out.amount[g][s] = res.witness.values[static_cast<std::size_t>(var[g][s])];
    out.strictly_inside = strictly_inside_count(lp, res.witness.values);
  }
  out.ends = std::move(ends);
  return out;
}

}  // namespace

BlockFeasibility check_lp_i(const Instance& instance, const DeadlineProfile& profile) {
  if (instance.has_releases()) throw std::invalid_argument("release-free block LP used on an instance with releases");
  if (profile.deadlines.size() != instance.size()) throw std::invalid_argument("profile size does not match instance");
  std::vector<Rational> ends;
  std::vector<std::size_t> position(instance.size());
  for (std::size_t s = 0; s < profile.order.size(); ++s) {
    ends.push_back(profile.deadlines[profile.order[s]]);
    position[profile.order[s]] = s;
  }
  return solve_block_lp(instance, std::move(ends), BlockLpKind::NoRelease,
                        [&](std::size_t j, std::size_t s) { return s <= position[j]; });
}

BlockFeasibility check_lp_r(const Instance& instance, const DeadlineProfile& profile) {
  if (profile.deadlines.size() != instance.size()) throw std::invalid_argument("profile size does not match instance");
  std::set<Rational> chain{Rational(0)};
  for (std::size_t j = 0; j < instance.size(); ++j) {
    chain.insert(from_int(instance.coflow(j).release));
    chain.insert(profile.deadlines[j]);
  }
  std::vector<Rational> points(chain.begin(), chain.end());
  std::vector<Rational> ends(points.begin() + 1, points.end());
  return solve_block_lp(instance, std::move(ends), BlockLpKind::WithRelease, [&](std::size_t j, std::size_t s) {
    return points[s] >= instance.coflow(j).release && points[s + 1] <= profile.deadlines[j];
  });
}

CertifiedProfile certify(const Instance& instance, DeadlineProfile profile) {
  const BlockLpKind kind = instance.has_releases() ? BlockLpKind::WithRelease : BlockLpKind::NoRelease;
  const BlockFeasibility check =
      kind == BlockLpKind::NoRelease ? check_lp_i(instance, profile) : check_lp_r(instance, profile);
  if (!check.feasible) throw ProfileRejected("deadline profile fails the block LP check");
  return CertifiedProfile(std::move(profile), kind);
}

DeadlineLp deadline_lp(const Instance& instance, const DeadlineOptions& options) {
  bool time_indexed = options.lp == DeadlineLpChoice::TimeIndexed;
  if (options.lp == DeadlineLpChoice::Auto) {
    time_indexed = instance.total_copies() * deadline_horizon(instance) <= options.time_indexed_limit;
  }
  return time_indexed ? build_lp_d(instance) : build_lp_d_intervals(instance, options.epsilon);
}

FractionalSchedule fractional_schedule(const Instance& instance, const DeadlineOptions& options) {
  return solve_deadline_lp(instance, deadline_lp(instance, options));
}

CertifiedProfile generate_deadlines(const Instance& instance, const DeadlineOptions& options) {
  const FractionalSchedule frac = fractional_schedule(instance, options);
  return certify(instance, round_deadlines(instance, frac, options.mode));
}

}  // namespace coflow
