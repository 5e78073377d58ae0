#include "coflow/lp.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace coflow {

std::size_t LinearProgram::add_variable(std::optional<Rational> upper, std::string name) {
  if (upper && *upper < 0) throw std::invalid_argument("variable upper bound must be nonnegative");
  upper_.push_back(std::move(upper));
  cost_.emplace_back(0);
  if (name.empty()) name = "x" + std::to_string(upper_.size() - 1);
  names_.push_back(std::move(name));
  return upper_.size() - 1;
}

std::size_t LinearProgram::add_row(std::vector<LpTerm> terms, Relation relation, Rational rhs, std::string name) {
  for (const LpTerm& t : terms) {
    if (t.index >= upper_.size()) throw std::out_of_range("row term references unknown variable");
  }
  if (name.empty()) name = "r" + std::to_string(rows_.size());
  rows_.push_back(LpRow{std::move(terms), relation, std::move(rhs), std::move(name)});
  return rows_.size() - 1;
}

void LinearProgram::set_cost(std::size_t var, Rational cost) { cost_.at(var) = std::move(cost); }

void LinearProgram::set_upper(std::size_t var, std::optional<Rational> upper) {
  if (upper && *upper < 0) throw std::invalid_argument("variable upper bound must be nonnegative");
  upper_.at(var) = std::move(upper);
}

bool LinearProgram::has_objective() const {
  return std::any_of(cost_.begin(), cost_.end(), [](const Rational& c) { return sgn(c) != 0; });
}

std::string LinearProgram::dump() const {
  std::ostringstream os;
  auto term_text = [&](const Rational& coef, std::size_t var, bool first) {
    std::string s;
    if (sgn(coef) < 0) {
      s = first ? "-" : " - ";
    } else if (!first) {
      s = " + ";
    }
    Rational mag = abs(coef);
    if (mag != 1) s += to_string(mag) + " ";
    return s + names_[var];
  };
  os << (has_objective() ? "minimize\n  " : "feasibility\n");
  if (has_objective()) {
    bool first = true;
    for (std::size_t i = 0; i < cost_.size(); ++i) {
      if (sgn(cost_[i]) == 0) continue;
      os << term_text(cost_[i], i, first);
      first = false;
    }
    os << "\n";
  }
  os << "subject to\n";
  for (const LpRow& row : rows_) {
    os << "  " << row.name << ": ";
    bool first = true;
    for (const LpTerm& t : row.terms) {
      os << term_text(t.coef, t.index, first);
      first = false;
    }
    if (first) os << "0";
    switch (row.relation) {
      case Relation::LessEqual: os << " <= "; break;
      case Relation::Equal: os << " = "; break;
      case Relation::GreaterEqual: os << " >= "; break;
    }
    os << to_string(row.rhs) << "\n";
  }
  os << "bounds\n";
  for (std::size_t i = 0; i < upper_.size(); ++i) {
    os << "  0 <= " << names_[i] << " <= " << (upper_[i] ? to_string(*upper_[i]) : std::string("inf")) << "\n";
  }
  return os.str();
}

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Feasible: return "feasible";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "unknown";
}

namespace {

// Switch from Dantzig to Bland pricing after this many consecutive
// degenerate steps; back to Dantzig after the next strict improvement.
constexpr std::size_t kDegenerateStreak = 8;

class Simplex {
 public:
  explicit Simplex(const LinearProgram& lp) : lp_(lp), n_(lp.variable_count()) {}

  VertexSolution run(bool feasibility_only) {
    VertexSolution out;
    if (!build(out)) return out;

    if (!artificial_.empty()) {
      std::vector<Rational> phase1(cols_, Rational(0));
      for (std::size_t c : artificial_) phase1[c] = 1;
      LpStatus st = optimize(phase1);
      if (st == LpStatus::Unbounded) throw std::logic_error("phase one cannot be unbounded");
      Rational sum = 0;
      for (std::size_t c : artificial_) sum += x_[c];
      out.infeasibility = sum;
      if (sgn(sum) > 0) {
        out.status = LpStatus::Infeasible;
        out.pivots = pivots_;
        return out;
      }
      for (std::size_t c : artificial_) upper_[c] = Rational(0);
    }

    LpStatus status = LpStatus::Feasible;
    if (!feasibility_only && lp_.has_objective()) {
      std::vector<Rational> phase2(cols_, Rational(0));
      for (std::size_t j = 0; j < n_; ++j) phase2[j] = lp_.cost(j);
      status = optimize(phase2);
    }

    out.status = status;
    out.values.assign(x_.begin(), x_.begin() + static_cast<std::ptrdiff_t>(n_));
    out.objective = 0;
    for (std::size_t j = 0; j < n_; ++j) out.objective += lp_.cost(j) * out.values[j];
    out.basis.reserve(basis_.size());
    for (std::size_t c : basis_) out.basis.push_back(external_id_[c]);
    out.pivots = pivots_;
    return out;
  }

 private:
  // Builds the initial tableau. Returns false (with out filled) if an empty
  // row is violated.
  bool build(VertexSolution& out) {
    struct Prepared {
      std::map<std::size_t, Rational> coefs;
      Relation relation;
      Rational rhs;
      std::size_t source;
    };
    std::vector<Prepared> rows;
    const auto& src = lp_.rows();
    for (std::size_t i = 0; i < src.size(); ++i) {
      Prepared p{{}, src[i].relation, src[i].rhs, i};
      for (const LpTerm& t : src[i].terms) p.coefs[t.index] += t.coef;
      std::erase_if(p.coefs, [](const auto& kv) { return sgn(kv.second) == 0; });
      if (p.relation == Relation::GreaterEqual) {
        for (auto& [k, v] : p.coefs) v = -v;
        p.rhs = -p.rhs;
        p.relation = Relation::LessEqual;
      }
      if (p.coefs.empty()) {
        bool ok = p.relation == Relation::Equal ? sgn(p.rhs) == 0 : sgn(p.rhs) >= 0;
        if (!ok) {
          out.status = LpStatus::Infeasible;
          out.infeasibility = abs(p.rhs);
          return false;
        }
        continue;
      }
      rows.push_back(std::move(p));
    }

    m_ = rows.size();
    const std::size_t total_rows = src.size();
    // Column layout: structurals, then one slack per kept inequality row,
    // then artificials.
    std::vector<long> slack_col(m_, -1), art_col(m_, -1);
    cols_ = n_;
    for (std::size_t k = 0; k < m_; ++k) {
      if (rows[k].relation == Relation::LessEqual) slack_col[k] = static_cast<long>(cols_++);
    }
    for (std::size_t k = 0; k < m_; ++k) {
      bool needs = rows[k].relation == Relation::Equal || sgn(rows[k].rhs) < 0;
      if (needs) art_col[k] = static_cast<long>(cols_++);
    }

    external_id_.resize(cols_);
    upper_.assign(cols_, std::nullopt);
    for (std::size_t j = 0; j < n_; ++j) {
      external_id_[j] = j;
      upper_[j] = lp_.upper(j);
    }
    for (std::size_t k = 0; k < m_; ++k) {
      if (slack_col[k] >= 0) external_id_[static_cast<std::size_t>(slack_col[k])] = n_ + rows[k].source;
      if (art_col[k] >= 0) {
        external_id_[static_cast<std::size_t>(art_col[k])] = n_ + total_rows + rows[k].source;
        artificial_.push_back(static_cast<std::size_t>(art_col[k]));
      }
    }

    a_.assign(m_, std::vector<Rational>(cols_, Rational(0)));
    x_.assign(cols_, Rational(0));
    basis_.assign(m_, 0);
    row_of_.assign(cols_, -1);
    for (std::size_t k = 0; k < m_; ++k) {
      const bool negate = sgn(rows[k].rhs) < 0;
      for (const auto& [j, v] : rows[k].coefs) a_[k][j] = negate ? Rational(-v) : v;
      if (slack_col[k] >= 0) a_[k][static_cast<std::size_t>(slack_col[k])] = negate ? -1 : 1;
      std::size_t basic;
      if (art_col[k] >= 0) {
        basic = static_cast<std::size_t>(art_col[k]);
        a_[k][basic] = 1;
      } else {
        basic = static_cast<std::size_t>(slack_col[k]);
      }
      basis_[k] = basic;
      row_of_[basic] = static_cast<long>(k);
      x_[basic] = negate ? Rational(-rows[k].rhs) : rows[k].rhs;
    }
    return true;
  }

  bool fixed(std::size_t j) const { return upper_[j] && sgn(*upper_[j]) == 0; }
  bool at_upper(std::size_t j) const { return upper_[j] && x_[j] == *upper_[j] && sgn(x_[j]) != 0; }

  LpStatus optimize(const std::vector<Rational>& cost) {
    // Reduced costs d_j = c_j - c_B^T a_j.
    std::vector<Rational> d = cost;
    for (std::size_t i = 0; i < m_; ++i) {
      const Rational& cb = cost[basis_[i]];
      if (sgn(cb) == 0) continue;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (sgn(a_[i][j]) != 0) d[j] -= cb * a_[i][j];
      }
    }

    std::size_t streak = 0;
    Rational tmp;
    while (true) {
      const bool bland = streak >= kDegenerateStreak;
      long enter = -1;
      Rational best = 0;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (row_of_[j] >= 0 || fixed(j)) continue;
        const int s = sgn(d[j]);
        const bool eligible = at_upper(j) ? s > 0 : s < 0;
        if (!eligible) continue;
        if (bland) {
          enter = static_cast<long>(j);
          break;
        }
        Rational mag = abs(d[j]);
        if (enter < 0 || mag > best) {
          enter = static_cast<long>(j);
          best = std::move(mag);
        }
      }
      if (enter < 0) return LpStatus::Optimal;
      const std::size_t j = static_cast<std::size_t>(enter);
      const int dir = at_upper(j) ? -1 : 1;

      // Ratio test. A bound flip of the entering column is a candidate with
      // its own index for tie-breaking.
      std::optional<Rational> step;
      long leave_row = -1;
      std::size_t leave_key = 0;
      if (upper_[j]) {
        step = *upper_[j];
        leave_key = j;
      }
      for (std::size_t i = 0; i < m_; ++i) {
        const int s = sgn(a_[i][j]);
        if (s == 0) continue;
        const std::size_t b = basis_[i];
        // basic value changes by -dir * a_ij per unit step
        const bool decreasing = dir * s > 0;
        Rational limit;
        if (decreasing) {
          limit = x_[b] / abs(a_[i][j]);
        } else {
          if (!upper_[b]) continue;
          limit = (*upper_[b] - x_[b]) / abs(a_[i][j]);
        }
        if (!step || limit < *step || (limit == *step && b < leave_key)) {
          step = std::move(limit);
          leave_row = static_cast<long>(i);
          leave_key = b;
        }
      }
      if (!step) return LpStatus::Unbounded;

      ++pivots_;
      streak = sgn(*step) == 0 ? streak + 1 : 0;

      if (sgn(*step) != 0) {
        const Rational& t = *step;
        if (dir > 0) x_[j] += t; else x_[j] -= t;
        for (std::size_t i = 0; i < m_; ++i) {
          if (sgn(a_[i][j]) == 0) continue;
          tmp = a_[i][j] * t;
          if (dir > 0) x_[basis_[i]] -= tmp; else x_[basis_[i]] += tmp;
        }
      }
      if (leave_row < 0) continue;  // bound flip

      const std::size_t r = static_cast<std::size_t>(leave_row);
      const std::size_t out = basis_[r];
      // Snap the leaving column exactly onto the bound it reached.
      if (upper_[out] && x_[out] == *upper_[out]) x_[out] = *upper_[out];
      else x_[out] = 0;
      pivot(r, j, d);
      row_of_[out] = -1;
      basis_[r] = j;
      row_of_[j] = static_cast<long>(r);
    }
  }

  void pivot(std::size_t r, std::size_t j, std::vector<Rational>& d) {
    std::vector<Rational>& prow = a_[r];
    const Rational inv = 1 / prow[j];
    std::vector<std::size_t> nz;
    for (std::size_t k = 0; k < cols_; ++k) {
      if (sgn(prow[k]) == 0) continue;
      prow[k] *= inv;
      nz.push_back(k);
    }
    mpq_class tmp;
    auto eliminate = [&](std::vector<Rational>& row) {
      if (sgn(row[j]) == 0) return;
      const Rational f = row[j];
      for (std::size_t k : nz) {
        mpq_mul(tmp.get_mpq_t(), f.get_mpq_t(), prow[k].get_mpq_t());
        mpq_sub(row[k].get_mpq_t(), row[k].get_mpq_t(), tmp.get_mpq_t());
      }
    };
    for (std::size_t i = 0; i < m_; ++i) {
      if (i != r) eliminate(a_[i]);
    }
    eliminate(d);
  }

  const LinearProgram& lp_;
  std::size_t n_;
  std::size_t m_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::vector<Rational>> a_;
  std::vector<Rational> x_;
  std::vector<std::optional<Rational>> upper_;
  std::vector<std::size_t> basis_;
  std::vector<long> row_of_;
  std::vector<std::size_t> artificial_;
  std::vector<std::size_t> external_id_;
  std::size_t pivots_ = 0;
};

}  // namespace

VertexSolution solve(const LinearProgram& lp) { return Simplex(lp).run(false); }

FeasibilityResult feasible(const LinearProgram& lp) {
  FeasibilityResult res;
  res.witness = Simplex(lp).run(true);
  res.feasible = res.witness.has_point();
  return res;
}

bool satisfies(const LinearProgram& lp, const std::vector<Rational>& values) {
  if (values.size() != lp.variable_count()) return false;
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (sgn(values[j]) < 0) return false;
    if (lp.upper(j) && values[j] > *lp.upper(j)) return false;
  }
  for (const LpRow& row : lp.rows()) {
    Rational lhs = 0;
    for (const LpTerm& t : row.terms) lhs += t.coef * values[t.index];
    switch (row.relation) {
      case Relation::LessEqual: if (lhs > row.rhs) return false; break;
      case Relation::Equal: if (lhs != row.rhs) return false; break;
      case Relation::GreaterEqual: if (lhs < row.rhs) return false; break;
    }
  }
  return true;
}

std::size_t strictly_inside_count(const LinearProgram& lp, const std::vector<Rational>& values) {
  std::size_t count = 0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (sgn(values[j]) <= 0) continue;
    if (lp.upper(j) && values[j] >= *lp.upper(j)) continue;
    ++count;
  }
  return count;
}

}  // namespace coflow
