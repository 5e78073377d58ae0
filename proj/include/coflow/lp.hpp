#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "coflow/rational.hpp"

namespace coflow {

struct LpTerm {
  std::size_t index = 0;
  Rational coef;
};

enum class Relation { LessEqual, Equal, GreaterEqual };

struct LpRow {
  std::vector<LpTerm> terms;
  Relation relation = Relation::LessEqual;
  Rational rhs;
  std::string name;
};

/// min c^T x  s.t.  rows,  0 <= x_i <= u_i  (u_i may be infinite).
/// Without any objective coefficient the program is a pure feasibility
/// problem and solve() stops after phase one.
class LinearProgram {
 public:
  std::size_t add_variable(std::optional<Rational> upper = std::nullopt, std::string name = {});
  std::size_t add_row(std::vector<LpTerm> terms, Relation relation, Rational rhs, std::string name = {});
  void set_cost(std::size_t var, Rational cost);
  void set_upper(std::size_t var, std::optional<Rational> upper);

  std::size_t variable_count() const { return upper_.size(); }
  std::size_t row_count() const { return rows_.size(); }
  const std::vector<LpRow>& rows() const { return rows_; }
  const std::optional<Rational>& upper(std::size_t var) const { return upper_.at(var); }
  const Rational& cost(std::size_t var) const { return cost_.at(var); }
  const std::string& variable_name(std::size_t var) const { return names_.at(var); }
  bool has_objective() const;

  /// Plain-text equation listing for debugging.
  std::string dump() const;

 private:
  std::vector<std::optional<Rational>> upper_;
  std::vector<Rational> cost_;
  std::vector<std::string> names_;
  std::vector<LpRow> rows_;
};

enum class LpStatus { Optimal, Feasible, Infeasible, Unbounded };

std::string to_string(LpStatus status);

struct VertexSolution {
  LpStatus status = LpStatus::Infeasible;
  /// Structural variable values (empty when infeasible).
  std::vector<Rational> values;
  /// Basic columns, one per kept row. Ids below variable_count() are
  /// structural; id variable_count() + i is the slack of row i and
  /// variable_count() + row_count() + i its artificial.
  std::vector<std::size_t> basis;
  Rational objective;
  /// Phase-one optimum (sum of artificials); positive iff infeasible.
  Rational infeasibility;
  std::size_t pivots = 0;

  bool has_point() const { return status == LpStatus::Optimal || status == LpStatus::Feasible; }
};

/// Exact bounded-variable primal simplex. Returns a basic (vertex) solution.
VertexSolution solve(const LinearProgram& lp);

struct FeasibilityResult {
  bool feasible = false;
  VertexSolution witness;
};

/// Phase one only.
FeasibilityResult feasible(const LinearProgram& lp);

/// True iff `values` satisfies every row and bound exactly.
bool satisfies(const LinearProgram& lp, const std::vector<Rational>& values);

/// Number of structural variables strictly between their bounds.
std::size_t strictly_inside_count(const LinearProgram& lp, const std::vector<Rational>& values);

}  // namespace coflow
