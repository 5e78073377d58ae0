#include <doctest.h>

#include "coflow/lp.hpp"

using namespace coflow;

TEST_SUITE("lp") {
  TEST_CASE("max x on [0,1]") {
    LinearProgram lp;
    const auto x = lp.add_variable(from_int(1), "x");
    lp.set_cost(x, -1);
    const VertexSolution s = solve(lp);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.values[x] == 1);
    CHECK(s.objective == -1);
  }

  TEST_CASE("equality row over three boxed variables gives a vertex") {
    LinearProgram lp;
    for (int i = 0; i < 3; ++i) lp.add_variable(from_int(1));
    lp.add_row({{0, 1}, {1, 1}, {2, 1}}, Relation::Equal, 1);
    const FeasibilityResult f = feasible(lp);
    REQUIRE(f.feasible);
    CHECK(satisfies(lp, f.witness.values));
    int integral = 0;
    for (const Rational& v : f.witness.values) integral += (v == 0 || v == 1) ? 1 : 0;
    CHECK(integral >= 2);
    CHECK(strictly_inside_count(lp, f.witness.values) <= 1);
  }

  TEST_CASE("contradictory bounds are infeasible") {
    LinearProgram lp;
    const auto x = lp.add_variable();
    lp.add_row({{x, 1}}, Relation::LessEqual, -1);
    const VertexSolution s = solve(lp);
    CHECK(s.status == LpStatus::Infeasible);
    CHECK(s.infeasibility > 0);
    CHECK_FALSE(feasible(lp).feasible);
  }

  TEST_CASE("no rows is feasible at zero") {
    LinearProgram lp;
    lp.add_variable();
    lp.add_variable(from_int(3));
    const FeasibilityResult f = feasible(lp);
    REQUIRE(f.feasible);
    CHECK(f.witness.values == std::vector<Rational>{0, 0});
  }

  TEST_CASE("unbounded objective") {
    LinearProgram lp;
    const auto x = lp.add_variable();
    lp.set_cost(x, -1);
    lp.add_row({{x, 1}}, Relation::GreaterEqual, 1);
    CHECK(solve(lp).status == LpStatus::Unbounded);
  }

  TEST_CASE("exact fractional optimum") {
    // min x + y  s.t.  3x + y >= 2, x + 3y >= 2  ->  x = y = 1/2
    LinearProgram lp;
    const auto x = lp.add_variable(), y = lp.add_variable();
    lp.set_cost(x, 1);
    lp.set_cost(y, 1);
    lp.add_row({{x, 3}, {y, 1}}, Relation::GreaterEqual, 2);
    lp.add_row({{x, 1}, {y, 3}}, Relation::GreaterEqual, 2);
    const VertexSolution s = solve(lp);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.values[x] == make_rational(1, 2));
    CHECK(s.values[y] == make_rational(1, 2));
    CHECK(s.objective == 1);
  }

  TEST_CASE("degenerate transportation problem terminates") {
    // 3x3 assignment with equal costs: heavy degeneracy.
    LinearProgram lp;
    std::size_t v[3][3];
    for (auto& row : v)
      for (auto& x : row) x = lp.add_variable(from_int(1));
    for (int i = 0; i < 3; ++i) {
      lp.add_row({{v[i][0], 1}, {v[i][1], 1}, {v[i][2], 1}}, Relation::Equal, 1);
      lp.add_row({{v[0][i], 1}, {v[1][i], 1}, {v[2][i], 1}}, Relation::Equal, 1);
    }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) lp.set_cost(v[i][j], (i + 2 * j) % 3);
    const VertexSolution s = solve(lp);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(satisfies(lp, s.values));
    CHECK(s.objective == 0);
  }
}

TEST_SUITE("rational") {
  TEST_CASE("parse and print") {
    CHECK(parse_rational("0.68") == make_rational(17, 25));
    CHECK(parse_rational("-3/6") == make_rational(-1, 2));
    CHECK(to_string(make_rational(4, 2)) == "2");
    CHECK(to_decimal(make_rational(140, 41)) == "3.414634");
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("x"), std::invalid_argument);
  }

  TEST_CASE("floor and ceil") {
    CHECK(floor_of(make_rational(-1, 2)) == -1);
    CHECK(ceil_of(make_rational(7, 6)) == 2);
    CHECK(is_integral(from_int(5)));
    CHECK_FALSE(is_integral(make_rational(5, 2)));
  }
}
