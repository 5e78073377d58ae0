#include <doctest.h>

#include "coflow/cbf.hpp"
#include "coflow/combine.hpp"
#include "coflow/generator.hpp"
#include "coflow/greedy.hpp"
#include "helpers.hpp"

using namespace coflow;
using namespace coflow::test;

TEST_SUITE("combine") {
  TEST_CASE("member names parse back") {
    for (const std::string& s : {"greedy", "greedy-m", "cbf6", "cbf-r4", "ckbf6,1"}) CHECK(parse_member(s).name() == s);
    CHECK(parse_member("cbf:5").tau == 5);
    CHECK_THROWS_AS(parse_member("cbf1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_member("ckbf6"), std::invalid_argument);
    CHECK_THROWS_AS(parse_member("fifo"), std::invalid_argument);
  }

  TEST_CASE("combined cost is the minimum of its members") {
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
      GeneratorOptions g;
      g.seed = seed;
      g.coflows = 4;
      g.max_mult = 2;
      const Instance in = generate_instance(g);
      const CertifiedProfile p = generate_deadlines(in);
      const auto portfolio = main_portfolio(6);
      const CombinedResult r = combined(in, p, portfolio, 2);
      const Rational g_cost = cost(in, greedy(in, p).schedule).total;
      const Rational c_cost = cbf(in, p, 6).cost;
      CHECK(r.report.total == (g_cost < c_cost ? g_cost : c_cost));
      CHECK(r.members[0].report.total == g_cost);
      if (g_cost == c_cost) CHECK(r.best == 0);
      CHECK(validate(in, r.schedule).ok());
    }
  }

  TEST_CASE("parallel and sequential runs agree") {
    GeneratorOptions g;
    g.seed = 3;
    g.coflows = 5;
    g.release_max = 4;
    const Instance in = generate_instance(g);
    const CertifiedProfile p = generate_deadlines(in);
    const auto portfolio = release_portfolio(4);
    const CombinedResult a = combined(in, p, portfolio, 1);
    const CombinedResult b = combined(in, p, portfolio, 4);
    CHECK(a.report.total == b.report.total);
    CHECK(a.best == b.best);
    CHECK(a.schedule.expand() == b.schedule.expand());
  }

  TEST_CASE("empty portfolio") {
    Instance in(1, 1, {unit_coflow({{0, 0}})});
    const CertifiedProfile p = certify(in, make_profile(in, {from_int(1)}));
    CHECK_THROWS_AS(combined(in, p, std::vector<PortfolioMember>{}), std::invalid_argument);
  }

  TEST_CASE("asymptotic report on one heavy coflow") {
    Instance in(1, 1, {flow_coflow({Flow{0, 0, 20}})});
    const CertifiedProfile p = generate_deadlines(in);
    const AsymptoticReport r = asymptotic_check(in, p, 10);
    CHECK(r.opt == 20);
    CHECK(r.eps_hat == make_rational(1, 20));
    CHECK(r.bound == make_rational(12, 5) + make_rational(22, 20));
    CHECK(r.holds);
    CHECK_NOTHROW(asymptotic_check(in, p, 10, from_int(20)));
  }

  TEST_CASE("degree lower bound") {
    Instance in(2, 2, {flow_coflow({Flow{0, 0, 3}}, 2, 1), unit_coflow({{0, 1}, {1, 1}})});
    CHECK(degree_lower_bound(in) == 2 * (1 + 3) + 2);
  }
}

TEST_SUITE("generator") {
  TEST_CASE("same seed, same instance") {
    GeneratorOptions g;
    g.seed = 42;
    g.coflows = 6;
    g.max_mult = 5;
    g.release_max = 3;
    const Instance a = generate_instance(g), b = generate_instance(g);
    REQUIRE(a.size() == b.size());
    for (std::size_t j = 0; j < a.size(); ++j) {
      CHECK(a.coflow(j).weight == b.coflow(j).weight);
      CHECK(a.coflow(j).release == b.coflow(j).release);
      CHECK(a.coflow(j).flows.size() == b.coflow(j).flows.size());
    }
  }

  TEST_CASE("ranges") {
    GeneratorOptions g;
    g.coflows = 4;
    g.max_flows = 3;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
      g.seed = seed;
      const Instance in = generate_instance(g);
      std::size_t flows = 0;
      for (const Coflow& c : in.coflows()) {
        CHECK(c.release == 0);
        CHECK(c.weight >= 1);
        CHECK(c.weight <= 10);
        flows += c.flows.size();
      }
      CHECK(flows <= 12);
    }
    g.coflows = 0;
    CHECK_THROWS_AS(generate_instance(g), std::invalid_argument);
  }
}
