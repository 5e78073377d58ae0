#include <doctest.h>

#include "coflow/cbf.hpp"
#include "coflow/generator.hpp"
#include "coflow/oracle.hpp"
#include "helpers.hpp"

using namespace coflow;
using namespace coflow::test;

TEST_SUITE("cbf") {
  TEST_CASE("lambda offsets") {
    CHECK(lambda_offsets(6) == std::vector<std::int64_t>{0, 2, 3, 4, 5, 7});
    CHECK(lambda_offsets(2) == std::vector<std::int64_t>{0, 3});
  }

  TEST_CASE("deadlines round up to multiples of tau") {
    Instance in(1, 1, {unit_coflow({{0, 0}}), unit_coflow({{0, 0}})});
    const BlockStructure b = build_blocks(make_profile(in, {from_int(1), from_int(7)}), 6, 0);
    CHECK(b.rounded_deadline == std::vector<std::int64_t>{6, 12});
    CHECK(b.ends == std::vector<std::int64_t>{6, 12});
    CHECK(b.length(0) == 6);
    CHECK(b.length(1) == 6);
  }

  TEST_CASE("equal rounded deadlines share one block") {
    Instance in(1, 1, {unit_coflow({{0, 0}}), unit_coflow({{0, 0}})});
    const BlockStructure b = build_blocks(make_profile(in, {make_rational(11, 2), from_int(6)}), 6, 0);
    CHECK(b.rounded_deadline == std::vector<std::int64_t>{6, 6});
    CHECK(b.size() == 1);
  }

  TEST_CASE("offset lattice") {
    Instance in(1, 1, {unit_coflow({{0, 0}})});
    CHECK(build_blocks(make_profile(in, {from_int(7)}), 6, 2).rounded_deadline[0] == 8);
    CHECK_THROWS_AS(build_blocks(make_profile(in, {from_int(7)}), 6, 1), std::invalid_argument);
    CHECK_THROWS_AS(build_blocks(make_profile(in, {from_int(7)}), 1, 0), std::invalid_argument);
  }

  TEST_CASE("release lattice") {
    Instance in(1, 1, {unit_coflow({{0, 0}}, 1, 1)});
    const BlockStructure b = build_release_blocks(make_profile(in, {from_int(2)}), 2, 0);
    CHECK(b.rounded_release[0] == 2);
    CHECK(b.rounded_deadline[0] == 6);
    const CbfResult r = cbf_r(in, certify(in, make_profile(in, {from_int(2)})), 2);
    CHECK(r.finish[0] <= 8);
    CHECK(r.finish[0] >= 2);
    CHECK(validate(in, r.schedule).ok());
  }

  TEST_CASE("single edge with tau 2 finishes in slot 1") {
    Instance in(1, 1, {unit_coflow({{0, 0}})});
    const CbfResult r = cbf(in, certify(in, make_profile(in, {from_int(1)})), 2);
    CHECK(r.finish[0] == 1);
    CHECK(trial_bound(1, 2, 0, false) <= 6);
  }

  TEST_CASE("integral first vertex needs no further rounding") {
    Instance in(2, 2, {unit_coflow({{0, 0}, {1, 1}})});
    const CertifiedProfile p = certify(in, make_profile(in, {from_int(1)}));
    const BlockStructure b = build_blocks(p.profile(), 2, 0);
    const BlockAssignment a = iterated_round(in, b);
    CHECK(a.audit.max_violation == 0);
    CHECK(a.audit.lp_solves == 1);
  }

  TEST_CASE("gadget fixture rounds within +2") {
    const auto [a1, profile] = a1_fixture();
    const BlockStructure b = build_blocks(profile, 2, 0);
    const BlockAssignment a = iterated_round(a1, b);
    CHECK(a.audit.max_violation <= 2);
    CHECK(a.audit.counting_ok);
    for (std::size_t k = 0; k < b.size(); ++k) CHECK(a.realized[k] <= a.nominal[k] + 2);
  }

  TEST_CASE("block layout") {
    Instance in(2, 2, {unit_coflow({{0, 0}, {1, 0}, {1, 1}})});
    BlockStructure b;
    b.tau = 2;
    b.ends = {2, 4};
    b.rounded_deadline = {2};
    b.rounded_release = {0};
    b.first_block = {0};
    b.last_block = {0};
    BlockAssignment a;
    a.count = {{1, 0}, {1, 0}, {1, 0}};
    a.nominal = {2, 2};
    a.realized = {2, 0};
    const Schedule s = schedule_blocks(in, b, a);
    CHECK(validate(in, s).ok());
    CHECK(s.makespan() == 2);
  }

  TEST_CASE("multiples of tau give the (tau+2)/tau bound at lambda 0") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      GeneratorOptions g;
      g.seed = seed;
      g.coflows = 4;
      g.max_mult = 3;
      const Instance in = generate_instance(g);
      std::vector<Rational> d;
      std::int64_t sum = 0;
      for (const Coflow& c : in.coflows()) {
        sum += max_degree(c);
        d.push_back(from_int(6 * ((sum + 5) / 6)));
      }
      const CertifiedProfile p = certify(in, make_profile(in, d));
      const CbfTrial t = cbf_trial(in, p, 6, 0, false);
      for (std::size_t j = 0; j < in.size(); ++j) CHECK(t.finish[j] <= make_rational(8, 6) * d[j]);
    }
  }

  TEST_CASE("weighted bounds hold on random profiles") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      GeneratorOptions g;
      g.seed = seed;
      g.coflows = 4;
      g.max_mult = 2;
      const Instance in = generate_instance(g);
      const CertifiedProfile p = generate_deadlines(in);
      const CbfResult a = cbf(in, p, 6);
      CHECK(a.cost <= cbf_weighted_bound(in, p.profile(), 6));
      const CbfResult b = cbf_r(in, p, 4);
      CHECK(b.cost <= cbf_r_weighted_bound(in, p.profile(), 4));
      CHECK(cbf_r_weighted_bound(in, p.profile(), 6) >= cbf_weighted_bound(in, p.profile(), 6));
      const CkbfResult k = ckbf(in, p, 6, 1);
      CHECK(k.cost <= ckbf_weighted_bound(in, p.profile(), 6, 1));
      CHECK(validate(in, k.schedule).ok());
    }
  }

  TEST_CASE("ckbf puts coflows with C < b+1 in slot 1") {
    Instance in(2, 2, {unit_coflow({{0, 0}}), unit_coflow({{1, 1}}), unit_coflow({{0, 1}})});
    const CertifiedProfile p = certify(in, make_profile(in, {from_int(1), from_int(1), from_int(2)}));
    const CkbfResult r = ckbf(in, p, 6, 1);
    CHECK(r.finish[0] == 1);
    CHECK(r.finish[1] == 1);
    CHECK(r.finish[2] >= 2);
    CHECK(r.prefix_degree == 1);
  }

  TEST_CASE("ckbf without a prefix is cbf shifted by b") {
    Instance in(2, 2, {unit_coflow({{0, 0}, {1, 1}}), unit_coflow({{0, 1}})});
    const CertifiedProfile p = certify(in, make_profile(in, {from_int(3), from_int(4)}));
    const CkbfResult k = ckbf(in, p, 6, 2);
    const CbfResult c = cbf(in, p, 6);
    CHECK(k.prefix.empty());
    for (std::size_t j = 0; j < in.size(); ++j) CHECK(k.finish[j] == c.finish[j] + 2);
  }
}
