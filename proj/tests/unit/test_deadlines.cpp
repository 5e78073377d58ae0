#include <doctest.h>

#include "coflow/deadlines.hpp"
#include "coflow/generator.hpp"
#include "coflow/oracle.hpp"
#include "helpers.hpp"

using namespace coflow;
using namespace coflow::test;

namespace {

FractionalSchedule one_flow(std::vector<FlowPiece> pieces) {
  FractionalSchedule f;
  f.flows.push_back(FractionalFlow{0, 0, 1, std::move(pieces)});
  f.horizon = 2;
  return f;
}

}  // namespace

TEST_SUITE("deadlines") {
  TEST_CASE("LP D on a single unit flow") {
    Instance in(1, 1, {unit_coflow({{0, 0}})});
    const DeadlineLp dlp = build_lp_d(in);
    CHECK(dlp.horizon == 2);
    const FractionalSchedule f = solve_deadline_lp(in, dlp);
    CHECK(f.lp_cost == 1);
  }

  TEST_CASE("LP D lower-bounds OPT") {
    Instance in(1, 1, {unit_coflow({{0, 0}}), unit_coflow({{0, 0}})});
    const FractionalSchedule f = solve_deadline_lp(in, build_lp_d(in));
    CHECK(opt(in).report.total == 3);
    CHECK(f.lp_cost <= 3);
    const auto [a1, profile] = a1_fixture();
    const FractionalSchedule fa = solve_deadline_lp(a1, build_lp_d(a1));
    OracleOptions o;
    o.copy_limit = 16;
    CHECK(fa.lp_cost <= opt(a1, o).report.total);
  }

  TEST_CASE("LP D' intervals") {
    Instance unit(1, 1, {unit_coflow({{0, 0}})});
    CHECK(solve_deadline_lp(unit, build_lp_d_intervals(unit, 1)).lp_cost == 1);
    CHECK_THROWS_AS(build_lp_d_intervals(unit, 0), std::invalid_argument);

    Instance eight(1, 1, {flow_coflow({Flow{0, 0, 8}})});
    const Rational exact = solve_deadline_lp(eight, build_lp_d(eight)).lp_cost;
    const Rational coarse = solve_deadline_lp(eight, build_lp_d_intervals(eight, 1)).lp_cost;
    const Rational fine = solve_deadline_lp(eight, build_lp_d_intervals(eight, make_rational(1, 4))).lp_cost;
    CHECK(coarse <= 2 * exact);
    CHECK(fine <= make_rational(5, 4) * exact);
    CHECK(fine <= coarse);
    CHECK_THROWS_AS(solve_deadline_lp(unit, build_lp_d(eight.expanded())), std::invalid_argument);
  }

  TEST_CASE("completion curve on the continuous view") {
    const FractionalSchedule whole = one_flow({{0, 1, 1}});
    CHECK(completion_curve(whole, 0, make_rational(1, 2)) == make_rational(1, 2));
    CHECK(completion_curve(whole, 0, 1) == 1);
    const FractionalSchedule split = one_flow({{0, 1, make_rational(1, 2)}, {1, 2, make_rational(1, 2)}});
    CHECK(completion_curve(split, 0, make_rational(3, 4)) == make_rational(3, 2));
    CHECK_THROWS(completion_curve(split, 0, 0));
  }

  TEST_CASE("unit flow in slot 1 gives C = 1 for every theta") {
    Instance in(1, 1, {unit_coflow({{0, 0}})});
    const FractionalSchedule f = one_flow({{0, 1, 1}});
    for (const Rational& theta : {make_rational(1, 7), make_rational(1, 2), from_int(1)}) {
      CHECK(profile_for_theta(in, f, theta).deadlines[0] == 1);
    }
  }

  TEST_CASE("candidate minimum is no worse than any seeded draw") {
    GeneratorOptions g;
    g.seed = 5;
    const Instance in = generate_instance(g);
    const FractionalSchedule f = fractional_schedule(in, {});
    const Rational best = round_deadlines(in, f, CandidateRounding{16}).weighted_sum(in);
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
      CHECK(best <= round_deadlines(in, f, SeededRounding{seed}).weighted_sum(in));
    }
  }

  TEST_CASE("seeded theta is reproducible and in (0,1]") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const Rational t = draw_theta(seed);
      CHECK(t > 0);
      CHECK(t <= 1);
      CHECK(t == draw_theta(seed));
    }
  }

  TEST_CASE("block LP without releases") {
    Instance one(1, 1, {unit_coflow({{0, 0}})});
    CHECK(check_lp_i(one, make_profile(one, {from_int(1)})).feasible);
    Instance parallel(1, 1, {flow_coflow({Flow{0, 0, 2}})});
    CHECK_FALSE(check_lp_i(parallel, make_profile(parallel, {from_int(1)})).feasible);
    CHECK_THROWS_AS(certify(parallel, make_profile(parallel, {from_int(1)})), ProfileRejected);
    CHECK(certify(parallel, make_profile(parallel, {from_int(2)})).kind() == BlockLpKind::NoRelease);
  }

  TEST_CASE("block LP with releases") {
    Instance in(1, 1, {unit_coflow({{0, 0}}, 1, 2)});
    const BlockFeasibility ok = check_lp_r(in, make_profile(in, {from_int(3)}));
    CHECK(ok.feasible);
    CHECK(ok.kind == BlockLpKind::WithRelease);
    CHECK_THROWS_AS(make_profile(in, {from_int(2)}), std::invalid_argument);
    DeadlineProfile tight;
    tight.deadlines = {from_int(2)};
    tight.order = {0};
    tight.releases = {2};
    CHECK_FALSE(check_lp_r(in, tight).feasible);
  }

  TEST_CASE("gadget fixture block LP is feasible at a half-integral vertex") {
    const auto [a1, profile] = a1_fixture();
    const BlockFeasibility f = check_lp_i(a1, profile);
    REQUIRE(f.feasible);
    for (const auto& row : f.amount) {
      for (const Rational& x : row) CHECK((x == 0 || x == make_rational(1, 2) || x == 1));
    }
  }

  TEST_CASE("generated profiles always certify") {
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
      GeneratorOptions g;
      g.seed = seed;
      g.release_max = seed % 2 == 0 ? 3 : 0;
      g.max_mult = 2;
      const Instance in = generate_instance(g);
      DeadlineOptions o;
      CHECK_NOTHROW(generate_deadlines(in, o));
      o.mode = SeededRounding{seed};
      CHECK_NOTHROW(generate_deadlines(in, o));
    }
  }
}
