#include <doctest.h>

#include "coflow/generator.hpp"
#include "coflow/greedy.hpp"
#include "helpers.hpp"

using namespace coflow;
using namespace coflow::test;

TEST_SUITE("greedy") {
  TEST_CASE("single edge finishes in slot 1") {
    Instance in(1, 1, {unit_coflow({{0, 0}})});
    const GreedyResult r = greedy(in, certify(in, make_profile(in, {from_int(1)})));
    CHECK(r.trace.finish == std::vector<Slot>{1});
  }

  TEST_CASE("shared left vertex pushes the second coflow to slot 2") {
    Instance in(1, 2, {unit_coflow({{0, 0}}), unit_coflow({{0, 1}})});
    const GreedyResult r = greedy(in, certify(in, make_profile(in, {from_int(1), from_int(2)})));
    CHECK(r.trace.finish == std::vector<Slot>{1, 2});
    CHECK(validate(in, r.schedule).ok());
  }

  TEST_CASE("greedy refuses releases, greedy_r honours them") {
    Instance in(1, 1, {unit_coflow({{0, 0}}, 1, 3)});
    const CertifiedProfile p = certify(in, make_profile(in, {from_int(4)}));
    CHECK_THROWS(greedy(in, p));
    const GreedyResult r = greedy_r(in, p);
    CHECK(r.trace.finish == std::vector<Slot>{4});
  }

  TEST_CASE("two coflows on one pair go to slots 1 and 2") {
    Instance in(1, 1, {unit_coflow({{0, 0}}), unit_coflow({{0, 0}})});
    const GreedyResult r = greedy_r(in, certify(in, make_profile(in, {from_int(1), from_int(2)})));
    CHECK(r.trace.finish == std::vector<Slot>{1, 2});
  }

  TEST_CASE("multiplicity greedy colours one set into five slots") {
    Instance in(1, 1, {flow_coflow({Flow{0, 0, 5}})});
    const MultiplicityGreedyResult r = greedy_multiplicity(in, certify(in, make_profile(in, {from_int(5)})));
    CHECK(r.finish == std::vector<Slot>{5});
    CHECK(r.set_degree == std::vector<std::int64_t>{5});
    CHECK(validate(in, r.schedule).ok());
  }

  TEST_CASE("multiplicity greedy does not expand a million copies") {
    Instance in(2, 2, {flow_coflow({Flow{0, 0, 1000000}, Flow{1, 1, 999999}}), flow_coflow({Flow{0, 1, 1000000}})});
    const CertifiedProfile p = certify(in, make_profile(in, {from_int(1000000), from_int(2000000)}));
    const MultiplicityGreedyResult r = greedy_multiplicity(in, p);
    CHECK(r.schedule.runs().size() < 20);
    CHECK(validate(in, r.schedule).ok());
    CHECK(r.finish[1] <= 2 * 2000000 - 1);
  }

  TEST_CASE("random profiles respect 2C - 1 and r + 2C - 1") {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
      GeneratorOptions g;
      g.seed = seed;
      g.coflows = 4;
      g.max_mult = 2;
      g.release_max = seed % 2 == 0 ? 3 : 0;
      const Instance in = generate_instance(g);
      const CertifiedProfile p = generate_deadlines(in);
      const GreedyResult r = in.has_releases() ? greedy_r(in, p) : greedy(in, p);
      REQUIRE(validate(in, r.schedule).ok());
      for (std::size_t j = 0; j < in.size(); ++j) {
        CHECK(r.trace.finish[j] <= in.coflow(j).release + 2 * p.deadline(j) - 1);
      }
    }
  }
}
