#include <doctest.h>

#include "coflow/json_io.hpp"
#include "coflow/model.hpp"
#include "helpers.hpp"

using namespace coflow;
using namespace coflow::test;

TEST_SUITE("model") {
  TEST_CASE("instance invariants") {
    CHECK_THROWS_AS(Instance(0, 1, {unit_coflow({{0, 0}})}), StructuralError);
    CHECK_THROWS_AS(Instance(1, 1, {}), StructuralError);
    CHECK_THROWS_AS(Instance(1, 1, {unit_coflow({{0, 1}})}), StructuralError);
    CHECK_THROWS_AS(Instance(1, 1, {unit_coflow({})}), StructuralError);
    CHECK_THROWS_AS(Instance(1, 1, {unit_coflow({{0, 0}}, 0)}), StructuralError);
    CHECK_THROWS_AS(Instance(1, 1, {flow_coflow({Flow{0, 0, 0}})}), StructuralError);
    CHECK_THROWS_AS(Instance(1, 1, {unit_coflow({{0, 0}}, 1, -1)}), StructuralError);
  }

  TEST_CASE("single edge in slot 1 is valid") {
    Instance in(1, 1, {unit_coflow({{0, 0}})});
    Schedule s;
    s.add(1, {0, 0, 0});
    CHECK(validate(in, s).ok());
    const CostReport c = cost(in, s);
    CHECK(c.total == 1);
    CHECK(c.completion == std::vector<Slot>{1});
  }

  TEST_CASE("vertex conflict names the slot") {
    Instance in(1, 2, {unit_coflow({{0, 0}, {0, 1}})});
    Schedule s;
    s.add(1, {0, 0, 0});
    s.add(1, {0, 0, 1});
    const ValidationReport r = validate(in, s);
    REQUIRE_FALSE(r.ok());
    CHECK(r.violations[0].kind == ViolationKind::VertexConflict);
    CHECK(r.violations[0].slot == 1);
    CHECK(r.violations[0].message.find("slot 1") != std::string::npos);
    CHECK_THROWS_AS(cost(in, s), InvalidSchedule);
  }

  TEST_CASE("release date blocks slots up to r") {
    Instance in(1, 1, {unit_coflow({{0, 0}}, 1, 2)});
    Schedule s;
    s.add(2, {0, 0, 0});
    const ValidationReport r = validate(in, s);
    REQUIRE_FALSE(r.ok());
    CHECK(r.violations[0].kind == ViolationKind::ReleaseDate);
    Schedule ok;
    ok.add(3, {0, 0, 0});
    CHECK(validate(in, ok).ok());
  }

  TEST_CASE("copy count and structural references") {
    Instance in(1, 1, {flow_coflow({Flow{0, 0, 2}})});
    Schedule one;
    one.add(1, {0, 0, 0});
    CHECK(validate(in, one).violations.at(0).kind == ViolationKind::CopyCount);
    Schedule bad_coflow;
    bad_coflow.add(1, {3, 0, 0});
    CHECK_THROWS_AS(validate(in, bad_coflow), StructuralError);
    Schedule bad_flow;
    bad_flow.add(1, {0, 0, 5});
    CHECK_THROWS_AS(validate(in, bad_flow), StructuralError);
    Schedule zero;
    zero.add(0, {0, 0, 0});
    zero.add(1, {0, 0, 0});
    CHECK(validate(in, zero).violations.at(0).kind == ViolationKind::NonPositiveSlot);
  }

  TEST_CASE("weighted cost 1*1 + 2*2 = 5") {
    Instance in(2, 2, {unit_coflow({{0, 0}}, 1), unit_coflow({{1, 1}}, 2)});
    Schedule s;
    s.add(1, {0, 0, 0});
    s.add(2, {1, 1, 1});
    CHECK(cost(in, s).total == 5);
  }

  TEST_CASE("max degree") {
    const std::vector<Flow> triple{{0, 0, 3}};
    CHECK(max_degree(triple) == 3);
    const std::vector<Flow> k22{{0, 0, 1}, {0, 1, 1}, {1, 0, 1}, {1, 1, 1}};
    CHECK(max_degree(k22) == 2);
    CHECK(max_degree(std::span<const Flow>{}) == 0);
  }

  TEST_CASE("runs expand and merged duplicate flows are interchangeable") {
    Instance in(1, 1, {flow_coflow({Flow{0, 0, 1}, Flow{0, 0, 2}})});
    Schedule s;
    s.add_run(1, 3, {{0, 0, 0}});
    CHECK(validate(in, s).ok());
    CHECK(s.total_entries() == 3);
    CHECK(s.expand().size() == 3);
    CHECK(cost(in, s).completion[0] == 3);
    CHECK(s.shifted(2).makespan() == 5);
  }

  TEST_CASE("validation is deterministic") {
    Instance in(2, 2, {unit_coflow({{0, 0}, {1, 0}})});
    Schedule s;
    s.add(1, {0, 0, 0});
    s.add(1, {0, 1, 0});
    const auto a = validate(in, s), b = validate(in, s);
    REQUIRE(a.violations.size() == b.violations.size());
    for (std::size_t i = 0; i < a.violations.size(); ++i) CHECK(a.violations[i].message == b.violations[i].message);
  }

  TEST_CASE("expanded and restricted instances") {
    Instance in(2, 2, {flow_coflow({Flow{0, 1, 3}}, 2), unit_coflow({{1, 1}}, 5, 4)});
    const Instance e = in.expanded();
    CHECK(e.coflow(0).flows.size() == 3);
    CHECK(e.total_copies() == in.total_copies());
    const std::vector<std::size_t> keep{1};
    const Instance r = in.restricted(keep);
    CHECK(r.size() == 1);
    CHECK(r.coflow(0).release == 4);
    CHECK(in.total_weight() == 7);
  }
}

TEST_SUITE("json_io") {
  TEST_CASE("instance round trip") {
    Instance in(2, 3, {flow_coflow({Flow{0, 2, 4}}, make_rational(3, 2), 1), unit_coflow({{1, 0}})});
    const Instance back = instance_from_json(instance_to_json(in));
    CHECK(instance_to_json(back) == instance_to_json(in));
    CHECK(back.coflow(0).weight == make_rational(3, 2));
  }

  TEST_CASE("integer weights and missing fields") {
    const Instance in = instance_from_json(R"({"left":1,"right":1,"coflows":[{"weight":2,"flows":[{"u":0,"v":0}]}]})");
    CHECK(in.coflow(0).weight == 2);
    CHECK(in.coflow(0).release == 0);
    CHECK(in.coflow(0).flows[0].mult == 1);
  }

  TEST_CASE("malformed documents are structural errors") {
    CHECK_THROWS_AS(instance_from_json("{"), StructuralError);
    CHECK_THROWS_AS(instance_from_json(R"({"left":1})"), StructuralError);
    CHECK_THROWS_AS(instance_from_json(R"({"left":1,"right":1,"coflows":[{"weight":"x","flows":[]}]})"), StructuralError);
    CHECK_THROWS_AS(schedule_from_json(R"({"slots":{"a":[]}})"), StructuralError);
  }

  TEST_CASE("schedule round trip keeps numeric slot order") {
    Schedule s;
    s.add(10, {0, 0, 0});
    s.add(2, {1, 1, 1});
    const std::string text = schedule_to_json(s);
    CHECK(text.find("\"2\"") < text.find("\"10\""));
    CHECK(schedule_from_json(text).expand() == s.expand());
  }

  TEST_CASE("profile round trip") {
    Instance in(1, 1, {unit_coflow({{0, 0}}), unit_coflow({{0, 0}})});
    const DeadlineProfile p = make_profile(in, {make_rational(5, 2), from_int(1)}, make_rational(1, 2));
    const DeadlineProfile back = profile_from_json(in, profile_to_json(p));
    CHECK(back.deadlines == p.deadlines);
    CHECK(back.order == std::vector<std::size_t>{1, 0});
    CHECK(*back.theta == make_rational(1, 2));
  }
}
