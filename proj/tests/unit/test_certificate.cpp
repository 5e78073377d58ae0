#include <doctest.h>

#include "coflow/certificate.hpp"

using namespace coflow;

namespace {

Certificate main_by_hand(Rational w_greedy, Rational w_cbf) {
  Certificate c;
  c.name = "hand";
  c.terms.push_back({DelayFunction::linear(2, -1), w_greedy});
  c.terms.push_back({DelayFunction::linear(make_rational(4, 3), make_rational(31, 6)), w_cbf});
  c.target.alpha = make_rational(70, 41);
  return c;
}

}  // namespace

TEST_SUITE("certificate") {
  TEST_CASE("greedy plus cbf6 with 23/41 and 18/41") {
    const CertificateVerdict v = verify_certificate(main_by_hand(make_rational(23, 41), make_rational(18, 41)));
    CHECK(v.ok);
    CHECK(v.tight_everywhere);
    CHECK(v.ratio == make_rational(140, 41));
  }

  TEST_CASE("builtins") {
    const Certificate main = builtin_certificate("main");
    const CertificateVerdict vm = verify_certificate(main);
    CHECK(vm.ok);
    CHECK(vm.ratio == make_rational(140, 41));
    CHECK(vm.summary(main).find("alpha = 70/41, ratio = 140/41") != std::string::npos);
    CHECK(vm.summary(main).find("tight for all x") != std::string::npos);

    const CertificateVerdict vr = verify_certificate(builtin_certificate("release"));
    CHECK(vr.ok);
    CHECK(vr.ratio == make_rational(109, 25));
    CHECK(builtin_certificate("release").target.a == make_rational(46, 25));
    CHECK(builtin_certificate("release").target.b == make_rational(17, 25));

    const CertificateVerdict vi = verify_certificate(builtin_certificate("intgap"));
    CHECK(vi.ok);
    CHECK(vi.ratio == make_rational(109, 28));

    const Certificate imp = builtin_certificate("improved");
    const CertificateVerdict vv = verify_certificate(imp);
    CHECK(vv.ok);
    CHECK(imp.target.alpha == make_rational(2485, 1460));
    CHECK(vv.ratio == make_rational(497, 146));
    CHECK_FALSE(vv.tight.empty());

    CHECK_THROWS_AS(builtin_certificate("nope"), std::invalid_argument);
    CHECK(builtin_certificate_names().size() == 4);
  }

  TEST_CASE("weights must sum to one") {
    const CertificateVerdict v = verify_certificate(main_by_hand(make_rational(23, 41) - make_rational(1, 100), make_rational(18, 41)));
    CHECK_FALSE(v.ok);
    CHECK_FALSE(v.weights_ok);
  }

  TEST_CASE("a perturbed weight is caught with a witness") {
    Certificate c = builtin_certificate("improved");
    c.terms[0].weight += make_rational(1, 1000);
    c.terms[1].weight -= make_rational(1, 1000);
    const CertificateVerdict v = verify_certificate(c);
    CHECK_FALSE(v.ok);
    CHECK(v.witness_x.has_value());
  }

  TEST_CASE("a claimed ratio that disagrees is rejected") {
    Certificate c = builtin_certificate("main");
    c.target.claimed_ratio = make_rational(7, 2);
    CHECK_FALSE(verify_certificate(c).ok);
  }

  TEST_CASE("delay functions") {
    const DelayFunction cbf0 = DelayFunction::cbf(5, 0);
    CHECK(cbf0.value(1) == 7);
    CHECK(cbf0.value(5) == 7);
    CHECK(cbf0.value(6) == 14);
    const DelayFunction cbf3 = DelayFunction::cbf(5, 3);
    CHECK(cbf3.value(2) == 5);
    CHECK(cbf3.value(4) == 12);
    CHECK(cbf3.mean_slope() == make_rational(7, 5));
    const DelayFunction k = DelayFunction::ckbf(6, 1);
    CHECK(k.value(make_rational(3, 2)) == 1);
    CHECK(k.value(2) == 1 + make_rational(8, 6) * 2 + 3 + make_rational(5, 2) - make_rational(2, 6));
  }

  TEST_CASE("json round trip") {
    for (const std::string& name : builtin_certificate_names()) {
      const Certificate c = builtin_certificate(name);
      const Certificate back = certificate_from_json(certificate_to_json(c));
      CHECK(back.terms.size() == c.terms.size());
      CHECK(verify_certificate(back).ok);
    }
    CHECK_THROWS_AS(certificate_from_json("[]"), std::invalid_argument);
    CHECK_THROWS_AS(certificate_from_json("{"), std::invalid_argument);
  }
}
