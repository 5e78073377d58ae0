#include "coflow/certificate.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace coflow {

using nlohmann::json;

DelayFunction DelayFunction::linear(Rational a, Rational c, std::string label) {
  DelayFunction f;
  f.form = Form::Linear;
  f.a = std::move(a);
  f.c = std::move(c);
  f.label = std::move(label);
  return f;
}

DelayFunction DelayFunction::with_release(Rational a, Rational rc, Rational c, std::string label) {
  DelayFunction f = linear(std::move(a), std::move(c), std::move(label));
  f.rc = std::move(rc);
  return f;
}

DelayFunction DelayFunction::cbf(std::int64_t tau, std::int64_t lambda) {
  DelayFunction f;
  f.form = Form::Ceiling;
  f.tau = tau;
  f.lambda = lambda;
  f.step = from_int(tau + 2);
  f.c = lambda == 0 ? Rational(0) : from_int(lambda + 2);
  f.low = from_int(lambda + 2);
  f.label = "cbf(" + std::to_string(tau) + "," + std::to_string(lambda) + ")";
  return f;
}

DelayFunction DelayFunction::ckbf(std::int64_t tau, std::int64_t b) {
  DelayFunction f;
  f.form = Form::Ckbf;
  f.tau = tau;
  f.b = b;
  f.a = make_rational(tau + 2, tau);
  f.c = from_int(b) + make_rational(tau, 2) + make_rational(5, 2) - make_rational(2, tau);
  f.label = "ckbf(" + std::to_string(tau) + "," + std::to_string(b) + ")";
  return f;
}

namespace {

struct Affine {
  Rational x = 0;
  Rational r = 0;
  Rational c = 0;
};

Rational ceil_div(const Rational& num, std::int64_t den) {
  return Rational(ceil_of(num / from_int(den)));
}

// Closed form valid at x and, evaluated at an interior point, on the open
// piece around it.
Affine form_at(const DelayFunction& f, const Rational& x) {
  switch (f.form) {
    case DelayFunction::Form::Linear:
      return Affine{f.a, f.rc, f.c};
    case DelayFunction::Form::Ceiling:
      if (f.lambda > 0 && x <= f.lambda) return Affine{0, 0, f.low};
      return Affine{0, 0, f.step * ceil_div(x - f.lambda, f.tau) + f.c};
    case DelayFunction::Form::Ckbf:
      if (x < f.b + 1) return Affine{0, 0, from_int(f.b)};
      return Affine{f.a, 0, f.c};
  }
  return {};
}

enum class ReleaseCase { None, Zero, Latest };

const char* release_label(ReleaseCase rc) {
  return rc == ReleaseCase::Zero ? "r = 0" : "r = x-1";
}

Rational release_of(ReleaseCase rc, const Rational& x) {
  return rc == ReleaseCase::Latest ? Rational(x - 1) : Rational(0);
}

}  // namespace

Rational DelayFunction::value(const Rational& x, const Rational& r) const {
  const Affine f = form_at(*this, x);
  return f.x * x + f.r * r + f.c;
}

Rational DelayFunction::mean_slope() const {
  if (form == Form::Ceiling) return step / from_int(tau);
  return a;
}

std::string DelayFunction::describe() const {
  std::ostringstream os;
  switch (form) {
    case Form::Linear:
      os << to_string(a) << " x";
      if (rc != 0) os << " + " << to_string(rc) << " r";
      os << (c < 0 ? " - " : " + ") << to_string(abs(c));
      break;
    case Form::Ceiling:
      if (lambda > 0) os << to_string(low) << " for x <= " << lambda << ", else ";
      os << to_string(step) << " ceil((x - " << lambda << ")/" << tau << ")";
      if (c != 0) os << " + " << to_string(c);
      break;
    case Form::Ckbf:
      os << b << " for x < " << b + 1 << ", else " << to_string(a) << " x + " << to_string(c);
      break;
  }
  return os.str();
}

Rational CertificateTarget::ratio() const {
  return release ? Rational(2 * a + b) : Rational(2 * alpha);
}

namespace {

class Checker {
 public:
  explicit Checker(const Certificate& cert) : cert_(cert) {
    std::int64_t period = 1;
    Rational start = 1;
    for (const WeightedDelay& t : cert.terms) {
      const DelayFunction& f = t.f;
      if (t.weight < 0) throw std::invalid_argument("negative weight on " + f.label);
      if (f.rc != 0 && !cert.target.release) throw std::invalid_argument(f.label + " depends on r but the target does not");
      if (f.form != DelayFunction::Form::Linear) {
        if (f.tau < 1) throw std::invalid_argument(f.label + " needs tau >= 1");
        if (f.lambda < 0 || f.b < 0) throw std::invalid_argument(f.label + " has a negative offset");
        if (f.form == DelayFunction::Form::Ceiling) period = std::lcm(period, f.tau);
        start = std::max(start, from_int(f.form == DelayFunction::Form::Ckbf ? f.b + 1 : f.lambda));
      }
    }
    period_ = from_int(period);
    start_ = start;
    end_ = start + period_;

    std::set<Rational> points{Rational(1), end_};
    for (const WeightedDelay& t : cert.terms) {
      const DelayFunction& f = t.f;
      if (f.form == DelayFunction::Form::Linear) continue;
      if (f.form == DelayFunction::Form::Ckbf) {
        points.insert(from_int(f.b + 1));
        continue;
      }
      for (Rational p = from_int(f.lambda); p <= end_; p += f.tau) {
        if (p >= 1) points.insert(p);
      }
    }
    points_.assign(points.begin(), points.end());
  }

  CertificateVerdict run() {
    CertificateVerdict v;
    v.ratio = cert_.target.ratio();
    v.weight_sum = 0;
    for (const WeightedDelay& t : cert_.terms) v.weight_sum += t.weight;
    v.weights_ok = v.weight_sum == 1;
    if (cert_.target.claimed_ratio) v.ratio_ok = *cert_.target.claimed_ratio == v.ratio;

    bool all_zero = true;
    bool violated = false;
    const std::vector<ReleaseCase> cases =
        cert_.target.release ? std::vector<ReleaseCase>{ReleaseCase::Zero, ReleaseCase::Latest}
                             : std::vector<ReleaseCase>{ReleaseCase::None};
    bool periodic_tight = false;
    for (ReleaseCase rc : cases) {
      if (!check_case(rc, v, all_zero, periodic_tight)) {
        violated = true;
        break;
      }
    }
    v.tight_everywhere = !violated && all_zero;
    if (!violated && periodic_tight && !v.tight_everywhere) v.period = period_;
    v.ok = v.weights_ok && v.ratio_ok && !violated;

    std::ostringstream msg;
    if (!v.weights_ok) msg << "weights sum to " << to_string(v.weight_sum) << ", not 1; ";
    if (!v.ratio_ok) msg << "claimed ratio " << to_string(*cert_.target.claimed_ratio) << " differs from " << to_string(v.ratio) << "; ";
    if (violated) {
      msg << "violated at x = " << to_string(*v.witness_x);
      if (v.witness_r) msg << ", r = " << to_string(*v.witness_r);
      msg << "; ";
    }
    v.message = msg.str();
    if (!v.message.empty()) v.message.resize(v.message.size() - 2);
    return v;
  }

 private:
  Rational rhs(ReleaseCase rc, const Rational& x) const {
    const CertificateTarget& t = cert_.target;
    if (!t.release) return t.alpha * (x + 1);
    return t.a * (x + 1) + t.b * (release_of(rc, x) + 1);
  }

  // Slack of the inequality at x, using the piece containing `probe`.
  Rational slack(ReleaseCase rc, const Rational& x, const Rational& probe) const {
    Rational lhs = 0;
    const Rational r = release_of(rc, x);
    for (const WeightedDelay& t : cert_.terms) {
      const Affine f = form_at(t.f, probe);
      lhs += t.weight * (f.x * x + f.r * r + f.c);
    }
    return rhs(rc, x) - lhs;
  }

  Rational slack(ReleaseCase rc, const Rational& x) const { return slack(rc, x, x); }

  Rational tail_slope(ReleaseCase rc) const {
    const CertificateTarget& t = cert_.target;
    Rational d = t.release ? t.a + (rc == ReleaseCase::Latest ? t.b : Rational(0)) : t.alpha;
    for (const WeightedDelay& w : cert_.terms) {
      d -= w.weight * (w.f.mean_slope() + (rc == ReleaseCase::Latest ? w.f.rc : Rational(0)));
    }
    return d;
  }

  void witness(CertificateVerdict& v, ReleaseCase rc, const Rational& x) const {
    if (slack(rc, x) >= 0) throw std::logic_error("certificate witness does not violate the bound");
    v.witness_x = x;
    if (rc != ReleaseCase::None) v.witness_r = release_of(rc, x);
  }

  void tight(CertificateVerdict& v, ReleaseCase rc, const Rational& x, int side) const {
    TightPoint p{x, side, std::nullopt};
    if (rc != ReleaseCase::None) p.release = release_label(rc);
    v.tight.push_back(std::move(p));
  }

  bool check_case(ReleaseCase rc, CertificateVerdict& v, bool& all_zero, bool& periodic_tight) const {
    for (std::size_t k = 0; k < points_.size(); ++k) {
      const Rational& p = points_[k];
      const Rational at = slack(rc, p);
      if (at < 0) {
        witness(v, rc, p);
        return false;
      }
      if (at == 0) {
        tight(v, rc, p, 0);
        if (p >= start_) periodic_tight = true;
      } else {
        all_zero = false;
      }
      if (k + 1 == points_.size()) break;

      const Rational& q = points_[k + 1];
      const Rational mid = (p + q) / 2;
      const Rational left = slack(rc, p, mid);
      const Rational right = slack(rc, q, mid);
      if (left < 0 || right < 0) {
        // Linear on (p, q): step inside from the negative end.
        Rational x = mid;
        if (left >= 0) {
          const Rational root = p + left / (left - right) * (q - p);
          x = (root + q) / 2;
        } else if (right >= 0) {
          const Rational root = p + left / (left - right) * (q - p);
          x = (p + root) / 2;
        }
        witness(v, rc, x);
        return false;
      }
      if (left == 0 && at != 0) {
        tight(v, rc, p, +1);
        if (p >= start_) periodic_tight = true;
      }
      if (right == 0 && slack(rc, q) != 0) {
        tight(v, rc, q, -1);
        if (q > start_) periodic_tight = true;
      }
      if (left != 0 || right != 0) all_zero = false;
    }

    const Rational d = tail_slope(rc);
    if (d < 0) {
      // slack(x + k P) = slack(x) + d k P for x >= start_.
      const Rational base = slack(rc, start_);
      const Rational k = Rational(floor_of(base / (-d * period_))) + 1;
      witness(v, rc, start_ + k * period_);
      return false;
    }
    if (d != 0) {
      all_zero = false;
      periodic_tight = false;
    }
    return true;
  }

  const Certificate& cert_;
  Rational period_;
  Rational start_;
  Rational end_;
  std::vector<Rational> points_;
};

}  // namespace

CertificateVerdict verify_certificate(const Certificate& cert) {
  if (cert.terms.empty()) throw std::invalid_argument("certificate has no terms");
  return Checker(cert).run();
}

std::string CertificateVerdict::summary(const Certificate& cert) const {
  std::ostringstream os;
  const CertificateTarget& t = cert.target;
  const bool ceilings = std::any_of(cert.terms.begin(), cert.terms.end(),
                                    [](const WeightedDelay& w) { return w.f.form != DelayFunction::Form::Linear; });
  if (t.release) {
    os << "a = " << to_string(t.a) << ", b = " << to_string(t.b);
  } else if (ceilings) {
    os << "bound = " << to_string(t.alpha) << " (x+1)";
  } else {
    os << "alpha = " << to_string(t.alpha);
  }
  os << ", ratio = " << to_string(ratio) << " (" << to_decimal(ratio) << ")";
  if (!ok) {
    os << ", REJECTED: " << message;
    return os.str();
  }
  if (tight_everywhere) {
    os << ", tight for all x";
  } else if (tight.empty()) {
    os << ", nowhere tight";
  } else {
    os << ", tight at x =";
    for (std::size_t i = 0; i < tight.size(); ++i) {
      const TightPoint& p = tight[i];
      os << (i ? ", " : " ") << to_string(p.x) << (p.side < 0 ? "-" : p.side > 0 ? "+" : "");
      if (p.release) os << " [" << *p.release << "]";
    }
    if (period) os << " (repeating every " << to_string(*period) << ")";
  }
  return os.str();
}

Certificate builtin_certificate(const std::string& name) {
  Certificate cert;
  cert.name = name;
  if (name == "main") {
    cert.terms = {{DelayFunction::linear(2, -1, "greedy"), make_rational(23, 41)},
                  {DelayFunction::linear(make_rational(4, 3), make_rational(31, 6), "cbf(6)"), make_rational(18, 41)}};
    cert.target.alpha = make_rational(70, 41);
    cert.target.claimed_ratio = make_rational(140, 41);
  } else if (name == "release") {
    cert.terms = {{DelayFunction::with_release(2, 1, -1, "greedy_r"), make_rational(68, 100)},
                  {DelayFunction::linear(make_rational(3, 2), 10, "cbf_r(4)"), make_rational(32, 100)}};
    cert.target.release = true;
    cert.target.a = make_rational(184, 100);
    cert.target.b = make_rational(68, 100);
    cert.target.claimed_ratio = make_rational(436, 100);
  } else if (name == "intgap") {
    cert.terms = {{DelayFunction::linear(2, 1, "matching"), make_rational(51, 56)},
                  {DelayFunction::linear(make_rational(7, 5), make_rational(116, 10), "cbf_r(5)"), make_rational(5, 56)}};
    cert.target.alpha = make_rational(109, 56);
    cert.target.claimed_ratio = make_rational(109, 28);
  } else if (name == "improved") {
    cert.terms = {{DelayFunction::linear(2, -1, "greedy"), make_rational(749, 1460)},
                  {DelayFunction::ckbf(6, 1), make_rational(126, 1460)}};
    for (std::int64_t lambda : {0, 3, 4, 6, 7}) {
      cert.terms.push_back({DelayFunction::cbf(5, lambda), make_rational(117, 1460)});
    }
    cert.target.alpha = make_rational(2485, 1460);
    cert.target.claimed_ratio = make_rational(497, 146);
  } else {
    throw std::invalid_argument("unknown builtin certificate \"" + name + "\"");
  }
  return cert;
}

std::vector<std::string> builtin_certificate_names() { return {"main", "release", "intgap", "improved"}; }

namespace {

Rational json_rational(const json& obj, const char* key, const Rational& fallback, bool required = false) {
  if (!obj.contains(key)) {
    if (required) throw std::invalid_argument(std::string("missing coefficient \"") + key + "\"");
    return fallback;
  }
  const json& v = obj.at(key);
  if (v.is_number_integer()) return from_int(v.get<std::int64_t>());
  if (v.is_string()) return parse_rational(v.get<std::string>());
  throw std::invalid_argument(std::string("coefficient \"") + key + "\" must be an integer or a string");
}

std::int64_t json_int(const json& obj, const char* key) {
  if (!obj.contains(key) || !obj.at(key).is_number_integer()) {
    throw std::invalid_argument(std::string("missing integer \"") + key + "\"");
  }
  return obj.at(key).get<std::int64_t>();
}

}  // namespace

Certificate certificate_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed certificate JSON: ") + e.what());
  }
  if (!doc.is_array()) throw std::invalid_argument("certificate must be a JSON list");
  Certificate cert;
  bool have_target = false;
  for (const json& entry : doc) {
    if (!entry.is_object() || !entry.contains("form") || !entry.at("form").is_string()) {
      throw std::invalid_argument("certificate entry needs a \"form\"");
    }
    const std::string form = entry.at("form").get<std::string>();
    const json coef = entry.value("coefficients", json::object());
    if (form == "target") {
      if (have_target) throw std::invalid_argument("certificate has two targets");
      have_target = true;
      if (coef.contains("alpha")) {
        cert.target.alpha = json_rational(coef, "alpha", 0, true);
      } else {
        cert.target.release = true;
        cert.target.a = json_rational(coef, "a", 0, true);
        cert.target.b = json_rational(coef, "b", 0, true);
      }
      if (coef.contains("ratio")) cert.target.claimed_ratio = json_rational(coef, "ratio", 0);
      continue;
    }
    DelayFunction f;
    if (form == "linear") {
      f = DelayFunction::with_release(json_rational(coef, "a", 0, true), json_rational(coef, "r", 0),
                                      json_rational(coef, "c", 0));
    } else if (form == "ceiling") {
      f = DelayFunction::cbf(json_int(coef, "tau"), coef.contains("lambda") ? json_int(coef, "lambda") : 0);
      f.step = json_rational(coef, "step", f.step);
      f.c = json_rational(coef, "c", f.c);
      f.low = json_rational(coef, "low", f.low);
    } else if (form == "ckbf") {
      f = DelayFunction::ckbf(json_int(coef, "tau"), json_int(coef, "b"));
      f.a = json_rational(coef, "a", f.a);
      f.c = json_rational(coef, "c", f.c);
    } else {
      throw std::invalid_argument("unknown form \"" + form + "\"");
    }
    if (entry.contains("label") && entry.at("label").is_string()) f.label = entry.at("label").get<std::string>();
    if (!entry.contains("weight")) throw std::invalid_argument("certificate entry without weight");
    cert.terms.push_back({std::move(f), json_rational(entry, "weight", 0, true)});
  }
  if (!have_target) throw std::invalid_argument("certificate has no target entry");
  return cert;
}

std::string certificate_to_json(const Certificate& cert) {
  json doc = json::array();
  for (const WeightedDelay& t : cert.terms) {
    const DelayFunction& f = t.f;
    json coef;
    switch (f.form) {
      case DelayFunction::Form::Linear:
        coef = {{"a", to_string(f.a)}, {"c", to_string(f.c)}};
        if (f.rc != 0) coef["r"] = to_string(f.rc);
        doc.push_back({{"form", "linear"}, {"coefficients", coef}, {"weight", to_string(t.weight)}, {"label", f.label}});
        break;
      case DelayFunction::Form::Ceiling:
        coef = {{"tau", f.tau}, {"lambda", f.lambda}, {"step", to_string(f.step)}, {"c", to_string(f.c)},
                {"low", to_string(f.low)}};
        doc.push_back({{"form", "ceiling"}, {"coefficients", coef}, {"weight", to_string(t.weight)}, {"label", f.label}});
        break;
      case DelayFunction::Form::Ckbf:
        coef = {{"tau", f.tau}, {"b", f.b}, {"a", to_string(f.a)}, {"c", to_string(f.c)}};
        doc.push_back({{"form", "ckbf"}, {"coefficients", coef}, {"weight", to_string(t.weight)}, {"label", f.label}});
        break;
    }
  }
  json target;
  if (cert.target.release) {
    target = {{"a", to_string(cert.target.a)}, {"b", to_string(cert.target.b)}};
  } else {
    target = {{"alpha", to_string(cert.target.alpha)}};
  }
  if (cert.target.claimed_ratio) target["ratio"] = to_string(*cert.target.claimed_ratio);
  doc.push_back({{"form", "target"}, {"coefficients", target}});
  return doc.dump(2) + "\n";
}

}  // namespace coflow
