#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coflow/rational.hpp"

namespace coflow {

/// Upper bound on an allocator's finishing time as a function of the
/// deadline x (and the release r for the affine form).
struct DelayFunction {
  enum class Form {
    /// a x + rc r + c
    Linear,
    /// low for x <= lambda (lambda > 0), otherwise step ceil((x - lambda) / tau) + c
    Ceiling,
    /// b for x < b + 1, otherwise a x + c
    Ckbf,
  };

  Form form = Form::Linear;
  Rational a = 0;
  Rational rc = 0;
  Rational c = 0;
  std::int64_t tau = 0;
  std::int64_t lambda = 0;
  std::int64_t b = 0;
  Rational step = 0;
  Rational low = 0;
  std::string label;

  static DelayFunction linear(Rational a, Rational c, std::string label = {});
  static DelayFunction with_release(Rational a, Rational rc, Rational c, std::string label = {});
  /// The CBF table entry: lambda + 2 up to lambda, then
  /// (tau+2) ceil((x-lambda)/tau) + lambda + 2 (no constant when lambda = 0).
  static DelayFunction cbf(std::int64_t tau, std::int64_t lambda);
  /// b below b + 1, then b plus the averaged CBF bound
  /// (tau+2)/tau x + tau/2 + 5/2 - 2/tau.
  static DelayFunction ckbf(std::int64_t tau, std::int64_t b);

  Rational value(const Rational& x, const Rational& r = 0) const;
  /// Long-run slope in x.
  Rational mean_slope() const;
  std::string describe() const;
};

struct WeightedDelay {
  DelayFunction f;
  Rational weight;
};

/// Target alpha (x+1), or a (x+1) + b (r+1) when `release` is set.
struct CertificateTarget {
  bool release = false;
  Rational alpha = 0;
  Rational a = 0;
  Rational b = 0;
  std::optional<Rational> claimed_ratio;

  /// 2 alpha, or 2 a + b.
  Rational ratio() const;
};

struct Certificate {
  std::string name;
  std::vector<WeightedDelay> terms;
  CertificateTarget target;
};

struct TightPoint {
  Rational x;
  /// 0: met at x; -1 / +1: met only in the limit from the left / right.
  int side = 0;
  /// Which extreme release (0 or x-1); empty for the plain form.
  std::optional<std::string> release;
};

struct CertificateVerdict {
  bool ok = false;
  bool weights_ok = false;
  Rational weight_sum;
  bool ratio_ok = true;
  /// Witness of a violated inequality, if any.
  std::optional<Rational> witness_x;
  std::optional<Rational> witness_r;
  std::vector<TightPoint> tight;
  bool tight_everywhere = false;
  /// Tight points recur with this period when the slopes agree.
  std::optional<Rational> period;
  Rational ratio;
  std::string message;

  /// Human summary, e.g. "alpha = 70/41, ratio = 140/41, tight for all x".
  std::string summary(const Certificate& cert) const;
};

/// Exact check of sum w_i f_i(x) <= target for every real x >= 1 (and both
/// extreme releases): all breakpoints and one-sided limits up to one full
/// period beyond the largest constant, then a slope comparison for the tail.
/// Throws std::invalid_argument for malformed certificates (a release term
/// under a plain target, tau < 1, negative weights).
CertificateVerdict verify_certificate(const Certificate& cert);

/// main, release, intgap, improved. Throws std::invalid_argument otherwise.
Certificate builtin_certificate(const std::string& name);
std::vector<std::string> builtin_certificate_names();

/// JSON list of {"form", "coefficients", "weight"}; exactly one entry has
/// form "target". Throws std::invalid_argument when malformed.
Certificate certificate_from_json(const std::string& text);
std::string certificate_to_json(const Certificate& cert);

}  // namespace coflow
