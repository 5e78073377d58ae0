#include "coflow/combine.hpp"

#include <atomic>
#include <chrono>
#include <exception>
#include <stdexcept>
#include <thread>

#include "coflow/cbf.hpp"
#include "coflow/greedy.hpp"

namespace coflow {

std::string PortfolioMember::name() const {
  switch (kind) {
    case Allocator::Greedy:
      return "greedy";
    case Allocator::GreedyMultiplicity:
      return "greedy-m";
    case Allocator::Cbf:
      return "cbf" + std::to_string(tau);
    case Allocator::CbfR:
      return "cbf-r" + std::to_string(tau);
    case Allocator::Ckbf:
      return "ckbf" + std::to_string(tau) + "," + std::to_string(b);
  }
  return "?";
}

namespace {

std::int64_t parse_positive(const std::string& text, const std::string& whole) {
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || v < 1) throw std::invalid_argument("bad portfolio member \"" + whole + "\"");
  return v;
}

}  // namespace

PortfolioMember parse_member(const std::string& text) {
  PortfolioMember m;
  auto suffix = [&](std::size_t n) {
    std::string rest = text.substr(n);
    if (!rest.empty() && rest[0] == ':') rest.erase(0, 1);
    return rest;
  };
  if (text == "greedy") {
    m.kind = Allocator::Greedy;
  } else if (text == "greedy-m") {
    m.kind = Allocator::GreedyMultiplicity;
  } else if (text.rfind("cbf-r", 0) == 0) {
    m.kind = Allocator::CbfR;
    m.tau = parse_positive(suffix(5), text);
  } else if (text.rfind("ckbf", 0) == 0) {
    m.kind = Allocator::Ckbf;
    const std::string rest = suffix(4);
    const auto comma = rest.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("ckbf member needs tau,b: \"" + text + "\"");
    m.tau = parse_positive(rest.substr(0, comma), text);
    m.b = parse_positive(rest.substr(comma + 1), text);
  } else if (text.rfind("cbf", 0) == 0) {
    m.kind = Allocator::Cbf;
    m.tau = parse_positive(suffix(3), text);
  } else {
    throw std::invalid_argument("unknown portfolio member \"" + text + "\"");
  }
  if (m.kind != Allocator::Greedy && m.kind != Allocator::GreedyMultiplicity && m.tau < 2) {
    throw std::invalid_argument("tau must be at least 2 in \"" + text + "\"");
  }
  return m;
}

std::vector<PortfolioMember> main_portfolio(std::int64_t tau) {
  return {PortfolioMember{Allocator::Greedy, tau, 1}, PortfolioMember{Allocator::Cbf, tau, 1}};
}

std::vector<PortfolioMember> release_portfolio(std::int64_t tau) {
  return {PortfolioMember{Allocator::Greedy, tau, 1}, PortfolioMember{Allocator::CbfR, tau, 1}};
}

MemberOutcome run_member(const Instance& instance, const CertifiedProfile& profile, const PortfolioMember& member) {
  const auto start = std::chrono::steady_clock::now();
  MemberOutcome out;
  out.member = member;
  switch (member.kind) {
    case Allocator::Greedy:
    case Allocator::GreedyMultiplicity: {
      if (member.kind == Allocator::Greedy) {
        out.schedule = (instance.has_releases() ? greedy_r(instance, profile) : greedy(instance, profile)).schedule;
      } else {
        out.schedule = greedy_multiplicity(instance, profile).schedule;
      }
      for (std::size_t j = 0; j < instance.size(); ++j) {
        out.coflow_bound.push_back(instance.coflow(j).release + 2 * profile.deadline(j) - 1);
      }
      break;
    }
    case Allocator::Cbf:
    case Allocator::CbfR: {
      CbfResult r = member.kind == Allocator::Cbf ? cbf(instance, profile, member.tau) : cbf_r(instance, profile, member.tau);
      out.schedule = std::move(r.schedule);
      out.lambda = r.lambda;
      out.bound = r.bound;
      for (std::size_t j = 0; j < instance.size(); ++j) {
        out.coflow_bound.push_back(trial_bound(profile.deadline(j), member.tau, r.lambda, member.kind == Allocator::CbfR));
      }
      break;
    }
    case Allocator::Ckbf: {
      CkbfResult r = ckbf(instance, profile, member.tau, member.b);
      out.schedule = std::move(r.schedule);
      out.bound = r.bound;
      if (r.rest) out.lambda = r.rest->lambda;
      for (std::size_t j = 0; j < instance.size(); ++j) {
        const Rational& c = profile.deadline(j);
        out.coflow_bound.push_back(c < member.b + 1 ? from_int(member.b)
                                                    : Rational(member.b + trial_bound(c, member.tau, *out.lambda, false)));
      }
      break;
    }
  }
  try {
    out.report = cost(instance, out.schedule);
  } catch (const InvalidSchedule& e) {
    throw std::logic_error(member.name() + " produced an invalid schedule: " + e.what());
  }
  out.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

CombinedResult combined(const Instance& instance, const CertifiedProfile& profile,
                        std::span<const PortfolioMember> portfolio, unsigned jobs) {
  if (portfolio.empty()) throw std::invalid_argument("empty portfolio");
  CombinedResult out;
  out.members.resize(portfolio.size());
  std::vector<std::exception_ptr> errors(portfolio.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < portfolio.size(); i = next++) {
      try {
        out.members[i] = run_member(instance, profile, portfolio[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(portfolio.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < n; ++k) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (std::size_t i = 1; i < out.members.size(); ++i) {
    if (out.members[i].report.total < out.members[out.best].report.total) out.best = i;
  }
  out.schedule = out.members[out.best].schedule;
  out.report = out.members[out.best].report;
  return out;
}

Rational degree_lower_bound(const Instance& instance) {
  Rational total = 0;
  for (const Coflow& c : instance.coflows()) total += c.weight * (c.release + max_degree(c));
  return total;
}

AsymptoticReport asymptotic_check(const Instance& instance, const CertifiedProfile& profile, std::int64_t tau,
                                  const std::optional<Rational>& known_opt) {
  AsymptoticReport out;
  out.tau = tau;
  out.cost = cbf_r(instance, profile, tau).cost;
  out.opt_exact = known_opt.has_value();
  out.opt = known_opt ? *known_opt : degree_lower_bound(instance);
  out.eps_hat = instance.total_weight() / out.opt;
  out.bound = 2 + make_rational(4, tau) + out.eps_hat * (2 * tau + 2);
  out.ratio = out.cost / out.opt;
  out.holds = out.ratio <= out.bound;
  if (out.opt_exact && !out.holds) {
    throw std::logic_error("cbf_r cost ratio " + to_string(out.ratio) + " exceeds 2 + 4/tau + eps(2tau+2) = " +
                           to_string(out.bound));
  }
  return out;
}

}  // namespace coflow
