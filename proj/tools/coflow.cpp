// coflow: command-line front end for the scheduling library.
//
// Exit codes: 0 ok, 1 verification or certificate failure, 2 usage or
// structural error.

#include <glob.h>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "coflow/cbf.hpp"
#include "coflow/certificate.hpp"
#include "coflow/combine.hpp"
#include "coflow/deadlines.hpp"
#include "coflow/generator.hpp"
#include "coflow/json_io.hpp"
#include "coflow/oracle.hpp"

using namespace coflow;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

std::mutex err_mutex_;

// Raised for bad flags or unreadable inputs.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

unsigned resolve_jobs(unsigned flag) {
  if (const char* env = std::getenv("COFLOW_JOBS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("COFLOW_JOBS must be a positive integer, got \"") + env + "\"");
  }
  return std::max(1u, flag);
}

RoundingMode parse_mode(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  std::uint64_t n = 0;
  try {
    if (colon == std::string::npos) throw std::invalid_argument(text);
    std::size_t used = 0;
    n = std::stoull(text.substr(colon + 1), &used);
    if (used != text.size() - colon - 1) throw std::invalid_argument(text);
  } catch (const std::exception&) {
    throw UsageError("deadline mode must be seed:N or candidates:N, got \"" + text + "\"");
  }
  if (kind == "seed") return SeededRounding{n};
  if (kind == "candidates" && n > 0) return CandidateRounding{static_cast<std::size_t>(n)};
  throw UsageError("deadline mode must be seed:N or candidates:N, got \"" + text + "\"");
}

DeadlineLpChoice parse_lp(const std::string& text) {
  if (text == "auto") return DeadlineLpChoice::Auto;
  if (text == "time") return DeadlineLpChoice::TimeIndexed;
  if (text == "intervals") return DeadlineLpChoice::Intervals;
  throw UsageError("--lp must be auto, time or intervals");
}

Instance load_instance(const std::string& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::runtime_error& e) {
    throw UsageError(e.what());
  }
  return instance_from_json(text);
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  try {
    write_file(path, text);
  } catch (const std::runtime_error& e) {
    throw UsageError(e.what());
  }
}

std::string decimal_note(const Rational& r) { return to_string(r) + " (" + to_decimal(r) + ")"; }

// Algorithm names accepted by solve and bench.
struct AlgoSpec {
  std::string name;
  std::vector<PortfolioMember> members;
  bool portfolio = false;
  std::int64_t tau = 0;
  std::optional<std::int64_t> b;
};

AlgoSpec parse_algo(const std::string& name, std::optional<std::int64_t> tau, std::int64_t b) {
  AlgoSpec spec;
  spec.name = name;
  if (name == "combined") {
    spec.tau = tau.value_or(6);
    spec.members = main_portfolio(spec.tau);
    spec.portfolio = true;
  } else if (name == "combined-r") {
    spec.tau = tau.value_or(4);
    spec.members = release_portfolio(spec.tau);
    spec.portfolio = true;
  } else if (name == "greedy" || name == "greedy-m") {
    spec.members = {parse_member(name)};
  } else if (name == "cbf" || name == "cbf-r") {
    spec.tau = tau.value_or(name == "cbf" ? 6 : 4);
    spec.members = {parse_member(name + std::to_string(spec.tau))};
  } else if (name == "ckbf") {
    spec.tau = tau.value_or(6);
    spec.b = b;
    spec.members = {parse_member("ckbf" + std::to_string(spec.tau) + "," + std::to_string(b))};
  } else {
    // Explicit members such as cbf6 or ckbf6,1.
    try {
      spec.members = {parse_member(name)};
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    spec.tau = spec.members[0].tau;
    if (spec.members[0].kind == Allocator::Ckbf) spec.b = spec.members[0].b;
    if (spec.members[0].kind == Allocator::Greedy || spec.members[0].kind == Allocator::GreedyMultiplicity) spec.tau = 0;
  }
  if ((spec.tau != 0 && spec.tau < 2) || b < 1) throw UsageError("tau must be >= 2 and b >= 1");
  return spec;
}

CombinedResult run_algo(const Instance& instance, const CertifiedProfile& profile, const AlgoSpec& spec,
                        unsigned jobs) {
  return combined(instance, profile, spec.members, jobs);
}

// ---------------------------------------------------------------------------

struct GenArgs {
  GeneratorOptions options;
  std::string out;
};

void add_gen_flags(CLI::App* cmd, GeneratorOptions& o) {
  cmd->add_option("--seed", o.seed, "generator seed");
  cmd->add_option("--left", o.left, "left vertices")->check(CLI::PositiveNumber);
  cmd->add_option("--right", o.right, "right vertices")->check(CLI::PositiveNumber);
  cmd->add_option("--coflows", o.coflows, "number of coflows")->check(CLI::PositiveNumber);
  cmd->add_option("--max-mult", o.max_mult, "largest multiplicity")->check(CLI::PositiveNumber);
  cmd->add_option("--max-flows", o.max_flows, "largest number of flows per coflow")->check(CLI::PositiveNumber);
  cmd->add_option("--release-max", o.release_max, "largest release date")->check(CLI::NonNegativeNumber);
}

int cmd_gen(const GenArgs& a) {
  Instance instance;
  try {
    instance = generate_instance(a.options);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  emit(a.out, instance_to_json(instance));
  return kOk;
}

struct DeadlineArgs {
  std::string mode = "candidates:16";
  std::string lp = "auto";
  std::string epsilon = "1/4";

  DeadlineOptions options() const {
    DeadlineOptions o;
    o.mode = parse_mode(mode);
    o.lp = parse_lp(lp);
    try {
      o.epsilon = parse_rational(epsilon);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("--epsilon: ") + e.what());
    }
    if (o.epsilon <= 0) throw UsageError("--epsilon must be positive");
    return o;
  }
};

void add_deadline_flags(CLI::App* cmd, DeadlineArgs& d) {
  cmd->add_option("--deadline-mode", d.mode, "seed:N or candidates:N")->capture_default_str();
  cmd->add_option("--lp", d.lp, "deadline LP: auto, time or intervals")->capture_default_str();
  cmd->add_option("--epsilon", d.epsilon, "interval growth for the geometric LP")->capture_default_str();
}

struct SolveArgs {
  std::string instance;
  std::string algo = "combined";
  std::optional<std::int64_t> tau;
  std::int64_t b = 1;
  DeadlineArgs deadlines;
  std::string profile;
  std::string out;
  std::string profile_out;
  std::string audit;
  std::string dump_lp;
  unsigned jobs = 1;
};

int cmd_solve(const SolveArgs& a) {
  const Instance instance = load_instance(a.instance);
  const AlgoSpec spec = parse_algo(a.algo, a.tau, a.b);
  const DeadlineOptions dopt = a.deadlines.options();
  if (!a.dump_lp.empty()) emit(a.dump_lp, deadline_lp(instance, dopt).lp.dump());

  std::optional<CertifiedProfile> profile;
  if (!a.profile.empty()) {
    std::string text;
    try {
      text = read_file(a.profile);
    } catch (const std::runtime_error& e) {
      throw UsageError(e.what());
    }
    profile = certify(instance, profile_from_json(instance, text));
  } else {
    profile = generate_deadlines(instance, dopt);
  }
  if (!a.profile_out.empty()) emit(a.profile_out, profile_to_json(profile->profile()));

  const CombinedResult result = run_algo(instance, *profile, spec, resolve_jobs(a.jobs));
  const ValidationReport check = validate(instance, result.schedule);
  if (!check.ok()) {
    std::cerr << "schedule failed validation:\n";
    for (const Violation& v : check.violations) std::cerr << "  " << v.message << "\n";
    return kFailure;
  }
  if (!a.audit.empty()) {
    // Rounding audit of the winning CBF trial, one JSON object per iteration.
    const MemberOutcome& win = result.members[result.best];
    std::string text;
    if ((win.member.kind == Allocator::Cbf || win.member.kind == Allocator::CbfR) && win.lambda) {
      text = cbf_trial(instance, *profile, win.member.tau, *win.lambda, win.member.kind == Allocator::CbfR)
                 .assignment.audit.jsonl();
    }
    emit(a.audit, text);
  }
  if (!a.out.empty()) emit(a.out, schedule_to_json(result.schedule));

  std::ostream& os = a.out == "-" ? std::cerr : std::cout;
  const DeadlineProfile& p = profile->profile();
  os << "algo: " << spec.name;
  if (spec.tau) os << " tau " << spec.tau;
  if (spec.b) os << " b " << *spec.b;
  os << "\n";
  if (p.theta) os << "theta: " << to_string(*p.theta) << "\n";
  os << "deadline sum: " << decimal_note(p.weighted_sum(instance)) << "\n";
  for (std::size_t i = 0; i < result.members.size(); ++i) {
    const MemberOutcome& m = result.members[i];
    os << "member " << m.member.name() << ": cost " << decimal_note(m.report.total);
    if (m.lambda) os << ", lambda " << *m.lambda;
    if (m.bound) os << ", weighted bound " << to_string(*m.bound);
    os << (i == result.best ? " [chosen]" : "") << "\n";
  }
  const MemberOutcome& win = result.members[result.best];
  for (std::size_t j = 0; j < instance.size(); ++j) {
    const Slot f = result.report.completion[j];
    os << "coflow " << j << ": release " << instance.coflow(j).release << ", deadline " << to_string(p.deadlines[j])
       << ", finish " << f << ", bound " << to_string(win.coflow_bound[j])
       << (f <= win.coflow_bound[j] ? " ok" : " EXCEEDED") << "\n";
  }
  os << "cost: " << to_string(result.report.total) << "\n";
  return kOk;
}

struct VerifyArgs {
  std::string instance;
  std::string schedule;
};

int cmd_verify(const VerifyArgs& a) {
  const Instance instance = load_instance(a.instance);
  std::string text;
  try {
    text = read_file(a.schedule);
  } catch (const std::runtime_error& e) {
    throw UsageError(e.what());
  }
  const Schedule schedule = schedule_from_json(text);
  const ValidationReport report = validate(instance, schedule);
  if (!report.ok()) {
    std::cout << "invalid: " << report.violations.size() << " violation(s)\n";
    for (const Violation& v : report.violations) std::cout << "  " << to_string(v.kind) << ": " << v.message << "\n";
    return kFailure;
  }
  const CostReport c = cost(instance, schedule);
  std::cout << "valid\n";
  for (std::size_t j = 0; j < c.completion.size(); ++j) std::cout << "coflow " << j << ": finish " << c.completion[j] << "\n";
  std::cout << "cost: " << to_string(c.total) << "\n";
  return kOk;
}

struct BenchArgs {
  std::vector<std::string> instances;
  std::size_t gen_count = 0;
  GeneratorOptions gen;
  std::string portfolio = "greedy+cbf6+combined";
  std::optional<std::int64_t> tau;
  std::int64_t b = 1;
  DeadlineArgs deadlines;
  bool with_opt = false;
  std::int64_t opt_limit = 10;
  std::string out;
  unsigned jobs = 1;
};

std::vector<std::string> expand_globs(const std::vector<std::string>& patterns) {
  std::vector<std::string> out;
  for (const std::string& pattern : patterns) {
    glob_t g{};
    const int rc = ::glob(pattern.c_str(), 0, nullptr, &g);
    if (rc == 0) {
      for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
    } else if (rc != GLOB_NOMATCH) {
      globfree(&g);
      throw UsageError("cannot expand \"" + pattern + "\"");
    }
    globfree(&g);
  }
  return out;
}

std::string optional_int(const std::optional<std::int64_t>& v) { return v ? std::to_string(*v) : std::string(); }

int cmd_bench(const BenchArgs& a) {
  struct Source {
    std::string id;
    std::optional<std::uint64_t> seed;
    std::string path;
  };
  std::vector<Source> sources;
  for (const std::string& path : expand_globs(a.instances)) sources.push_back({path, std::nullopt, path});
  for (std::size_t k = 0; k < a.gen_count; ++k) {
    const std::uint64_t seed = a.gen.seed + k;
    sources.push_back({"gen-" + std::to_string(seed), seed, {}});
  }

  std::vector<AlgoSpec> algos;
  std::stringstream parts(a.portfolio);
  for (std::string item; std::getline(parts, item, '+');) {
    if (!item.empty()) algos.push_back(parse_algo(item, a.tau, a.b));
  }
  if (algos.empty()) throw UsageError("empty portfolio");
  const DeadlineOptions dopt = a.deadlines.options();

  std::vector<std::vector<std::string>> rows(sources.size());
  std::vector<std::string> errors(sources.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < sources.size(); i = next++) {
      const Source& s = sources[i];
      try {
        Instance instance;
        if (s.seed) {
          GeneratorOptions g = a.gen;
          g.seed = *s.seed;
          instance = generate_instance(g);
        } else {
          instance = load_instance(s.path);
        }
        const CertifiedProfile profile = generate_deadlines(instance, dopt);
        std::optional<Rational> best;
        if (a.with_opt) {
          OracleOptions o;
          o.copy_limit = a.opt_limit;
          try {
            best = opt(instance, o).report.total;
          } catch (const OracleRefused&) {
          }
        }
        for (const AlgoSpec& spec : algos) {
          std::ostringstream row;
          row << s.id << "," << (s.seed ? std::to_string(*s.seed) : "") << "," << spec.name << ",";
          try {
            const auto start = std::chrono::steady_clock::now();
            const CombinedResult r = run_algo(instance, profile, spec, 1);
            const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
            const MemberOutcome& win = r.members[r.best];
            const bool has_tau = spec.portfolio || win.member.kind != Allocator::Greedy;
            row << (has_tau && spec.tau ? std::to_string(spec.tau) : "") << "," << optional_int(win.lambda) << ","
                << optional_int(spec.b) << "," << to_string(r.report.total) << ",";
            if (best) row << to_string(*best) << "," << to_string(r.report.total / *best);
            else row << ",";
            row << "," << to_decimal(Rational(static_cast<long>(ms * 1000), 1000), 3);
          } catch (const std::invalid_argument& e) {
            // allocator not applicable (e.g. releases); leave cost empty
            row << ",,,,,,";
            std::lock_guard<std::mutex> lock(err_mutex_);
            std::cerr << s.id << " " << spec.name << ": " << e.what() << "\n";
          }
          rows[i].push_back(row.str());
        }
      } catch (const std::exception& e) {
        errors[i] = s.id + ": " + e.what();
      }
    }
  };
  const unsigned jobs = std::min<unsigned>(resolve_jobs(a.jobs), std::max<std::size_t>(1, sources.size()));
  if (jobs <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < jobs; ++k) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  for (const std::string& e : errors) {
    if (!e.empty()) throw std::runtime_error(e);
  }
  std::ostringstream csv;
  csv << "instance,seed,algo,tau,lambda,b,cost,opt,ratio,ms\n";
  for (const auto& list : rows) {
    for (const std::string& row : list) csv << row << "\n";
  }
  emit(a.out, csv.str());
  return kOk;
}

struct CertifyArgs {
  std::string file;
  std::string builtin;
  std::string dump;
};

int cmd_certify(const CertifyArgs& a) {
  if (a.file.empty() == a.builtin.empty()) throw UsageError("give either a certificate file or --builtin");
  Certificate cert;
  try {
    if (!a.builtin.empty()) {
      cert = builtin_certificate(a.builtin);
    } else {
      std::string text;
      try {
        text = read_file(a.file);
      } catch (const std::runtime_error& e) {
        throw UsageError(e.what());
      }
      cert = certificate_from_json(text);
      cert.name = a.file;
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (!a.dump.empty()) emit(a.dump, certificate_to_json(cert));
  CertificateVerdict verdict;
  try {
    verdict = verify_certificate(cert);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  for (const WeightedDelay& t : cert.terms) {
    std::cout << "  " << to_string(t.weight) << " * " << (t.f.label.empty() ? "f" : t.f.label) << "(x) = " << t.f.describe()
              << "\n";
  }
  std::cout << (verdict.ok ? "verified: " : "rejected: ") << verdict.summary(cert) << "\n";
  return verdict.ok ? kOk : kFailure;
}

struct OptArgs {
  std::string instance;
  std::int64_t limit = 10;
  std::optional<Slot> horizon;
  std::string out;
};

int cmd_opt(const OptArgs& a) {
  const Instance instance = load_instance(a.instance);
  OracleOptions o;
  o.copy_limit = a.limit;
  o.horizon = a.horizon;
  OracleResult r;
  try {
    r = opt(instance, o);
  } catch (const OracleRefused& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  }
  if (!a.out.empty()) emit(a.out, schedule_to_json(r.schedule));
  std::ostream& os = a.out == "-" ? std::cerr : std::cout;
  for (std::size_t j = 0; j < r.report.completion.size(); ++j) os << "coflow " << j << ": finish " << r.report.completion[j] << "\n";
  os << "nodes: " << r.nodes << "\n";
  os << "opt: " << to_string(r.report.total) << "\n";
  return kOk;
}

struct FixtureArgs {
  std::string out;
  std::string profile_out;
  bool check = false;
};

int cmd_fixture(const FixtureArgs& a) {
  auto [instance, profile] = a1_fixture();
  emit(a.out, instance_to_json(instance));
  if (!a.profile_out.empty()) emit(a.profile_out, profile_to_json(profile));
  if (a.check) {
    std::ostream& os = a.out.empty() || a.out == "-" ? std::cerr : std::cout;
    const BlockFeasibility lp = check_lp_i(instance, profile);
    OracleOptions o;
    o.feasibility_copy_limit = instance.total_copies();
    const bool integral = deadline_feasible_integral(instance, profile, o);
    os << "block LP feasible: " << (lp.feasible ? "yes" : "no") << "\n";
    os << "integral schedule meeting deadlines: " << (integral ? "yes" : "no") << "\n";
    return lp.feasible && !integral ? kOk : kFailure;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coflow scheduling: deadlines, allocators, oracle and certificates"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "generate a random instance");
  add_gen_flags(g, gen.options);
  g->add_option("-o,--out", gen.out, "output file (stdout if omitted)");

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "deadlines, allocation and validation");
  s->add_option("instance", solve.instance, "instance JSON")->required();
  s->add_option("--algo", solve.algo, "greedy|greedy-m|cbf|cbf-r|ckbf|combined|combined-r")->capture_default_str();
  s->add_option("--tau", solve.tau, "block length (default 6; 4 for combined-r)");
  s->add_option("--b", solve.b, "prefix length for ckbf")->capture_default_str();
  add_deadline_flags(s, solve.deadlines);
  s->add_option("--profile", solve.profile, "use these deadlines instead of generating them");
  s->add_option("-o,--out", solve.out, "schedule output file");
  s->add_option("--profile-out", solve.profile_out, "write the deadline profile");
  s->add_option("--audit", solve.audit, "write the rounding audit (JSON lines)");
  s->add_option("--dump-lp", solve.dump_lp, "write the deadline LP in plain text");
  s->add_option("--jobs", solve.jobs, "portfolio members run concurrently")->capture_default_str();

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "validate a schedule and report its cost");
  v->add_option("instance", verify.instance, "instance JSON")->required();
  v->add_option("schedule", verify.schedule, "schedule JSON")->required();

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "run a portfolio over many instances, CSV out");
  b->add_option("--instances", bench.instances, "instance files or glob patterns");
  b->add_option("--gen", bench.gen_count, "number of generated instances (seeds from --seed)");
  add_gen_flags(b, bench.gen);
  b->add_option("--portfolio", bench.portfolio, "algorithms joined by '+'")->capture_default_str();
  b->add_option("--tau", bench.tau, "tau for cbf/ckbf/combined entries");
  b->add_option("--b", bench.b, "prefix length for ckbf")->capture_default_str();
  add_deadline_flags(b, bench.deadlines);
  b->add_flag("--with-opt", bench.with_opt, "add oracle OPT and the ratio where the size permits");
  b->add_option("--opt-limit", bench.opt_limit, "oracle copy limit")->capture_default_str();
  b->add_option("-o,--out", bench.out, "CSV output file (stdout if omitted)");
  b->add_option("--jobs", bench.jobs, "instances run concurrently")->capture_default_str();

  CertifyArgs certify_args;
  auto* c = app.add_subcommand("certify", "verify a combination certificate exactly");
  c->add_option("file", certify_args.file, "certificate JSON");
  c->add_option("--builtin", certify_args.builtin, "main|release|intgap|improved");
  c->add_option("--dump", certify_args.dump, "write the certificate JSON");

  OptArgs opt_args;
  auto* o = app.add_subcommand("opt", "exact optimum of a small instance");
  o->add_option("instance", opt_args.instance, "instance JSON")->required();
  o->add_option("--limit", opt_args.limit, "largest number of unit copies")->capture_default_str();
  o->add_option("--horizon", opt_args.horizon, "last slot to consider");
  o->add_option("-o,--out", opt_args.out, "optimal schedule output");

  FixtureArgs fixture;
  auto* f = app.add_subcommand("fixture-a1", "write the 4-coflow gadget instance");
  f->add_option("-o,--out", fixture.out, "instance output (stdout if omitted)");
  f->add_option("--profile-out", fixture.profile_out, "deadline profile output");
  f->add_flag("--check", fixture.check, "report block LP and integral feasibility");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*g) return cmd_gen(gen);
    if (*s) return cmd_solve(solve);
    if (*v) return cmd_verify(verify);
    if (*b) return cmd_bench(bench);
    if (*c) return cmd_certify(certify_args);
    if (*o) return cmd_opt(opt_args);
    if (*f) return cmd_fixture(fixture);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const StructuralError& e) {
    std::cerr << "structural error: " << e.what() << "\n";
    return kUsage;
  } catch (const ProfileRejected& e) {
    std::cerr << "deadline profile rejected: " << e.what() << "\n";
    return kFailure;
  } catch (const InvalidSchedule& e) {
    std::cerr << "invalid schedule: " << e.what() << "\n";
    return kFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}
