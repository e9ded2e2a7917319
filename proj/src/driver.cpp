#include "qsys/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <istream>
#include <random>
#include <stdexcept>
#include <string>

#include "qsys/counting.hpp"
#include "qsys/error.hpp"

namespace qsys {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(std::string_view key, std::string_view value) {
  const std::string v(value);
  try {
    size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw Error(ErrorCode::kParseError,
                "bad number for " + std::string(key) + ": '" + v + "'");
  }
}

int64_t parse_int(std::string_view key, std::string_view value) {
  const std::string v(value);
  try {
    size_t used = 0;
    const long long d = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw Error(ErrorCode::kParseError,
                "bad integer for " + std::string(key) + ": '" + v + "'");
  }
}

/// "a/b", "a" or a plain decimal like 0.125.
Rational parse_rational_lenient(std::string_view text) {
  const std::string t = trim(text);
  if (t.find('.') == std::string::npos) return Rational::parse(t);
  const auto dot = t.find('.');
  const std::string whole = t.substr(0, dot);
  const std::string frac = t.substr(dot + 1);
  if (frac.empty() || frac.size() > 15 ||
      frac.find_first_not_of("0123456789") != std::string::npos) {
    throw Error(ErrorCode::kParseError, "bad rational '" + t + "'");
  }
  int64_t den = 1;
  for (size_t i = 0; i < frac.size(); ++i) den *= 10;
  const bool neg = !whole.empty() && whole[0] == '-';
  const Rational w = (whole.empty() || whole == "-") ? Rational(0) : Rational::parse(whole);
  const Rational f(std::stoll(frac), den);
  return neg ? w - f : w + f;
}

Rational rationalize_down(double v) {
  constexpr int64_t kScale = int64_t{1} << 20;
  return Rational(static_cast<int64_t>(std::floor(v * static_cast<double>(kScale))), kScale);
}

}  // namespace

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kSolutionFound: return "solution-found";
    case Verdict::kIncrement: return "increment";
    case Verdict::kUniformStop: return "uniform-stop";
    case Verdict::kBudgetStop: return "budget-stop";
    case Verdict::kCertificateFailed: return "demo-certificate-failed";
    case Verdict::kNoWitness: return "no-witness";
    case Verdict::kGuardStop: return "guard-stop";
  }
  return "unknown";
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::kSolutionFound:
    case Verdict::kIncrement:
    case Verdict::kUniformStop:
    case Verdict::kGuardStop:
      return 0;
    case Verdict::kBudgetStop: return 2;
    case Verdict::kCertificateFailed: return 3;
    case Verdict::kNoWitness: return 4;
  }
  return 1;
}

double compute_kappa(double c1, double c2, double c3, double D) {
  double kappa = std::min(c2 / 6.0, 1.0 / D);
  // Small-R patch: need (1 + c1 R^{c2}) >= (R^3 / c3)^kappa on R >= 1.
  auto patch = [&](double R) {
    const double den = std::log(R * R * R / c3);
    if (den <= 0.0) return;
    kappa = std::min(kappa, std::log1p(c1 * std::pow(R, c2)) / den);
  };
  for (int i = 1; i <= 100; ++i) patch(i);
  for (int i = 0; i <= 2000; ++i) patch(std::pow(10.0, 2.0 + 10.0 * i / 2000.0));
  return kappa;
}

void IterationConfig::finalize() {
  if (!(c1 > 0 && c2 > 0 && c3 > 0 && D > 0 && size_C > 0)) {
    throw Error(ErrorCode::kInvalidParams, "c1, c2, c3, D and size_C must be positive");
  }
  if (eps_c <= Rational(0)) throw Error(ErrorCode::kInvalidParams, "eps_c must be positive");
  if (max_steps < 1) throw Error(ErrorCode::kInvalidParams, "max_steps must be >= 1");
  if (kappa <= 0.0) {
    kappa = compute_kappa(c1, c2, c3, D);
  } else if (kappa > 1.0 / D) {
    throw Error(ErrorCode::kInvalidParams, "kappa must not exceed 1/D");
  }
  energy.budgets = budgets;
}

void apply_config_value(IterationConfig& cfg, std::string_view key,
                        std::string_view value) {
  const std::string k = trim(key);
  const std::string v = trim(value);
  auto& lin = cfg.linearization;
  auto& en = cfg.energy;
  if (k == "c1") cfg.c1 = parse_double(k, v);
  else if (k == "c2") cfg.c2 = parse_double(k, v);
  else if (k == "c3") cfg.c3 = parse_double(k, v);
  else if (k == "D") cfg.D = parse_double(k, v);
  else if (k == "kappa") cfg.kappa = parse_double(k, v);
  else if (k == "eps_c") cfg.eps_c = parse_rational_lenient(v);
  else if (k == "size_C") cfg.size_C = parse_double(k, v);
  else if (k == "max_steps") cfg.max_steps = static_cast<int>(parse_int(k, v));
  else if (k == "mode") {
    if (v == "certified") cfg.mode = RunMode::kCertified;
    else if (v == "demo") cfg.mode = RunMode::kDemo;
    else throw Error(ErrorCode::kParseError, "mode must be certified or demo");
  } else if (k == "r") en.r = parse_double(k, v);
  else if (k == "energy_floor") en.energy_floor = parse_double(k, v);
  else if (k == "lemma_C") en.lemma.C = parse_double(k, v);
  else if (k == "theta") en.lemma.theta = parse_double(k, v);
  else if (k == "max_rank") en.max_rank = static_cast<uint64_t>(parse_int(k, v));
  else if (k == "profile_size") en.profile_size = static_cast<size_t>(parse_int(k, v));
  else if (k == "lin_c") lin.c = parse_double(k, v);
  else if (k == "u_floor") lin.u_floor = parse_int(k, v);
  else if (k == "v_floor") lin.v_floor = parse_int(k, v);
  else if (k == "recurrence_c") lin.recurrence_c = parse_double(k, v);
  else if (k == "full_enumeration_limit") lin.full_enumeration_limit = static_cast<uint64_t>(parse_int(k, v));
  else if (k == "samples") lin.samples = static_cast<uint64_t>(parse_int(k, v));
  else if (k == "seed") lin.seed = static_cast<uint64_t>(parse_int(k, v));
  else if (k == "budget_enumeration") cfg.budgets.enumeration = static_cast<uint64_t>(parse_int(k, v));
  else if (k == "budget_spectrum") cfg.budgets.spectrum = static_cast<uint64_t>(parse_int(k, v));
  else throw Error(ErrorCode::kParseError, "unknown config key '" + k + "'");
}

void apply_config_text(IterationConfig& cfg, std::istream& in) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(lineno) + ": expected key = value");
    }
    apply_config_value(cfg, t.substr(0, eq), t.substr(eq + 1));
  }
}

StepOutcome increment_step(const DenseSet& A, const CoefficientSystem& cs,
                           const IterationConfig& cfg) {
  StepOutcome out;
  try {
    if (auto w = has_nontrivial_solution(cs, A, cfg.budgets)) {
      out.verdict = Verdict::kSolutionFound;
      out.witness = std::move(w);
      out.detail = "non-trivial solution located";
      return out;
    }
    EnergyConfig ecfg = cfg.energy;
    ecfg.budgets = cfg.budgets;
    EnergyExtraction ex;
    try {
      ex = extract_restricted_energy(A, cs, ecfg);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kUniformSet) {
        out.verdict = Verdict::kUniformStop;
        out.detail = std::string("expected solution count branch: ") + e.what();
        return out;
      }
      if (e.code() == ErrorCode::kNoWitness || e.code() == ErrorCode::kHypothesisViolated) {
        out.verdict = Verdict::kNoWitness;
        out.detail = std::string("energy pigeonholing: ") + e.what();
        return out;
      }
      throw;
    }
    out.energy = ex.energy;
    out.energy_ratio = ex.energy_ratio;
    const auto R = static_cast<int64_t>(ex.energy.freqs.size());
    const Rational delta = A.density();

    ProgressionFamily fam = build_family(ex.energy.freqs, A.ambient(), cfg.linearization);
    out.l2 = l2_of_smoothed_balanced(A, fam);
    // Cap nu so that the target density (1 + nu/2) delta stays <= 1.
    const Rational cap = Rational(2) * (Rational(1) / delta - Rational(1));
    Rational nu = rationalize_down(out.l2);
    if (cap < nu) nu = cap;
    out.nu = nu;
    if (nu <= Rational(0)) {
      out.family = std::move(fam);
      out.verdict = Verdict::kNoWitness;
      out.detail = "smoothed balanced function has no L^2 mass";
      return out;
    }
    const Rational c = cfg.eps_c;
    Rational eps = c * delta / Rational(R);
    eps = std::min(eps, c / Rational(R));
    eps = std::min(eps, c * nu * delta);
    out.eps = eps;
    const Rational eps_delta = eps * delta;
    if (cfg.mode == RunMode::kCertified &&
        !certified_regime(A.N(), eps_delta.to_double(), R, cfg.size_C)) {
      out.family = std::move(fam);
      out.verdict = Verdict::kGuardStop;
      out.detail = "N below (2/(eps delta))^{C R^3}; linearization not in its proven regime";
      return out;
    }
    fam.set_certificate(certify(fam, eps_delta, cfg.linearization));
    if (!fam.certificate().certified) {
      const auto& cert = fam.certificate();
      out.verdict = Verdict::kCertificateFailed;
      out.detail = "phase deviation " + cert.worst_deviation.str() + " exceeds " +
                   eps_delta.str();
      out.family = std::move(fam);
      return out;
    }
    try {
      out.increment = find_increment(A, fam, nu, eps, cfg.c3);
      out.verdict = Verdict::kIncrement;
      out.detail = "density increment located";
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNoWitness) throw;
      out.verdict = Verdict::kNoWitness;
      out.detail = e.what();
    }
    out.family = std::move(fam);
    return out;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kBudgetExceeded) throw;
    out.verdict = Verdict::kBudgetStop;
    out.detail = e.what();
    return out;
  }
}

IterationTrace iterate(const DenseSet& A0, const CoefficientSystem& cs,
                       const IterationConfig& base) {
  IterationConfig cfg = base;
  cfg.finalize();
  IterationTrace trace;
  trace.kappa = cfg.kappa;
  const Rational d0 = A0.density();
  trace.increment_cap =
      d0 > Rational(0)
          ? static_cast<int>(std::ceil(std::log(1.0 / d0.to_double()) / std::log1p(cfg.c1))) + 1
          : 0;
  DenseSet A = A0;
  int increments = 0;
  for (int i = 0;; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    StepRecord rec;
    rec.index = i;
    rec.N = A.N();
    rec.M = A.ambient().M;
    rec.size = A.size();
    rec.density = A.density();
    rec.guard_value = rec.N > 1 ? rec.density.to_double() *
                                      std::pow(std::log(static_cast<double>(rec.N)), 1.0 / cfg.D)
                                : 0.0;
    auto finish = [&](Verdict v, std::string detail) {
      rec.verdict = v;
      rec.detail = std::move(detail);
      rec.millis = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - t0).count();
      trace.steps.push_back(rec);
      trace.final_verdict = v;
    };
    if (cfg.mode == RunMode::kCertified && rec.guard_value < 2.0) {
      finish(Verdict::kGuardStop, "delta (log N)^{1/D} < 2");
      return trace;
    }
    if (i >= cfg.max_steps || increments > trace.increment_cap) {
      finish(Verdict::kBudgetStop, "step cap reached");
      return trace;
    }
    StepOutcome st = increment_step(A, cs, cfg);
    rec.energy_ratio = st.energy_ratio;
    rec.l2 = st.l2;
    rec.nu = st.nu.to_double();
    rec.eps = st.eps;
    rec.witness = st.witness;
    if (st.energy) rec.R = st.energy->R;
    if (st.family) rec.worst_deviation = st.family->certificate().worst_deviation;
    if (st.verdict != Verdict::kIncrement) {
      if (st.witness && !is_nontrivial_solution(cs, *st.witness)) {
        throw std::logic_error("solution witness failed re-verification");
      }
      finish(st.verdict, st.detail);
      return trace;
    }
    const IncrementResult& inc = *st.increment;
    const Progression& P = inc.progression;
    // Recompute from the raw set before trusting the step.
    if (P.first() < 1 || P.last() > A.N()) {
      throw std::logic_error("increment progression leaves [N]");
    }
    int64_t hits = 0;
    for (int64_t j = 1; j <= P.length; ++j) hits += A.contains(P.element(j)) ? 1 : 0;
    const Rational recomputed(hits, P.length);
    if (!(recomputed == inc.new_density) || !(recomputed > rec.density) ||
        recomputed < inc.threshold) {
      throw std::logic_error("increment density failed recomputation");
    }
    rec.progression = P;
    rec.new_density = recomputed;
    const double R = static_cast<double>(std::max<int64_t>(rec.R, 1));
    rec.meets_theorem_increment =
        recomputed.to_double() >= (1.0 + cfg.c1 * std::pow(R, cfg.c2)) * rec.density.to_double();
    rec.meets_theorem_length =
        static_cast<double>(P.length) >= std::pow(static_cast<double>(rec.N), cfg.c3 / (R * R * R));
    A = affine_rescale(A, cs, P);
    ++increments;
    finish(Verdict::kIncrement, st.detail);
  }
}

SetSpec parse_set_spec(std::string_view text) {
  const std::string t = trim(text);
  SetSpec spec;
  auto fields = [](const std::string& s) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
      const auto colon = s.find(':', start);
      out.push_back(s.substr(start, colon == std::string::npos ? std::string::npos : colon - start));
      if (colon == std::string::npos) break;
      start = colon + 1;
    }
    return out;
  };
  try {
    if (t == "interval") {
      spec.kind = SetSpec::Kind::kInterval;
    } else if (t == "evens") {
      spec.kind = SetSpec::Kind::kEvens;
    } else if (t == "greedy") {
      spec.kind = SetSpec::Kind::kGreedy;
    } else if (t.rfind("random", 0) == 0) {
      const auto f = fields(t);
      if (f[0] != "random" || f.size() > 3) throw Error(ErrorCode::kInvalidSpec, t);
      spec.kind = SetSpec::Kind::kRandom;
      if (f.size() >= 2) spec.density = parse_rational_lenient(f[1]);
      if (f.size() == 3) spec.seed = static_cast<uint64_t>(std::stoull(f[2]));
      if (spec.density < Rational(0) || spec.density > Rational(1)) {
        throw Error(ErrorCode::kInvalidSpec, "density must lie in [0, 1]");
      }
    } else if (t.rfind("ap:", 0) == 0) {
      spec.kind = SetSpec::Kind::kApUnion;
      size_t start = 0;
      while (start <= t.size()) {
        const auto plus = t.find('+', start);
        std::string part = t.substr(start, plus == std::string::npos ? std::string::npos : plus - start);
        if (part.rfind("ap:", 0) == 0) part = part.substr(3);
        const auto f = fields(part);
        if (f.size() != 3) throw Error(ErrorCode::kInvalidSpec, "ap needs a:d:L, got '" + part + "'");
        spec.aps.push_back(Progression{std::stoll(f[0]), std::stoll(f[1]), std::stoll(f[2])});
        if (plus == std::string::npos) break;
        start = plus + 1;
      }
    } else {
      throw Error(ErrorCode::kInvalidSpec, "unknown set kind '" + t + "'");
    }
  } catch (const std::invalid_argument&) {
    throw Error(ErrorCode::kInvalidSpec, "malformed set spec '" + t + "'");
  } catch (const std::out_of_range&) {
    throw Error(ErrorCode::kInvalidSpec, "out-of-range number in '" + t + "'");
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParseError) {
      throw Error(ErrorCode::kInvalidSpec, e.what());
    }
    throw;
  }
  return spec;
}

DenseSet generate_set(const SetSpec& spec, const CoefficientSystem& cs,
                      int64_t N, const Budgets& budgets) {
  if (N < 1) throw Error(ErrorCode::kInvalidSpec, "N must be positive");
  const Ambient amb = choose_modulus(cs, N);
  std::vector<int64_t> members;
  switch (spec.kind) {
    case SetSpec::Kind::kInterval:
      return DenseSet::interval(amb);
    case SetSpec::Kind::kEvens:
      for (int64_t n = 2; n <= N; n += 2) members.push_back(n);
      break;
    case SetSpec::Kind::kRandom: {
      // Exactly round(delta N) members, chosen by a seeded partial shuffle.
      const Rational target = spec.density * Rational(N);
      const int64_t k = (target.num() * 2 + target.den()) / (2 * target.den());
      std::vector<int64_t> pool(static_cast<size_t>(N));
      for (int64_t n = 1; n <= N; ++n) pool[static_cast<size_t>(n - 1)] = n;
      std::mt19937_64 rng(spec.seed);
      for (int64_t i = 0; i < k; ++i) {
        std::uniform_int_distribution<int64_t> pick(i, N - 1);
        std::swap(pool[static_cast<size_t>(i)], pool[static_cast<size_t>(pick(rng))]);
      }
      members.assign(pool.begin(), pool.begin() + k);
      std::sort(members.begin(), members.end());
      break;
    }
    case SetSpec::Kind::kApUnion:
      for (const auto& p : spec.aps) {
        if (p.length < 1 || p.first() < 1 || p.last() > N || p.last() < 1 || p.first() > N) {
          throw Error(ErrorCode::kInvalidSpec, "progression leaves [N]");
        }
        for (int64_t j = 1; j <= p.length; ++j) members.push_back(p.element(j));
      }
      std::sort(members.begin(), members.end());
      members.erase(std::unique(members.begin(), members.end()), members.end());
      break;
    case SetSpec::Kind::kGreedy:
      return greedy_solution_free(cs, N, budgets);
  }
  return DenseSet(amb, members);
}

}  // namespace qsys
