#include "qsys/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qsys/counting.hpp"
#include "qsys/diophantine.hpp"
#include "qsys/driver.hpp"
#include "qsys/error.hpp"
#include "qsys/increment.hpp"
#include "qsys/parallel.hpp"
#include "qsys/serialize.hpp"
#include "qsys/spectrum.hpp"

namespace qsys::cli {

namespace {

using nlohmann::json;

constexpr int kDataError = 65;
constexpr int kIoError = 74;

int code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::kBudgetExceeded: return 2;
    case ErrorCode::kCertificateFailed: return 3;
    case ErrorCode::kNoWitness: return 4;
    case ErrorCode::kUniformSet: return 5;
    case ErrorCode::kHypothesisViolated: return 6;
    default: return kDataError;
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

CoefficientSystem parse_lambdas(const std::string& text) {
  std::vector<int64_t> l;
  for (const auto& t : split(text, ',')) {
    try {
      l.push_back(std::stoll(t));
    } catch (const std::exception&) {
      throw Error(ErrorCode::kParseError, "bad coefficient '" + t + "'");
    }
  }
  if (l.empty()) throw Error(ErrorCode::kParseError, "no coefficients given");
  return validate_coefficients(l);
}

std::vector<Rational> parse_rationals(const std::string& text) {
  std::vector<Rational> out;
  for (const auto& t : split(text, ',')) out.push_back(Rational::parse(t));
  return out;
}

std::vector<Frequency> parse_freqs(const std::string& text, const Ambient& amb) {
  std::vector<Frequency> out;
  for (const auto& t : split(text, ',')) {
    const auto parts = split(t, ':');
    if (parts.size() != 2) throw Error(ErrorCode::kParseError, "frequency must be x:y, got '" + t + "'");
    out.push_back(normalize_frequency(amb, std::stoll(parts[0]), std::stoll(parts[1])));
  }
  return out;
}

/// Inputs shared by set-consuming subcommands.
struct SetInput {
  std::string lambdas = "1,1,1,1,-2,-1,-1";
  int64_t N = 0;
  std::string spec = "interval";
  std::string file;

  void add(CLI::App* app) {
    app->add_option("--lambdas", lambdas, "Comma-separated coefficients")->capture_default_str();
    app->add_option("--N", N, "Interval length");
    app->add_option("--set", spec, "interval | evens | random:<d>:<seed> | ap:a:d:L[+...] | greedy")
        ->capture_default_str();
    app->add_option("--set-file", file, "Set file (JSON header + members)");
  }

  std::pair<CoefficientSystem, DenseSet> load(const Budgets& budgets, bool lambdas_given) const {
    if (!file.empty()) {
      std::ifstream in(file);
      if (!in) throw std::ios_base::failure("cannot open " + file);
      SetFile sf = read_set_file(in);
      if (lambdas_given) {
        CoefficientSystem cs = parse_lambdas(lambdas);
        std::vector<int64_t> m = sf.set.members();
        return {cs, DenseSet(choose_modulus(cs, sf.set.N()), m)};
      }
      return {sf.cs, sf.set};
    }
    if (N < 1) throw Error(ErrorCode::kInvalidParams, "--N or --set-file is required");
    CoefficientSystem cs = parse_lambdas(lambdas);
    return {cs, generate_set(parse_set_spec(spec), cs, N, budgets)};
  }
};

void print_json(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Quadratic systems toolkit: counting, spectra, linearization and density increments"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = all cores)");

  Budgets budgets = Budgets::from_env();
  std::function<int()> action;

  // count
  auto* count = app.add_subcommand("count", "Count solutions in a set");
  SetInput count_in;
  count_in.add(count);
  std::string oracle = "mitm";
  bool count_json = false;
  std::optional<size_t> split_at;
  count->add_option("--oracle", oracle, "brute | mitm | both")
      ->check(CLI::IsMember({"brute", "mitm", "both"}))
      ->capture_default_str();
  count->add_option("--split", split_at, "Size of the first meet-in-the-middle half");
  count->add_flag("--json", count_json, "JSON output");
  count->callback([&] {
    action = [&] {
      auto [cs, A] = count_in.load(budgets, count->count("--lambdas") > 0);
      std::optional<SolutionCount> brute, mitm;
      if (oracle != "mitm") brute = count_bruteforce(cs, A, budgets);
      if (oracle != "brute") mitm = count_mitm(cs, A, split_at, budgets);
      const SolutionCount& c = mitm ? *mitm : *brute;
      const bool agree = !(brute && mitm) ||
                         (brute->total == mitm->total && brute->nontrivial == mitm->nontrivial);
      if (count_json) {
        json j = to_json(c);
        j["N"] = A.N();
        j["M"] = A.ambient().M;
        j["size"] = A.size();
        j["oracle"] = oracle;
        if (brute && mitm) j["oracles_agree"] = agree;
        print_json(out, j);
      } else {
        out << "total " << c.total << "\nnontrivial " << c.nontrivial
            << "\nnormalized_T " << c.normalized_T << '\n';
        if (brute && mitm) out << (agree ? "oracles agree\n" : "oracles DISAGREE\n");
      }
      return agree ? 0 : 1;
    };
  });

  // energy
  auto* energy = app.add_subcommand("energy", "Extract a large restricted energy");
  SetInput energy_in;
  energy_in.add(energy);
  EnergyConfig ecfg;
  size_t top = 20;
  bool energy_json = false;
  energy->add_option("--top", top, "Profile rows to emit")->capture_default_str();
  energy->add_option("--r", ecfg.r, "Moment order r (6 < r < s)")->capture_default_str();
  energy->add_option("--floor", ecfg.energy_floor, "Energy ratio floor")->capture_default_str();
  energy->add_option("--max-rank", ecfg.max_rank, "Cap on R")->capture_default_str();
  energy->add_flag("--json", energy_json, "JSON output");
  energy->callback([&] {
    action = [&] {
      auto [cs, A] = energy_in.load(budgets, energy->count("--lambdas") > 0);
      ecfg.budgets = budgets;
      ecfg.profile_size = std::max(ecfg.profile_size, top);
      const EnergyExtraction ex = extract_restricted_energy(A, cs, ecfg);
      EnergyProfile shown = ex.profile;
      if (shown.entries.size() > top) shown.entries.resize(top);
      if (energy_json) {
        json rows = json::array();
        for (size_t k = 0; k < shown.entries.size(); ++k) {
          const auto& e = shown.entries[k];
          rows.push_back({{"rank", k + 1}, {"x", e.z.x}, {"y", e.z.y}, {"magnitude", e.magnitude}});
        }
        print_json(out, json{{"energy", to_json(ex.energy)},
                             {"energy_ratio", ex.energy_ratio},
                             {"reference_energy", ex.reference_energy},
                             {"scale", ex.scale},
                             {"profile", rows}});
      } else {
        out << "# energy_ratio " << ex.energy_ratio << "\n# R " << ex.energy.R
            << "\n# value " << ex.energy.value << "\n";
        write_profile_csv(out, shown);
      }
      return 0;
    };
  });

  // recur
  auto* recur = app.add_subcommand("recur", "Simultaneous linear or quadratic recurrence");
  std::string recur_mode = "linear";
  std::string thetas;
  int64_t X = 1;
  double recur_c = 0.25;
  bool recur_json = false;
  recur->add_option("--mode", recur_mode, "linear | quadratic")
      ->check(CLI::IsMember({"linear", "quadratic"}))
      ->capture_default_str();
  recur->add_option("--thetas", thetas, "Comma-separated rationals a/b")->required();
  recur->add_option("--X", X, "Search range [1, X]")->required();
  recur->add_option("--c", recur_c, "Envelope constant (quadratic mode)")->capture_default_str();
  recur->add_flag("--json", recur_json, "JSON output");
  recur->callback([&] {
    action = [&] {
      const auto vals = parse_rationals(thetas);
      const RecurrenceResult r = recur_mode == "linear"
                                     ? dirichlet_search(vals, X)
                                     : quadratic_recurrence_search(vals, X, recur_c);
      if (recur_json) {
        print_json(out, to_json(r));
      } else {
        out << "q=" << r.q << ", achieved " << r.achieved.num() << '/' << r.achieved.den()
            << ", bound " << r.bound << '\n';
      }
      return 0;
    };
  });

  // linearize
  auto* lin = app.add_subcommand("linearize", "Build and certify a progression family");
  std::string lin_lambdas = "1,1,1,1,-2,-1,-1";
  int64_t lin_N = 0;
  std::string lin_freqs;
  std::string lin_eps = "1/10";
  std::string lin_delta = "1/2";
  std::string lin_out;
  std::string lin_csv;
  LinearizationConfig lcfg;
  lin->add_option("--lambdas", lin_lambdas, "Comma-separated coefficients")->capture_default_str();
  lin->add_option("--N", lin_N, "Interval length")->required();
  lin->add_option("--freqs", lin_freqs, "Frequencies x:y,x:y,...")->required();
  lin->add_option("--eps", lin_eps, "eps (rational)")->capture_default_str();
  lin->add_option("--delta", lin_delta, "delta (rational)")->capture_default_str();
  lin->add_option("--c", lcfg.c, "Exponent constant for U and V")->capture_default_str();
  lin->add_option("--u-floor", lcfg.u_floor, "Lower floor for U")->capture_default_str();
  lin->add_option("--v-floor", lcfg.v_floor, "Lower floor for V")->capture_default_str();
  lin->add_option("--samples", lcfg.samples, "Sampled triples when not exhaustive")->capture_default_str();
  lin->add_option("--seed", lcfg.seed, "Sampling seed")->capture_default_str();
  lin->add_option("--out", lin_out, "Write family JSON here instead of stdout");
  lin->add_option("--certificate-csv", lin_csv, "Write per-frequency worst deviations");
  lin->callback([&] {
    action = [&] {
      const CoefficientSystem cs = parse_lambdas(lin_lambdas);
      const Ambient amb = choose_modulus(cs, lin_N);
      const auto freqs = parse_freqs(lin_freqs, amb);
      const ProgressionFamily fam =
          linearize(freqs, amb, Rational::parse(lin_eps), Rational::parse(lin_delta), lcfg);
      const json j = to_json(fam);
      if (lin_out.empty()) {
        print_json(out, j);
      } else {
        std::ofstream f(lin_out);
        if (!f) throw std::ios_base::failure("cannot write " + lin_out);
        print_json(f, j);
      }
      if (!lin_csv.empty()) {
        std::ofstream f(lin_csv);
        if (!f) throw std::ios_base::failure("cannot write " + lin_csv);
        write_certificate_csv(f, fam);
      }
      if (!fam.certificate().certified) {
        err << "certificate failed: worst deviation " << fam.certificate().worst_deviation
            << " > " << fam.certificate().eps_delta << '\n';
        return code_for(ErrorCode::kCertificateFailed);
      }
      return 0;
    };
  });

  // increment
  auto* inc = app.add_subcommand("increment", "One dichotomy step, or an increment search on a given family");
  SetInput inc_in;
  inc_in.add(inc);
  std::string family_file;
  std::string inc_nu = "1/2";
  std::string inc_eps = "1/100";
  inc->add_option("--family", family_file, "Family JSON from `linearize`");
  inc->add_option("--nu", inc_nu, "nu (with --family)")->capture_default_str();
  inc->add_option("--eps", inc_eps, "eps (with --family)")->capture_default_str();
  inc->callback([&] {
    action = [&] {
      auto [cs, A] = inc_in.load(budgets, inc->count("--lambdas") > 0);
      if (!family_file.empty()) {
        std::ifstream f(family_file);
        if (!f) throw std::ios_base::failure("cannot open " + family_file);
        const json j = json::parse(f);
        std::vector<Frequency> freqs;
        for (const auto& z : j.value("freqs", json::array())) {
          freqs.push_back(Frequency{z.at("x").get<int64_t>(), z.at("y").get<int64_t>()});
        }
        const ProgressionFamily fam = family_from_json(j, A.ambient(), freqs);
        const IncrementResult r =
            find_increment(A, fam, Rational::parse(inc_nu), Rational::parse(inc_eps));
        print_json(out, to_json(r));
        return 0;
      }
      IterationConfig cfg;
      cfg.budgets = budgets;
      cfg.finalize();
      const StepOutcome st = increment_step(A, cs, cfg);
      json j{{"verdict", std::string(verdict_name(st.verdict))}, {"detail", st.detail}};
      if (st.witness) j["witness"] = *st.witness;
      if (st.energy) j["energy"] = to_json(*st.energy);
      if (st.family) j["family"] = to_json(*st.family);
      if (st.increment) j["increment"] = to_json(*st.increment);
      j["l2"] = st.l2;
      j["nu"] = to_json(st.nu);
      j["eps"] = to_json(st.eps);
      print_json(out, j);
      return exit_code(st.verdict);
    };
  });

  // run
  auto* run = app.add_subcommand("run", "Iterate the density-increment dichotomy");
  SetInput run_in;
  run_in.add(run);
  std::string config_file;
  std::vector<std::string> overrides;
  std::string trace_file;
  std::string run_mode;
  int max_steps = 0;
  bool run_json = false;
  run->add_option("--config", config_file, "Plain-text key = value file");
  run->add_option("--param", overrides, "key=value override (repeatable)");
  run->add_option("--mode", run_mode, "certified | demo")->check(CLI::IsMember({"certified", "demo"}));
  run->add_option("--max-steps", max_steps, "Step cap");
  run->add_option("--trace", trace_file, "Write the JSON trace here");
  run->add_flag("--json", run_json, "JSON output");
  run->callback([&] {
    action = [&] {
      IterationConfig cfg;
      cfg.budgets = budgets;
      if (!config_file.empty()) {
        std::ifstream f(config_file);
        if (!f) throw std::ios_base::failure("cannot open " + config_file);
        apply_config_text(cfg, f);
      }
      for (const auto& o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos) throw Error(ErrorCode::kParseError, "--param needs key=value");
        apply_config_value(cfg, o.substr(0, eq), o.substr(eq + 1));
      }
      if (!run_mode.empty()) apply_config_value(cfg, "mode", run_mode);
      if (max_steps > 0) cfg.max_steps = max_steps;
      cfg.finalize();
      auto [cs, A] = run_in.load(cfg.budgets, run->count("--lambdas") > 0);
      const auto t0 = std::chrono::steady_clock::now();
      const IterationTrace trace = iterate(A, cs, cfg);
      const double ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      json command = json::array();
      for (int i = 0; i < argc; ++i) command.push_back(argv[i]);
      const json report{{"command", command},
                        {"config", to_json(cfg)},
                        {"lambdas", cs.lambdas},
                        {"N", A.N()},
                        {"trace", to_json(trace)},
                        {"millis", ms}};
      if (!trace_file.empty()) {
        std::ofstream f(trace_file);
        if (!f) throw std::ios_base::failure("cannot write " + trace_file);
        print_json(f, report);
      }
      if (run_json) {
        print_json(out, report);
      } else {
        out << "config " << to_json(cfg).dump() << '\n';
        for (const auto& s : trace.steps) {
          out << "step " << s.index << ": N=" << s.N << " |A|=" << s.size
              << " delta=" << s.density << " R=" << s.R << " -> " << verdict_name(s.verdict);
          if (s.progression) {
            out << " progression " << s.progression->offset << "+" << s.progression->step
                << "[" << s.progression->length << "] density " << *s.new_density;
          }
          if (s.witness) {
            out << " witness";
            for (const int64_t n : *s.witness) out << ' ' << n;
          }
          out << '\n';
        }
        out << "verdict " << verdict_name(trace.final_verdict) << '\n';
      }
      return exit_code(trace.final_verdict);
    };
  });

  // generate
  auto* gen = app.add_subcommand("generate", "Write a set file");
  SetInput gen_in;
  gen_in.add(gen);
  std::string gen_out;
  gen->add_option("--out", gen_out, "Output path (default stdout)");
  gen->callback([&] {
    action = [&] {
      auto [cs, A] = gen_in.load(budgets, true);
      if (gen_out.empty()) {
        write_set_file(out, cs, A);
      } else {
        std::ofstream f(gen_out);
        if (!f) throw std::ios_base::failure("cannot write " + gen_out);
        write_set_file(f, cs, A);
      }
      return 0;
    };
  });

  // moments
  auto* mom = app.add_subcommand("moments", "Even moments of the quadratic Weyl sum");
  int p = 4;
  std::vector<int64_t> mom_N;
  bool mom_json = false;
  mom->add_option("--p", p, "4 or 6")->check(CLI::IsMember({4, 6}))->capture_default_str();
  mom->add_option("--N", mom_N, "One or more N")->required()->delimiter(',');
  mom->add_flag("--json", mom_json, "JSON output");
  mom->callback([&] {
    action = [&] {
      json rows = json::array();
      for (const int64_t n : mom_N) {
        const int64_t v = moment_V(n, p, budgets);
        if (mom_json) {
          rows.push_back({{"N", n}, {"p", p}, {"moment", v}});
        } else if (mom_N.size() == 1) {
          out << v << '\n';
        } else {
          out << n << ' ' << v << '\n';
        }
      }
      if (mom_json) print_json(out, rows);
      return 0;
    };
  });

  // restriction
  auto* res = app.add_subcommand("restriction", "Restriction ratio ||S_f||_p / ||f||_2 over random f");
  std::string res_lambdas = "1,1,1,1,-2,-1,-1";
  double res_p = 7.0;
  int trials = 50;
  std::vector<int64_t> res_N{8, 12, 16};
  uint64_t res_seed = 1;
  double ceiling_factor = 3.0;
  bool res_json = false;
  res->add_option("--lambdas", res_lambdas, "Comma-separated coefficients")->capture_default_str();
  res->add_option("--p", res_p, "Exponent p > 6")->capture_default_str();
  res->add_option("--trials", trials, "Random functions per N")->capture_default_str();
  res->add_option("--N", res_N, "Grid of N")->delimiter(',')->capture_default_str();
  res->add_option("--seed", res_seed, "Seed")->capture_default_str();
  res->add_option("--ceiling-factor", ceiling_factor, "Ceiling relative to the first row")
      ->capture_default_str();
  res->add_flag("--json", res_json, "JSON output");
  res->callback([&] {
    action = [&] {
      const CoefficientSystem cs = parse_lambdas(res_lambdas);
      const RestrictionReport r =
          check_restriction_ratio(cs, res_p, trials, res_N, res_seed, ceiling_factor, budgets);
      if (res_json) {
        json rows = json::array();
        for (const auto& row : r.rows) {
          rows.push_back({{"N", row.N}, {"M", row.M}, {"trials", row.trials},
                          {"max_ratio", row.max_ratio}, {"max_ratio_sum", row.max_ratio_sum}});
        }
        print_json(out, json{{"p", r.p}, {"rows", rows}, {"ceiling", r.ceiling},
                             {"monotone_growth", r.monotone_growth}, {"passed", r.passed}});
      } else {
        for (const auto& row : r.rows) {
          out << "N=" << row.N << " M=" << row.M << " max_ratio=" << row.max_ratio << '\n';
        }
        out << "ceiling " << r.ceiling << (r.passed ? " pass" : " FAIL") << '\n';
      }
      return r.passed ? 0 : 1;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsageError;
  }
  set_thread_count(threads);
  try {
    return action ? action() : kUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return code_for(e.code());
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace qsys::cli
