#include "qsys/serialize.hpp"

#include <ostream>

#include "qsys/error.hpp"

namespace qsys {

using nlohmann::json;

json to_json(const Rational& r) { return r.str(); }

json to_json(const Frequency& z) { return json{{"x", z.x}, {"y", z.y}}; }

json to_json(const Progression& p) {
  return json{{"offset", p.offset}, {"step", p.step}, {"length", p.length}};
}

json to_json(const SolutionCount& c) {
  return json{{"total", c.total}, {"nontrivial", c.nontrivial}, {"normalized_T", c.normalized_T}};
}

json to_json(const RecurrenceResult& r) {
  return json{{"q", r.q},
              {"achieved_num", r.achieved.num()},
              {"achieved_den", r.achieved.den()},
              {"bound", r.bound}};
}

json to_json(const RestrictedEnergy& e) {
  json freqs = json::array();
  for (const auto& z : e.freqs) freqs.push_back(to_json(z));
  return json{{"R", e.R},
              {"freqs", freqs},
              {"magnitudes", e.magnitudes},
              {"value", e.value},
              {"gain_exponent", e.gain_exponent},
              {"X", e.X},
              {"Y", e.Y},
              {"lower_bound", e.lower_bound}};
}

json to_json(const Certificate& c) {
  json per = json::array();
  for (const auto& d : c.worst_per_freq) per.push_back(to_json(d));
  return json{{"certified", c.certified},
              {"eps_delta", to_json(c.eps_delta)},
              {"worst_deviation", to_json(c.worst_deviation)},
              {"worst_freq", c.worst_freq},
              {"worst_n", c.worst_n},
              {"worst_m", c.worst_m},
              {"worst_k", c.worst_k},
              {"worst_per_freq", per},
              {"triples_checked", c.triples_checked},
              {"exhaustive", c.exhaustive}};
}

json to_json(const ProgressionFamily& fam) {
  json freqs = json::array();
  for (const auto& z : fam.freqs()) freqs.push_back(to_json(z));
  return json{{"N", fam.ambient().N},
              {"M", fam.ambient().M},
              {"freqs", freqs},
              {"q", fam.q()},
              {"U", fam.U()},
              {"V", fam.V()},
              {"r_from", fam.r_lo()},
              {"r", fam.r_values()},
              {"certificate", to_json(fam.certificate())}};
}

ProgressionFamily family_from_json(const json& j, const Ambient& amb,
                                   std::vector<Frequency> freqs) {
  try {
    return ProgressionFamily(amb, std::move(freqs), j.at("q").get<int64_t>(),
                             j.at("U").get<int64_t>(), j.at("V").get<int64_t>(),
                             j.at("r").get<std::vector<int64_t>>());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("family JSON: ") + e.what());
  }
}

json to_json(const IncrementResult& inc) {
  return json{{"progression", to_json(inc.progression)},
              {"new_density", to_json(inc.new_density)},
              {"threshold", to_json(inc.threshold)},
              {"nu", inc.nu},
              {"R", inc.R},
              {"witness_n", inc.witness_n},
              {"witness_m", inc.witness_m},
              {"length_ok", inc.length_ok}};
}

json to_json(const StepRecord& s) {
  json j{{"index", s.index},
         {"N", s.N},
         {"M", s.M},
         {"size", s.size},
         {"density", to_json(s.density)},
         {"guard_value", s.guard_value},
         {"R", s.R},
         {"verdict", std::string(verdict_name(s.verdict))},
         {"detail", s.detail},
         {"energy_ratio", s.energy_ratio},
         {"l2", s.l2},
         {"nu", s.nu},
         {"eps", to_json(s.eps)},
         {"meets_theorem_increment", s.meets_theorem_increment},
         {"meets_theorem_length", s.meets_theorem_length},
         {"millis", s.millis}};
  if (s.witness) j["witness"] = *s.witness;
  if (s.progression) j["progression"] = to_json(*s.progression);
  if (s.new_density) j["new_density"] = to_json(*s.new_density);
  if (s.worst_deviation) j["worst_deviation"] = to_json(*s.worst_deviation);
  return j;
}

json to_json(const IterationTrace& t) {
  json steps = json::array();
  for (const auto& s : t.steps) steps.push_back(to_json(s));
  return json{{"steps", steps},
              {"final_verdict", std::string(verdict_name(t.final_verdict))},
              {"kappa", t.kappa},
              {"increment_cap", t.increment_cap}};
}

json to_json(const IterationConfig& c) {
  const auto& e = c.energy;
  const auto& l = c.linearization;
  return json{{"c1", c.c1},
              {"c2", c.c2},
              {"c3", c.c3},
              {"D", c.D},
              {"kappa", c.kappa},
              {"eps_c", to_json(c.eps_c)},
              {"size_C", c.size_C},
              {"mode", c.mode == RunMode::kCertified ? "certified" : "demo"},
              {"max_steps", c.max_steps},
              {"r", e.r},
              {"energy_floor", e.energy_floor},
              {"lemma_C", e.lemma.C},
              {"theta", e.lemma.theta},
              {"max_rank", e.max_rank},
              {"profile_size", e.profile_size},
              {"lin_c", l.c},
              {"u_floor", l.u_floor},
              {"v_floor", l.v_floor},
              {"recurrence_c", l.recurrence_c},
              {"full_enumeration_limit", l.full_enumeration_limit},
              {"samples", l.samples},
              {"seed", l.seed},
              {"budget_enumeration", c.budgets.enumeration},
              {"budget_spectrum", c.budgets.spectrum}};
}

void write_certificate_csv(std::ostream& out, const ProgressionFamily& fam) {
  const auto& cert = fam.certificate();
  out << "index,x,y,worst_num,worst_den,worst\n";
  for (size_t i = 0; i < fam.freqs().size(); ++i) {
    const auto& z = fam.freqs()[i];
    const Rational d = i < cert.worst_per_freq.size() ? cert.worst_per_freq[i] : Rational(0);
    out << i << ',' << z.x << ',' << z.y << ',' << d.num() << ',' << d.den() << ','
        << d.to_double() << '\n';
  }
}

void write_profile_csv(std::ostream& out, const EnergyProfile& profile) {
  out << "rank,x,y,magnitude\n";
  const auto old = out.precision(17);
  for (size_t k = 0; k < profile.entries.size(); ++k) {
    const auto& e = profile.entries[k];
    out << k + 1 << ',' << e.z.x << ',' << e.z.y << ',' << e.magnitude << '\n';
  }
  out.precision(old);
}

}  // namespace qsys
