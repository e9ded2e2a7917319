#pragma once

#include <iosfwd>

#include "json.hpp"
#include "qsys/counting.hpp"
#include "qsys/diophantine.hpp"
#include "qsys/driver.hpp"
#include "qsys/increment.hpp"
#include "qsys/spectrum.hpp"

namespace qsys {

nlohmann::json to_json(const Rational& r);
nlohmann::json to_json(const Frequency& z);
nlohmann::json to_json(const Progression& p);
nlohmann::json to_json(const SolutionCount& c);
nlohmann::json to_json(const RecurrenceResult& r);
nlohmann::json to_json(const RestrictedEnergy& e);
nlohmann::json to_json(const Certificate& c);
nlohmann::json to_json(const ProgressionFamily& fam);
nlohmann::json to_json(const IncrementResult& inc);
nlohmann::json to_json(const StepRecord& step);
nlohmann::json to_json(const IterationTrace& trace);
nlohmann::json to_json(const IterationConfig& cfg);

/// {q, U, V, r: [...]} with r indexed from n = -N.
ProgressionFamily family_from_json(const nlohmann::json& j, const Ambient& amb,
                                   std::vector<Frequency> freqs);

/// One CSV row per frequency: index, x, y, worst deviation (num/den, float).
void write_certificate_csv(std::ostream& out, const ProgressionFamily& fam);

/// rank, x, y, magnitude.
void write_profile_csv(std::ostream& out, const EnergyProfile& profile);

}  // namespace qsys
