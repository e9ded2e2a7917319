#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qsys/counting.hpp"
#include "qsys/diophantine.hpp"
#include "qsys/driver.hpp"
#include "qsys/error.hpp"
#include "qsys/expsums.hpp"
#include "qsys/increment.hpp"
#include "qsys/parallel.hpp"
#include "qsys/serialize.hpp"
#include "qsys/spectrum.hpp"

namespace py = pybind11;

namespace {

using qsys::CoefficientSystem;
using qsys::DenseSet;

DenseSet make_set(const CoefficientSystem& cs, int64_t N,
                  const std::vector<int64_t>& members) {
  return DenseSet(qsys::choose_modulus(cs, N), members);
}

std::vector<qsys::Rational> rationals(const std::vector<std::string>& xs) {
  std::vector<qsys::Rational> out;
  for (const auto& x : xs) out.push_back(qsys::Rational::parse(x));
  return out;
}

py::dict recurrence_dict(const qsys::RecurrenceResult& r) {
  py::dict d;
  d["q"] = r.q;
  d["achieved"] = r.achieved.str();
  d["bound"] = r.bound;
  return d;
}

}  // namespace

PYBIND11_MODULE(_qsys, m) {
  m.doc() = "Bindings for the qsys C++ core";

  // Messages carry the error-code name as a prefix.
  py::register_exception<qsys::Error>(m, "QsysError");

  m.def("set_threads", &qsys::set_thread_count, py::arg("threads"));

  m.def("validate", [](const std::vector<int64_t>& lambdas) {
    const auto cs = qsys::validate_coefficients(lambdas);
    return py::make_tuple(cs.lambdas, cs.abs_sum);
  }, py::arg("lambdas"), "Validated (lambdas, abs_sum).");

  m.def("modulus", [](const std::vector<int64_t>& lambdas, int64_t N) {
    return qsys::choose_modulus(qsys::validate_coefficients(lambdas), N).M;
  }, py::arg("lambdas"), py::arg("N"));

  m.def("count", [](const std::vector<int64_t>& lambdas, int64_t N,
                    const std::vector<int64_t>& members, const std::string& oracle) {
    const auto cs = qsys::validate_coefficients(lambdas);
    const DenseSet A = make_set(cs, N, members);
    qsys::SolutionCount c;
    {
      py::gil_scoped_release release;
      c = oracle == "brute" ? qsys::count_bruteforce(cs, A) : qsys::count_mitm(cs, A);
    }
    py::dict d;
    d["total"] = c.total;
    d["nontrivial"] = c.nontrivial;
    d["normalized_T"] = c.normalized_T;
    return d;
  }, py::arg("lambdas"), py::arg("N"), py::arg("members"), py::arg("oracle") = "mitm");

  m.def("find_solution", [](const std::vector<int64_t>& lambdas, int64_t N,
                            const std::vector<int64_t>& members) {
    const auto cs = qsys::validate_coefficients(lambdas);
    return qsys::has_nontrivial_solution(cs, make_set(cs, N, members));
  }, py::arg("lambdas"), py::arg("N"), py::arg("members"));

  m.def("fourier_identity", [](const std::vector<int64_t>& lambdas, int64_t N,
                               const std::vector<std::vector<std::complex<double>>>& fs,
                               double tol) {
    const auto cs = qsys::validate_coefficients(lambdas);
    const auto amb = qsys::choose_modulus(cs, N);
    std::vector<qsys::GridFunction> g;
    for (const auto& v : fs) g.emplace_back(N, v);
    const auto r = qsys::verify_fourier_identity(cs, g, amb, tol);
    py::dict d;
    d["enumeration"] = r.enumeration;
    d["spectral"] = r.spectral;
    d["rel_deviation"] = r.rel_deviation;
    d["passed"] = r.passed;
    return d;
  }, py::arg("lambdas"), py::arg("N"), py::arg("functions"), py::arg("tol") = 1e-8);

  m.def("eval_S", [](const std::vector<std::complex<double>>& values,
                     const std::vector<int64_t>& lambdas, int64_t x, int64_t y) {
    const auto cs = qsys::validate_coefficients(lambdas);
    const auto N = static_cast<int64_t>(values.size());
    const auto amb = qsys::choose_modulus(cs, N);
    return qsys::eval_S(qsys::GridFunction(N, values), amb,
                        qsys::normalize_frequency(amb, x, y));
  }, py::arg("values"), py::arg("lambdas"), py::arg("x"), py::arg("y"));

  m.def("moment_V", [](int64_t N, int p) { return qsys::moment_V(N, p); },
        py::arg("N"), py::arg("p"));

  m.def("dirichlet", [](const std::vector<std::string>& gammas, int64_t X) {
    return recurrence_dict(qsys::dirichlet_search(rationals(gammas), X));
  }, py::arg("gammas"), py::arg("X"));

  m.def("quadratic_recurrence", [](const std::vector<std::string>& thetas, int64_t X,
                                   double c) {
    return recurrence_dict(qsys::quadratic_recurrence_search(rationals(thetas), X, c));
  }, py::arg("thetas"), py::arg("X"), py::arg("c") = 0.25);

  m.def("energy_json", [](const std::vector<int64_t>& lambdas, int64_t N,
                          const std::vector<int64_t>& members) {
    const auto cs = qsys::validate_coefficients(lambdas);
    const auto ex = qsys::extract_restricted_energy(make_set(cs, N, members), cs);
    nlohmann::json j = qsys::to_json(ex.energy);
    j["energy_ratio"] = ex.energy_ratio;
    j["scale"] = ex.scale;
    return j.dump();
  }, py::arg("lambdas"), py::arg("N"), py::arg("members"));

  m.def("linearize_json", [](const std::vector<int64_t>& lambdas, int64_t N,
                             const std::vector<std::pair<int64_t, int64_t>>& freqs,
                             const std::string& eps, const std::string& delta) {
    const auto cs = qsys::validate_coefficients(lambdas);
    const auto amb = qsys::choose_modulus(cs, N);
    std::vector<qsys::Frequency> z;
    for (const auto& [x, y] : freqs) z.push_back(qsys::normalize_frequency(amb, x, y));
    return qsys::to_json(qsys::linearize(z, amb, qsys::Rational::parse(eps),
                                         qsys::Rational::parse(delta)))
        .dump();
  }, py::arg("lambdas"), py::arg("N"), py::arg("freqs"), py::arg("eps"), py::arg("delta"));

  m.def("generate_set", [](const std::vector<int64_t>& lambdas, int64_t N,
                           const std::string& spec) {
    const auto cs = qsys::validate_coefficients(lambdas);
    return qsys::generate_set(qsys::parse_set_spec(spec), cs, N).members();
  }, py::arg("lambdas"), py::arg("N"), py::arg("spec"));

  m.def("run_json", [](const std::vector<int64_t>& lambdas, int64_t N,
                       const std::vector<int64_t>& members,
                       const std::map<std::string, std::string>& params) {
    const auto cs = qsys::validate_coefficients(lambdas);
    qsys::IterationConfig cfg;
    for (const auto& [k, v] : params) qsys::apply_config_value(cfg, k, v);
    cfg.finalize();
    const DenseSet A = make_set(cs, N, members);
    py::gil_scoped_release release;
    const auto trace = qsys::iterate(A, cs, cfg);
    return qsys::to_json(trace).dump();
  }, py::arg("lambdas"), py::arg("N"), py::arg("members"),
     py::arg("params") = std::map<std::string, std::string>{});
}
