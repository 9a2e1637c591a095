#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "appe/anonymity.hpp"
#include "appe/config.hpp"
#include "appe/privacy.hpp"
#include "appe/verify.hpp"

namespace py = pybind11;

PYBIND11_MODULE(_core, m) {
  using namespace appe;
  m.doc() =
      "Core simulator for anonymous, private phase estimation on an "
      "entangled sensor network";

  // Closed-form estimation quantities.
  m.def("theta_from_beta",
        [](double beta) { return theta_from_beta(beta); }, py::arg("beta"));
  m.def("perturbed_beta", &perturbed_beta, py::arg("beta"), py::arg("alpha"));
  m.def("alpha_from_eta", &alpha_from_eta, py::arg("eta"), py::arg("theta"));
  m.def("f_poly", &f_poly, py::arg("eta"), py::arg("theta"));
  m.def("lemma_tail_bound", &lemma_tail_bound, py::arg("omega"),
        py::arg("length"), py::arg("ones"));
  m.def("bias_bound", &bias_bound, py::arg("eta"), py::arg("theta"),
        py::arg("delta"), py::arg("length"), py::arg("ones"));
  m.def("correct_beta",
        [](double beta_prime, double delta) {
          return correct_beta(beta_prime, delta);
        },
        py::arg("beta_prime"), py::arg("delta"));
  m.def("key_entropy_length", &key_entropy_length, py::arg("length"),
        py::arg("ones"));

  // Sampling helpers.
  m.def(
      "parity_even_fraction",
      [](int n, double phase, std::int64_t samples, std::uint64_t seed) {
        RngStream rng = RngStream(seed).fork(stream::kTest, 1);
        std::int64_t even = 0;
        for (std::int64_t s = 0; s < samples; ++s)
          if (parity(sample_ghz_phase_fastpath(n, phase, rng)) == 0) ++even;
        return static_cast<double>(even) / static_cast<double>(samples);
      },
      py::arg("n"), py::arg("phase"), py::arg("samples"), py::arg("seed"),
      "Fraction of even-parity X records over seeded fast-path samples");

  // Privacy analysis.
  m.def(
      "qfi_matrix",
      [](int n, const std::vector<double>& theta,
         const std::vector<int>& divisors, const std::string& method) {
        if (method != "analytic" && method != "finite_difference")
          throw std::invalid_argument("method: analytic|finite_difference");
        return qfi_matrix(n, theta, divisors,
                          method == "analytic" ? QfiMethod::Analytic
                                               : QfiMethod::FiniteDifference);
      },
      py::arg("n"), py::arg("theta"), py::arg("divisors"),
      py::arg("method") = "analytic");
  m.def(
      "check_privacy_conditions",
      [](int n, const std::vector<double>& theta,
         const std::vector<int>& divisors) {
        const PrivacyCheck c = check_privacy_conditions(n, theta, divisors);
        py::dict d;
        d["max_derivative_gap"] = c.max_derivative_gap;
        d["secondary_qfi_fraction"] = c.secondary_qfi_fraction;
        d["equal_derivatives"] = c.equal_derivatives;
        d["rank_one"] = c.rank_one;
        d["private_family"] = c.private_family();
        return d;
      },
      py::arg("n"), py::arg("theta"), py::arg("divisors"));
  m.def("privacy_epsilon", &privacy_epsilon, py::arg("eps_sv"));

  // Anonymity sub-claims.
  m.def(
      "uniform_marginal_check",
      [](int n, const std::vector<int>& subset, double phase,
         std::int64_t samples, std::uint64_t seed) {
        RngStream rng = RngStream(seed).fork(stream::kTest, 2);
        const MarginalCheck c =
            uniform_marginal_check(n, subset, phase, samples, rng);
        py::dict d;
        d["empirical_deviation"] = c.empirical_deviation;
        d["exact_deviation"] = c.exact_deviation
                                   ? py::cast(*c.exact_deviation)
                                   : py::object(py::none());
        return d;
      },
      py::arg("n"), py::arg("subset"), py::arg("phase"), py::arg("samples"),
      py::arg("seed"));
  m.def(
      "dishonest_conditional_state",
      [](double theta_bar, const std::vector<std::uint8_t>& honest_outcomes,
         const std::vector<int>& dishonest) {
        return dishonest_conditional_state(theta_bar, honest_outcomes, dishonest)
            .data();
      },
      py::arg("theta_bar"), py::arg("honest_outcomes"), py::arg("dishonest"),
      "Residual amplitudes on the dishonest agents, computational basis");

  // Full protocol from a JSON config.
  m.def(
      "run_config_json",
      [](const std::string& text, std::optional<std::uint64_t> seed) {
        RunConfig cfg = parse_run_config(text);
        if (seed) cfg.protocol.seed = *seed;
        auto [report, transcript] =
            run_appe(cfg.protocol, cfg.attack, RngStream(cfg.protocol.seed));
        return py::make_tuple(report_to_json(report).dump(),
                              transcript_to_json(transcript).dump(),
                              rounds_csv(transcript));
      },
      py::arg("config_json"), py::arg("seed") = std::nullopt,
      "Returns (report_json, transcript_json, rounds_csv)");

  // Invariant suites.
  m.def(
      "run_verify",
      [](const std::string& suite, const std::string& mutation,
         std::uint64_t seed) {
        VerifyOptions options;
        options.suite = suite;
        options.mutation = mutation;
        options.seed = seed;
        py::list out;
        for (const CheckResult& r : run_verify(options)) {
          py::dict d;
          d["suite"] = r.suite;
          d["name"] = r.name;
          d["passed"] = r.passed;
          d["detail"] = r.detail;
          out.append(d);
        }
        return out;
      },
      py::arg("suite") = "all", py::arg("mutation") = "",
      py::arg("seed") = 0x5eedULL);
}
