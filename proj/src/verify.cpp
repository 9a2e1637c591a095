#include "appe/verify.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "appe/anonymity.hpp"
#include "appe/config.hpp"
#include "appe/engine.hpp"
#include "appe/estimation.hpp"
#include "appe/privacy.hpp"
#include "appe/stats.hpp"

namespace appe {
namespace {

constexpr double kPi = std::numbers::pi;

struct Ctx {
  std::uint64_t seed = 0;
  bool alice_true_mutation = false;
};

using CheckFn = std::function<std::pair<bool, std::string>(const Ctx&)>;

struct Check {
  const char* suite;
  const char* name;
  CheckFn fn;
};

std::vector<std::uint8_t> flags6(std::initializer_list<int> agents) {
  std::vector<std::uint8_t> f(6, 0);
  for (int a : agents) f[a - 1] = 1;
  return f;
}

ProtocolConfig fig_config(int length, int ones, double theta_bar,
                          bool mutation) {
  ProtocolConfig cfg;
  cfg.roles = RoleAssignment{6, 3, flags6({2, 3, 4, 6})};
  cfg.theta.assign(6, 0.0);
  for (int a = 1; a <= 6; ++a)
    if (cfg.roles.is_participant(a)) cfg.theta[a - 1] = theta_bar;
  cfg.length = length;
  cfg.ones = ones;
  cfg.vote_rounds = 0;
  cfg.alice_announces_true = mutation;
  return cfg;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

bool states_match(const PureState& a, const PureState& b, double tol) {
  return std::abs(std::abs(a.data().dot(b.data())) - 1.0) <= tol;
}

// ---- core ---------------------------------------------------------------

std::pair<bool, std::string> check_parity_law(const Ctx& ctx) {
  RngStream rng = RngStream(ctx.seed).fork(stream::kTest, 10);
  const std::int64_t samples = 20000;
  double worst = 0.0;
  for (double tb : {0.0, kPi / 4, kPi / 2, 2 * kPi / 3, kPi}) {
    std::int64_t even = 0;
    for (std::int64_t s = 0; s < samples; ++s)
      if (parity(sample_ghz_phase_fastpath(6, tb, rng)) == 0) ++even;
    const double p = (1.0 + std::cos(tb)) / 2.0;
    const double dev = std::abs(static_cast<double>(even) / samples - p);
    const double band = binomial_band(p, samples);
    worst = std::max(worst, band > 0 ? dev / band : dev / 1e-12);
  }
  return {worst <= 1.0, "worst deviation " + fmt(worst) + " of the 4-sigma band"};
}

std::pair<bool, std::string> check_reduced_uniform(const Ctx&) {
  double worst = 0.0;
  for (double tb : {0.0, 0.7, 2.1}) {
    const PureState state = make_ghz_phase(5, tb);
    for (int mask = 1; mask < 31; ++mask) {  // proper nonempty subsets of 5
      std::vector<int> subset;
      for (int a = 1; a <= 5; ++a)
        if (mask & (1 << (a - 1))) subset.push_back(a);
      const DensityMatrix red = reduced_density(state, subset);
      const Eigen::Index dim = Eigen::Index{1} << subset.size();
      Eigen::MatrixXcd mix = Eigen::MatrixXcd::Zero(dim, dim);
      mix(0, 0) = 0.5;
      mix(dim - 1, dim - 1) = 0.5;
      worst = std::max(worst, trace_distance(
                                  red, DensityMatrix(
                                           static_cast<int>(subset.size()), mix)));
    }
  }
  return {worst <= 1e-12, "max trace distance " + fmt(worst)};
}

std::pair<bool, std::string> check_parity_exact(const Ctx&) {
  double worst = 0.0;
  for (double tb : {0.0, 0.4, kPi / 2, 2.5, kPi}) {
    const Eigen::VectorXd probs = x_basis_distribution(make_ghz_phase(4, tb));
    double even = 0.0;
    for (Eigen::Index x = 0; x < probs.size(); ++x)
      if ((std::popcount(static_cast<std::uint64_t>(x)) & 1) == 0)
        even += probs(x);
    worst = std::max(worst, std::abs(even - (1.0 + std::cos(tb)) / 2.0));
  }
  return {worst <= 1e-12, "max parity-mass error " + fmt(worst)};
}

// ---- subprotocols -------------------------------------------------------

std::pair<bool, std::string> check_notification_exhaustive(const Ctx& ctx) {
  RngStream rng = RngStream(ctx.seed).fork(stream::kTest, 20);
  const int n = 4;
  for (int alice = 1; alice <= n; ++alice) {
    for (int mask = 1; mask < (1 << n); ++mask) {
      std::vector<std::uint8_t> part(n, 0);
      for (int a = 1; a <= n; ++a) part[a - 1] = (mask >> (a - 1)) & 1;
      RoleAssignment roles{n, alice, part};
      RngStream sub = rng.fork(stream::kTest, alice, mask);
      const NotificationRecord rec = notification(roles, sub);
      if (rec.z != part) return {false, "role bits disagree with the roles"};
    }
  }
  return {true, "all n=4 role assignments notified correctly"};
}

std::pair<bool, std::string> check_parity_exhaustive(const Ctx& ctx) {
  RngStream rng = RngStream(ctx.seed).fork(stream::kTest, 21);
  const int n = 4;
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::vector<std::uint8_t> inputs(n, 0);
    std::uint8_t expected = 0;
    for (int a = 0; a < n; ++a) {
      inputs[a] = (mask >> a) & 1;
      expected ^= inputs[a];
    }
    RngStream sub = rng.fork(stream::kTest, mask);
    const ParityRecord rec = parity_protocol(inputs, sub);
    if (rec.aborted || rec.y != expected)
      return {false, "parity output wrong for an input"};
  }
  return {true, "all n=4 inputs XOR correctly"};
}

std::pair<bool, std::string> check_vote_identity(const Ctx&) {
  // Expected odd fraction must equal the direct binomial sum.
  double worst = 0.0;
  for (int n : {3, 6, 9}) {
    for (int v = 0; v <= n; ++v) {
      double odd = 0.0;
      double pmf = std::pow(1.0 - 1.0 / n, v);  // j = 0 term
      for (int j = 0; j <= v; ++j) {
        if (j & 1) odd += pmf;
        pmf *= (static_cast<double>(v - j) / (j + 1)) / (n - 1.0);
      }
      worst = std::max(worst, std::abs(odd - vote_expected_parity(v, n)));
    }
  }
  return {worst <= 1e-12, "max identity error " + fmt(worst)};
}

std::pair<bool, std::string> check_vote_tally(const Ctx& ctx) {
  const std::vector<std::uint8_t> choices = flags6({2, 3, 4, 6});
  for (std::uint64_t s = 1; s <= 5; ++s) {
    RngStream rng = RngStream(ctx.seed).fork(stream::kTest, 22, s);
    const VoteRecord rec = vote(choices, 20000, rng);
    if (rec.aborted) return {false, "vote aborted: " + rec.abort_reason};
    if (rec.tally[1] != 4 || rec.tally[0] != 2)
      return {false, "tally " + std::to_string(rec.tally[1]) + " of 4"};
  }
  return {true, "5/5 seeded votes resolved to the true counts"};
}

// ---- integrity ----------------------------------------------------------

std::pair<bool, std::string> check_pv_soundness(const Ctx& ctx) {
  ProtocolConfig cfg = fig_config(300, 100, kPi / 3, false);
  auto [report, transcript] = run_appe(cfg, AttackSpec{}, RngStream(ctx.seed));
  const bool ok = report.delta_hat == 0.0 && report.sv_rejected == 0 &&
                  report.abort_reason.empty();
  return {ok, "delta_hat " + fmt(report.delta_hat)};
}

std::pair<bool, std::string> check_flip_bias(const Ctx& ctx) {
  ProtocolConfig cfg = fig_config(6000, 2000, kPi / 3, false);
  AttackSpec attack;
  attack.dishonest = {5};
  Strategy s;
  s.kind = StrategyKind::AnnounceFlip;
  s.alpha = 0.2;
  attack.strategies.push_back(s);
  auto [report, transcript] = run_appe(cfg, attack, RngStream(ctx.seed ^ 7));
  const double beta_expect = perturbed_beta(0.75, 0.2);
  const bool ok = std::abs(report.delta_hat - 0.2) <= 0.04 &&
                  std::abs(report.beta_hat - beta_expect) <= 0.03;
  return {ok, "delta_hat " + fmt(report.delta_hat) + ", beta_hat " +
                  fmt(report.beta_hat) + " vs " + fmt(beta_expect)};
}

std::pair<bool, std::string> check_bound_anchors(const Ctx&) {
  struct Anchor {
    double got;
    double want;
  };
  const Anchor anchors[] = {
      {lemma_tail_bound(0.1, 200, 100), 0.3715399030718730},
      {alpha_from_eta(0.2, kPi / 4), 0.1093013764769098},
      {f_poly(0.2, kPi / 4), 0.0493367750448547},
      {bias_bound(0.2, kPi / 4, 0.0, 200, 100), 0.7858402747554025},
      {key_entropy_length(200, 50), 162.2556248918266},
      {vote_expected_parity(4, 6), 0.4012345679012346},
  };
  double worst = 0.0;
  for (const Anchor& a : anchors)
    worst = std::max(worst, std::abs(a.got - a.want));
  return {worst <= 1e-6, "max anchor error " + fmt(worst)};
}

std::pair<bool, std::string> check_correction_roundtrip(const Ctx&) {
  double worst = 0.0;
  for (int bi = 0; bi <= 20; ++bi) {
    const double beta = bi / 20.0;
    for (int di = 0; di < 10; ++di) {
      const double delta = di * 0.05;
      const double back = correct_beta(perturbed_beta(beta, delta), delta);
      worst = std::max(worst, std::abs(back - beta));
    }
  }
  return {worst <= 1e-12, "max round-trip error " + fmt(worst)};
}

// ---- privacy ------------------------------------------------------------

std::pair<bool, std::string> check_qfi_uniform(const Ctx&) {
  double worst_analytic = 0.0, worst_fd = 0.0;
  for (int m = 2; m <= 5; ++m) {
    std::vector<double> theta(m, 0.31);
    std::vector<int> divisors(m, m);
    const Eigen::MatrixXd expect =
        Eigen::MatrixXd::Ones(m, m) / (static_cast<double>(m) * m);
    worst_analytic = std::max(
        worst_analytic,
        (qfi_matrix(m, theta, divisors, QfiMethod::Analytic) - expect)
            .cwiseAbs()
            .maxCoeff());
    worst_fd = std::max(
        worst_fd,
        (qfi_matrix(m, theta, divisors, QfiMethod::FiniteDifference) - expect)
            .cwiseAbs()
            .maxCoeff());
  }
  const bool ok = worst_analytic <= 1e-9 && worst_fd <= 1e-6;
  return {ok, "analytic " + fmt(worst_analytic) + ", finite-diff " + fmt(worst_fd)};
}

std::pair<bool, std::string> check_privacy_conditions_split(const Ctx&) {
  const std::vector<double> theta{0.2, 0.5, 0.9};
  const PrivacyCheck uniform = check_privacy_conditions(3, theta, {3, 3, 3});
  const PrivacyCheck broken = check_privacy_conditions(3, theta, {1, 2, 2});
  const bool ok = uniform.private_family() && !broken.equal_derivatives &&
                  broken.rank_one && !broken.private_family();
  return {ok, "uniform gap " + fmt(uniform.max_derivative_gap) + ", broken gap " +
                  fmt(broken.max_derivative_gap)};
}

std::pair<bool, std::string> check_sld_example(const Ctx&) {
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(2, 2);
  rho(0, 0) = 0.75;
  rho(1, 1) = 0.25;
  Eigen::MatrixXcd drho = Eigen::MatrixXcd::Zero(2, 2);
  drho(0, 0) = 0.25;
  drho(1, 1) = -0.25;
  const SldResult res = sld_solve(DensityMatrix(1, rho), drho);
  Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(2, 2);
  expect(0, 0) = 2.0 * 0.25 / 0.75;
  expect(1, 1) = -2.0;
  const double err = (res.sld - expect).cwiseAbs().maxCoeff();

  // Derivative weight outside the support must be flagged, not divided.
  Eigen::MatrixXcd pure = Eigen::MatrixXcd::Zero(2, 2);
  pure(0, 0) = 1.0;
  Eigen::MatrixXcd leak = Eigen::MatrixXcd::Zero(2, 2);
  leak(1, 1) = 0.5;
  const SldResult flagged = sld_solve(DensityMatrix(1, pure), leak);
  const bool ok = err <= 1e-12 && !res.support_leak && flagged.support_leak;
  return {ok, "eigenbasis solve error " + fmt(err)};
}

// ---- anonymity ----------------------------------------------------------

std::pair<bool, std::string> check_marginal_uniform(const Ctx& ctx) {
  RngStream rng = RngStream(ctx.seed).fork(stream::kTest, 30);
  double worst_exact = 0.0;
  for (double tb : {0.0, 0.9, 2.2}) {
    for (int mask = 1; mask < 15; ++mask) {  // proper nonempty subsets of 4
      std::vector<int> subset;
      for (int a = 1; a <= 4; ++a)
        if (mask & (1 << (a - 1))) subset.push_back(a);
      const MarginalCheck check = uniform_marginal_check(4, subset, tb, 0, rng);
      worst_exact = std::max(worst_exact, check.exact_deviation.value_or(1.0));
    }
  }
  const MarginalCheck sampled =
      uniform_marginal_check(7, {2, 5}, 1.1, 20000, rng);
  bool full_rejected = false;
  try {
    uniform_marginal_check(4, {1, 2, 3, 4}, 0.0, 0, rng);
  } catch (const std::invalid_argument&) {
    full_rejected = true;
  }
  const bool ok =
      worst_exact <= 1e-12 && sampled.empirical_deviation <= 0.02 && full_rejected;
  return {ok, "exact " + fmt(worst_exact) + ", sampled " +
                  fmt(sampled.empirical_deviation)};
}

std::pair<bool, std::string> check_conditional_state(const Ctx&) {
  const double tb = kPi / 3;
  const std::vector<int> d{2, 4};
  // Equal-parity honest outcomes give the same state.
  const PureState even = dishonest_conditional_state(tb, {0, 0, 0}, d);
  for (const OutcomeVector& o :
       {OutcomeVector{0, 1, 1}, OutcomeVector{1, 0, 1}, OutcomeVector{1, 1, 0}})
    if (!states_match(even, dishonest_conditional_state(tb, o, d), 1e-10))
      return {false, "equal-parity outcomes gave different states"};
  const PureState odd = dishonest_conditional_state(tb, {1, 0, 0}, d);
  if (states_match(even, odd, 1e-6))
    return {false, "opposite parities should differ at this phase"};

  // Same mean phase, any participant triple: identical residual.
  for (int mask = 1; mask < 32; ++mask) {
    if (std::popcount(static_cast<unsigned>(mask)) != 3) continue;
    std::vector<double> theta(5, 0.0);
    for (int a = 1; a <= 5; ++a)
      if (mask & (1 << (a - 1))) theta[a - 1] = tb;
    const PureState encoded = encoded_state_uniform(5, theta, 3);
    const PureState projected = project_honest_x(encoded, {1, 3, 5}, {0, 0, 0});
    if (!states_match(even, projected, 1e-10))
      return {false, "participant choice leaked into the conditional state"};
  }
  return {true, "conditional state fixed by mean phase and parity alone"};
}

std::pair<bool, std::string> check_announce_uniformity(const Ctx& ctx) {
  ProtocolConfig cfg = fig_config(20000, 5000, kPi / 3, ctx.alice_true_mutation);
  auto [report, transcript] =
      run_appe(cfg, AttackSpec{}, RngStream(ctx.seed).fork(stream::kTest, 31));
  const auto rounds = static_cast<std::int64_t>(transcript.rounds.size());
  if (rounds == 0) return {false, "no rounds executed"};

  const int n = cfg.roles.n;
  std::vector<std::int64_t> zeros(n, 0);
  std::int64_t xor_zero = 0;
  double worst_pair = 0.0;
  std::vector<std::vector<std::int64_t>> agree(n, std::vector<std::int64_t>(n, 0));
  for (const RoundRecord& round : transcript.rounds) {
    std::uint8_t x = 0;
    for (int i = 0; i < n; ++i) {
      x ^= round.announced[i];
      if (round.announced[i] == 0) ++zeros[i];
      for (int j = i + 1; j < n; ++j)
        if (round.announced[i] == round.announced[j]) ++agree[i][j];
    }
    if (x == 0) ++xor_zero;
  }
  const double half_sd = std::sqrt(static_cast<double>(rounds)) / 2.0;
  double worst_slot = 0.0;
  for (int i = 0; i < n; ++i) {
    worst_slot = std::max(worst_slot, std::abs(zeros[i] - rounds / 2.0) / half_sd);
    for (int j = i + 1; j < n; ++j)
      worst_pair = std::max(
          worst_pair, std::abs(2.0 * agree[i][j] - rounds) /
                          std::sqrt(static_cast<double>(rounds)));
  }
  const double xor_sigma = std::abs(xor_zero - rounds / 2.0) / half_sd;

  ProtocolConfig small = fig_config(2000, 500, kPi / 3, ctx.alice_true_mutation);
  const IdealOutputReport ideal =
      ideal_output_check(small, RngStream(ctx.seed).fork(stream::kTest, 32));

  const bool ok = worst_slot <= 4.75 && worst_pair <= 4.75 && xor_sigma <= 4.75 &&
                  ideal.sv_roleswap_identical;
  return {ok, "slot " + fmt(worst_slot) + " sigma, pair " + fmt(worst_pair) +
                  " sigma, parity " + fmt(xor_sigma) + " sigma"};
}

std::pair<bool, std::string> check_indistinguishability(const Ctx& ctx) {
  AnonymityTestConfig cfg;
  cfg.n = 6;
  cfg.alice_a = 2;
  cfg.alice_b = 2;
  cfg.participants_a = {1, 2, 3, 4};
  cfg.participants_b = {1, 3, 4, 6};
  cfg.dishonest = {5};
  cfg.samples = 2000;

  ProtocolConfig base;
  base.roles = RoleAssignment{6, 2, flags6({1, 2, 3, 4})};
  base.theta = {0.3, 0.6, 0.9, 1.2, 1.5, 1.8};
  base.length = 12;
  base.ones = 4;
  base.vote_rounds = 0;
  base.alice_announces_true = ctx.alice_true_mutation;

  const AnonymityReport report = transcript_indistinguishability(
      cfg, base, AttackSpec{}, RngStream(ctx.seed).fork(stream::kTest, 33));
  const bool ok = !report.reject(cfg.significance);
  return {ok, "p " + fmt(report.chi.p_value) + ", tv " +
                  fmt(report.total_variation)};
}

std::vector<Check> registry() {
  return {
      {"core", "parity-law", check_parity_law},
      {"core", "reduced-state-uniform", check_reduced_uniform},
      {"core", "parity-mass-exact", check_parity_exact},
      {"subprotocols", "notification-exhaustive", check_notification_exhaustive},
      {"subprotocols", "parity-exhaustive", check_parity_exhaustive},
      {"subprotocols", "vote-expectation-identity", check_vote_identity},
      {"subprotocols", "vote-tally", check_vote_tally},
      {"integrity", "pv-soundness", check_pv_soundness},
      {"integrity", "flip-bias", check_flip_bias},
      {"integrity", "bound-anchors", check_bound_anchors},
      {"integrity", "correction-roundtrip", check_correction_roundtrip},
      {"privacy", "qfi-uniform", check_qfi_uniform},
      {"privacy", "privacy-conditions", check_privacy_conditions_split},
      {"privacy", "sld-eigenbasis", check_sld_example},
      {"anonymity", "marginal-uniform", check_marginal_uniform},
      {"anonymity", "conditional-state", check_conditional_state},
      {"anonymity", "announce-uniformity", check_announce_uniformity},
      {"anonymity", "indistinguishability", check_indistinguishability},
  };
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::vector<CheckResult> run_verify(const VerifyOptions& options) {
  static const char* kSuites[] = {"all",       "core",    "subprotocols",
                                  "integrity", "privacy", "anonymity"};
  bool known = false;
  for (const char* s : kSuites) known = known || options.suite == s;
  if (!known) throw std::invalid_argument("unknown suite: " + options.suite);

  Ctx ctx;
  ctx.seed = options.seed;
  if (options.mutation == "alice-announces-true")
    ctx.alice_true_mutation = true;
  else if (!options.mutation.empty())
    throw std::invalid_argument("unknown mutation: " + options.mutation);

  std::vector<CheckResult> results;
  for (const Check& check : registry()) {
    if (options.suite != "all" && options.suite != check.suite) continue;
    CheckResult r;
    r.suite = check.suite;
    r.name = check.name;
    try {
      auto [passed, detail] = check.fn(ctx);
      r.passed = passed;
      r.detail = detail;
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    results.push_back(std::move(r));
  }
  return results;
}

bool all_passed(const std::vector<CheckResult>& results) {
  for (const CheckResult& r : results)
    if (!r.passed) return false;
  return true;
}

std::string junit_xml(const std::vector<CheckResult>& results) {
  int failures = 0;
  for (const CheckResult& r : results)
    if (!r.passed) ++failures;
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<testsuite name=\"appe-verify\" tests=\"" << results.size()
     << "\" failures=\"" << failures << "\">\n";
  for (const CheckResult& r : results) {
    os << "  <testcase classname=\"" << xml_escape(r.suite) << "\" name=\""
       << xml_escape(r.name) << "\"";
    if (r.passed) {
      os << "/>\n";
    } else {
      os << ">\n    <failure message=\"" << xml_escape(r.detail)
         << "\"/>\n  </testcase>\n";
    }
  }
  os << "</testsuite>\n";
  return os.str();
}

}  // namespace appe
