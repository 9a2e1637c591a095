#include "appe/runner.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "appe/config.hpp"
#include "appe/estimation.hpp"
#include "appe/verify.hpp"

namespace appe {
namespace {

namespace fs = std::filesystem;

std::uint64_t resolve_seed(std::uint64_t config_seed,
                           const std::optional<std::uint64_t>& override) {
  if (override) return *override;
  if (const char* env = std::getenv("APPE_SEED")) {
    const std::string text(env);
    std::size_t used = 0;
    std::uint64_t value = 0;
    try {
      value = std::stoull(text, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("APPE_SEED must be an unsigned integer");
    }
    if (used != text.size())
      throw std::invalid_argument("APPE_SEED must be an unsigned integer");
    return value;
  }
  return config_seed;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

struct Axis {
  std::string name;
  std::vector<double> values;
};

Axis parse_axis(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos)
    throw std::invalid_argument("sweep axis must look like name=start:stop:step");
  Axis axis;
  axis.name = spec.substr(0, eq);
  const std::string grid = spec.substr(eq + 1);
  double start = 0, stop = 0, step = 0;
  char c1 = 0, c2 = 0;
  std::istringstream in(grid);
  if (!(in >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' ||
      !in.eof())
    throw std::invalid_argument("sweep grid must be start:stop:step");
  if (step <= 0) throw std::invalid_argument("sweep step must be positive");
  for (double v = start; v <= stop + 1e-9; v += step) axis.values.push_back(v);
  if (axis.values.empty()) throw std::invalid_argument("sweep grid is empty");
  return axis;
}

double participant_mean(const ProtocolConfig& cfg) {
  double sum = 0.0;
  for (int a = 1; a <= cfg.roles.n; ++a)
    if (cfg.roles.is_participant(a)) sum += cfg.theta[a - 1];
  return sum / cfg.roles.m();
}

void apply_axis(RunConfig& cfg, const std::string& axis, double value) {
  if (axis == "alpha") {
    for (Strategy& s : cfg.attack.strategies) {
      if (s.kind == StrategyKind::AnnounceFlip) {
        s.alpha = value;
        return;
      }
    }
    throw std::invalid_argument(
        "sweep axis alpha needs an announce_flip strategy in the config");
  }
  if (axis == "length" || axis == "ones") {
    const double rounded = std::round(value);
    if (std::abs(value - rounded) > 1e-9)
      throw std::invalid_argument("sweep axis " + axis + " needs integer values");
    (axis == "length" ? cfg.protocol.length : cfg.protocol.ones) =
        static_cast<int>(rounded);
    return;
  }
  if (axis == "theta_bar") {
    for (int a = 1; a <= cfg.protocol.roles.n; ++a)
      if (cfg.protocol.roles.is_participant(a))
        cfg.protocol.theta[a - 1] = value;
    return;
  }
  if (axis != "seed")
    throw std::invalid_argument(
        "sweep axis must be one of alpha, length, ones, theta_bar, seed");
}

std::string csv_double(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

}  // namespace

int cmd_run(const RunOptions& options) {
  RunConfig cfg;
  std::uint64_t seed = 0;
  try {
    cfg = load_run_config(options.config_path);
    seed = resolve_seed(cfg.protocol.seed, options.seed);
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kExitConfigError;
  }
  cfg.protocol.seed = seed;

  auto [report, transcript] = run_appe(cfg.protocol, cfg.attack, RngStream(seed));

  try {
    fs::create_directories(options.out_dir);
    const fs::path dir(options.out_dir);
    write_file(dir / cfg.output.report, report_to_json(report).dump(2) + "\n");
    write_file(dir / cfg.output.transcript,
               transcript_to_json(transcript).dump(2) + "\n");
    write_file(dir / cfg.output.rounds, rounds_csv(transcript));
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitConfigError;
  }

  if (!report.abort_reason.empty()) {
    std::cerr << "protocol aborted: " << report.abort_reason << "\n";
    return kExitProtocolAbort;
  }
  std::cout << "theta_hat " << report.theta_hat << " from " << report.nu_executed
            << " estimation rounds (seed " << seed << ")\n";
  return kExitOk;
}

int cmd_sweep(const SweepOptions& options) {
  RunConfig base;
  Axis axis;
  std::uint64_t base_seed = 0;
  try {
    base = load_run_config(options.config_path);
    base_seed = resolve_seed(base.protocol.seed, options.seed);
    axis = parse_axis(options.axis);
    if (options.seeds < 1)
      throw std::invalid_argument("sweep needs at least one seed replica");
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kExitConfigError;
  }

  std::string csv =
      "axis,value,seed,m_tally,nu_executed,k_executed,beta_hat,delta_hat,"
      "theta_hat,theta_true,bias,variance_pred,bias_bound_eta02,abort_reason\n";
  const int replicas = axis.name == "seed" ? 1 : options.seeds;
  for (double value : axis.values) {
    for (int r = 0; r < replicas; ++r) {
      RunConfig cfg = base;
      std::uint64_t seed = base_seed + static_cast<std::uint64_t>(r);
      try {
        apply_axis(cfg, axis.name, value);
        if (axis.name == "seed")
          seed = static_cast<std::uint64_t>(std::llround(value));
        cfg.protocol.seed = seed;
        cfg.protocol.validate();
      } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return kExitConfigError;
      }

      auto [report, transcript] =
          run_appe(cfg.protocol, cfg.attack, RngStream(seed));
      const double theta_true = participant_mean(cfg.protocol);
      const int executed = report.nu_executed + report.k_executed;
      csv += axis.name;
      csv += ',' + csv_double(value);
      csv += ',' + std::to_string(seed);
      csv += ',' + std::to_string(report.m_tally);
      csv += ',' + std::to_string(report.nu_executed);
      csv += ',' + std::to_string(report.k_executed);
      csv += ',' + csv_double(report.beta_hat);
      csv += ',' + csv_double(report.delta_hat);
      csv += ',' + csv_double(report.theta_hat);
      csv += ',' + csv_double(theta_true);
      csv += ',' + csv_double(report.theta_hat - theta_true);
      csv += ',' + csv_double(report.variance_pred);
      csv += ',';
      if (executed > 0)
        csv += csv_double(bias_bound(0.2, report.theta_hat, report.delta_hat,
                                     executed, report.k_executed));
      csv += ',' + report.abort_reason;
      csv += '\n';
    }
  }

  try {
    fs::create_directories(options.out_dir);
    write_file(fs::path(options.out_dir) / "sweep.csv", csv);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitConfigError;
  }
  std::cout << "sweep.csv: " << axis.values.size() << " grid points x "
            << replicas << " seeds\n";
  return kExitOk;
}

int cmd_verify_suite(const VerifyCmdOptions& options) {
  std::vector<CheckResult> results;
  try {
    VerifyOptions vo;
    vo.suite = options.suite;
    vo.mutation = options.mutation;
    vo.seed = options.seed;
    results = run_verify(vo);
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kExitConfigError;
  }

  for (const CheckResult& r : results)
    std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.suite << "/" << r.name
              << " - " << r.detail << "\n";

  if (!options.junit_path.empty()) {
    try {
      write_file(options.junit_path, junit_xml(results));
    } catch (const std::exception& e) {
      std::cerr << e.what() << "\n";
      return kExitConfigError;
    }
  }
  return all_passed(results) ? kExitOk : kExitVerifyFailed;
}

int cmd_bounds(const BoundsOptions& options) {
  std::vector<double> etas;
  try {
    const Axis axis = parse_axis("eta=" + options.eta);
    etas = axis.values;
    if (options.length < 1 || options.ones < 0 || options.ones >= options.length)
      throw std::invalid_argument("bounds need 0 <= ones < length");
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kExitConfigError;
  }

  std::string csv = "eta,alpha_equiv,f_poly,bias_bound,tail_at_eta\n";
  for (double eta : etas) {
    csv += csv_double(eta);
    csv += ',';
    try {
      csv += csv_double(alpha_from_eta(eta, options.theta));
    } catch (const std::domain_error&) {
      csv += "nan";
    }
    csv += ',' + csv_double(f_poly(eta, options.theta));
    csv += ',' + csv_double(bias_bound(eta, options.theta, options.delta,
                                       options.length, options.ones));
    csv += ',' + csv_double(lemma_tail_bound(eta, options.length, options.ones));
    csv += '\n';
  }

  try {
    write_file(options.out_path, csv);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitConfigError;
  }
  std::cout << options.out_path << ": " << etas.size() << " rows\n";
  return kExitOk;
}

}  // namespace appe
