#include "appe/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <stdexcept>

namespace appe {
namespace {

using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& message) {
  throw std::invalid_argument("config: " + message);
}

void require_object(const ordered_json& j, const std::string& where) {
  if (!j.is_object()) fail(where + " must be an object");
}

void reject_unknown(const ordered_json& obj, const std::string& where,
                    std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) fail("unknown key \"" + key + "\" in " + where);
  }
}

const ordered_json& require(const ordered_json& obj, const std::string& where,
                            const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(where + " is missing \"" + key + "\"");
  return *it;
}

std::int64_t as_int(const ordered_json& j, const std::string& name) {
  if (!j.is_number_integer()) fail("\"" + name + "\" must be an integer");
  return j.get<std::int64_t>();
}

double as_double(const ordered_json& j, const std::string& name) {
  if (!j.is_number()) fail("\"" + name + "\" must be a number");
  return j.get<double>();
}

bool as_bool(const ordered_json& j, const std::string& name) {
  if (!j.is_boolean()) fail("\"" + name + "\" must be a boolean");
  return j.get<bool>();
}

std::string as_string(const ordered_json& j, const std::string& name) {
  if (!j.is_string()) fail("\"" + name + "\" must be a string");
  return j.get<std::string>();
}

Strategy parse_strategy(const ordered_json& j, const std::string& where) {
  require_object(j, where);
  const std::string kind = as_string(require(j, where, "kind"), where + ".kind");
  Strategy s;
  if (kind == "honest") {
    reject_unknown(j, where, {"kind"});
    s.kind = StrategyKind::HonestAll;
  } else if (kind == "announce_flip") {
    reject_unknown(j, where, {"kind", "alpha"});
    s.kind = StrategyKind::AnnounceFlip;
    s.alpha = as_double(require(j, where, "alpha"), where + ".alpha");
  } else if (kind == "local_unitary") {
    reject_unknown(j, where, {"kind", "trigger", "gates"});
    s.kind = StrategyKind::LocalUnitary;
    if (j.contains("trigger"))
      s.trigger = as_double(j.at("trigger"), where + ".trigger");
    const ordered_json& gates = require(j, where, "gates");
    if (!gates.is_array() || gates.empty())
      fail(where + ".gates must be a non-empty array");
    for (std::size_t i = 0; i < gates.size(); ++i) {
      const std::string gwhere = where + ".gates[" + std::to_string(i) + "]";
      require_object(gates[i], gwhere);
      reject_unknown(gates[i], gwhere, {"agent", "name"});
      const int agent = static_cast<int>(
          as_int(require(gates[i], gwhere, "agent"), gwhere + ".agent"));
      const std::string name =
          as_string(require(gates[i], gwhere, "name"), gwhere + ".name");
      s.unitaries.emplace_back(agent, named_gate(name));
    }
  } else if (kind == "delayed_measurement") {
    reject_unknown(j, where, {"kind", "policy"});
    s.kind = StrategyKind::DelayedMeasurement;
    s.policy = as_string(require(j, where, "policy"), where + ".policy");
  } else if (kind == "malicious_source") {
    reject_unknown(j, where, {"kind", "source"});
    s.kind = StrategyKind::MaliciousSource;
    s.source = as_string(require(j, where, "source"), where + ".source");
  } else if (kind == "key_leak") {
    reject_unknown(j, where, {"kind", "fraction"});
    s.kind = StrategyKind::KeyLeak;
    s.leak_fraction = as_double(require(j, where, "fraction"), where + ".fraction");
  } else {
    fail(where + ".kind \"" + kind + "\" is not a strategy");
  }
  return s;
}

std::string bitstring(const std::vector<std::uint8_t>& bits) {
  std::string s;
  s.reserve(bits.size());
  for (auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(std::string("not valid JSON: ") + e.what());
  }
  require_object(j, "top level");
  reject_unknown(j, "top level",
                 {"schema_version", "n", "alice", "participants", "theta",
                  "length", "ones", "m_min", "delta_threshold", "vote_rounds",
                  "sv_copies", "eps_sv_accept", "apply_delta_correction",
                  "known_delta", "bias_eta_grid", "alice_announces_true",
                  "seed", "adversary", "output"});

  if (as_int(require(j, "top level", "schema_version"), "schema_version") !=
      kConfigSchemaVersion)
    fail("unsupported schema_version");

  RunConfig cfg;
  ProtocolConfig& p = cfg.protocol;
  const int n = static_cast<int>(as_int(require(j, "top level", "n"), "n"));
  p.roles.n = n;
  p.roles.alice =
      static_cast<int>(as_int(require(j, "top level", "alice"), "alice"));

  const ordered_json& parts = require(j, "top level", "participants");
  if (!parts.is_array()) fail("\"participants\" must be an array");
  p.roles.participant.assign(n > 0 ? n : 0, 0);
  for (const auto& e : parts) {
    const int agent = static_cast<int>(as_int(e, "participants[]"));
    if (agent < 1 || agent > n) fail("participant index out of range");
    if (p.roles.participant[agent - 1]) fail("duplicate participant index");
    p.roles.participant[agent - 1] = 1;
  }

  const ordered_json& theta = require(j, "top level", "theta");
  if (!theta.is_array()) fail("\"theta\" must be an array");
  for (const auto& e : theta) p.theta.push_back(as_double(e, "theta[]"));

  p.length = static_cast<int>(as_int(require(j, "top level", "length"), "length"));
  p.ones = static_cast<int>(as_int(require(j, "top level", "ones"), "ones"));
  p.seed = static_cast<std::uint64_t>(as_int(require(j, "top level", "seed"), "seed"));

  if (j.contains("m_min"))
    p.m_min = static_cast<int>(as_int(j.at("m_min"), "m_min"));
  if (j.contains("delta_threshold"))
    p.delta_threshold = as_double(j.at("delta_threshold"), "delta_threshold");
  if (j.contains("vote_rounds"))
    p.vote_rounds = static_cast<int>(as_int(j.at("vote_rounds"), "vote_rounds"));
  if (j.contains("sv_copies"))
    p.sv_copies = static_cast<int>(as_int(j.at("sv_copies"), "sv_copies"));
  if (j.contains("eps_sv_accept"))
    p.eps_sv_accept = as_double(j.at("eps_sv_accept"), "eps_sv_accept");
  if (j.contains("apply_delta_correction"))
    p.apply_delta_correction =
        as_bool(j.at("apply_delta_correction"), "apply_delta_correction");
  if (j.contains("known_delta") && !j.at("known_delta").is_null())
    p.known_delta = as_double(j.at("known_delta"), "known_delta");
  if (j.contains("bias_eta_grid")) {
    const ordered_json& grid = j.at("bias_eta_grid");
    if (!grid.is_array()) fail("\"bias_eta_grid\" must be an array");
    for (const auto& e : grid)
      p.bias_eta_grid.push_back(as_double(e, "bias_eta_grid[]"));
  }
  if (j.contains("alice_announces_true"))
    p.alice_announces_true =
        as_bool(j.at("alice_announces_true"), "alice_announces_true");

  if (j.contains("adversary")) {
    const ordered_json& adv = j.at("adversary");
    require_object(adv, "adversary");
    reject_unknown(adv, "adversary", {"dishonest", "strategies"});
    const ordered_json& dis = require(adv, "adversary", "dishonest");
    if (!dis.is_array()) fail("\"adversary.dishonest\" must be an array");
    for (const auto& e : dis)
      cfg.attack.dishonest.push_back(
          static_cast<int>(as_int(e, "adversary.dishonest[]")));
    const ordered_json& strategies = require(adv, "adversary", "strategies");
    if (!strategies.is_array()) fail("\"adversary.strategies\" must be an array");
    for (std::size_t i = 0; i < strategies.size(); ++i)
      cfg.attack.strategies.push_back(parse_strategy(
          strategies[i], "adversary.strategies[" + std::to_string(i) + "]"));
  }

  if (j.contains("output")) {
    const ordered_json& out = j.at("output");
    require_object(out, "output");
    reject_unknown(out, "output", {"report", "transcript", "rounds"});
    if (out.contains("report"))
      cfg.output.report = as_string(out.at("report"), "output.report");
    if (out.contains("transcript"))
      cfg.output.transcript = as_string(out.at("transcript"), "output.transcript");
    if (out.contains("rounds"))
      cfg.output.rounds = as_string(out.at("rounds"), "output.rounds");
  }

  try {
    cfg.protocol.validate();
    cfg.attack.validate(cfg.protocol.roles);
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str());
}

nlohmann::ordered_json report_to_json(const EstimationReport& r) {
  ordered_json j;
  j["schema_version"] = kConfigSchemaVersion;
  j["n"] = r.n;
  j["m_true"] = r.m_true;
  j["m_tally"] = r.m_tally;
  j["length"] = r.length_configured;
  j["ones"] = r.ones_configured;
  j["nu_executed"] = r.nu_executed;
  j["k_executed"] = r.k_executed;
  j["sv_rejected"] = r.sv_rejected;
  j["beta_hat"] = r.beta_hat;
  j["delta_hat"] = r.delta_hat;
  j["theta_hat"] = r.theta_hat;
  j["beta_clamped"] = r.beta_clamped;
  if (r.theta_corrected)
    j["theta_corrected"] = *r.theta_corrected;
  else
    j["theta_corrected"] = nullptr;
  j["correction_failed"] = r.correction_failed;
  j["variance_pred"] = r.variance_pred;
  j["eps_sv"] = r.eps_sv;
  j["eps_priv"] = r.eps_priv;
  ordered_json curve = ordered_json::array();
  for (const auto& [eta, bound] : r.bias_curve)
    curve.push_back(ordered_json::array({eta, bound}));
  j["bias_curve"] = curve;
  j["abort_reason"] = r.abort_reason;
  return j;
}

nlohmann::ordered_json transcript_to_json(const Transcript& t) {
  ordered_json j;
  j["schema_version"] = t.schema_version;
  j["n"] = t.n;
  j["seed"] = t.seed;

  ordered_json notif;
  notif["n"] = t.notification_log.n;
  notif["r"] = t.notification_log.r.to_hex();
  notif["t"] = t.notification_log.t.to_hex();
  notif["z"] = t.notification_log.z;
  j["notification"] = notif;

  if (t.vote_log) {
    ordered_json v;
    v["n"] = t.vote_log->n;
    v["s"] = t.vote_log->s;
    v["aborted"] = t.vote_log->aborted;
    v["abort_reason"] = t.vote_log->abort_reason;
    v["tally"] = t.vote_log->tally;
    v["sigma"] = t.vote_log->sigma;
    v["shares"] = ordered_json::array(
        {t.vote_log->shares[0].to_hex(), t.vote_log->shares[1].to_hex()});
    v["broadcast"] = ordered_json::array(
        {t.vote_log->broadcast[0].to_hex(), t.vote_log->broadcast[1].to_hex()});
    j["vote"] = v;
  } else {
    j["vote"] = nullptr;
  }

  ordered_json sv = ordered_json::array();
  for (const auto& entry : t.sv_log) {
    ordered_json e;
    e["round"] = entry.round;
    e["accepted"] = entry.accepted;
    e["target_index"] = entry.target_index;
    e["generators"] = entry.generators;
    e["outcomes"] = entry.outcomes;
    sv.push_back(e);
  }
  j["sv"] = sv;

  ordered_json rounds = ordered_json::array();
  for (const auto& round : t.rounds) {
    ordered_json e;
    e["round"] = round.index;
    e["kind"] = std::string(1, round.kind);
    e["announced"] = bitstring(round.announced);
    e["alice_true"] = round.alice_true;
    e["result"] = round.result;
    rounds.push_back(e);
  }
  j["rounds"] = rounds;

  ordered_json views = ordered_json::array();
  for (const auto& view : t.views) {
    ordered_json e;
    e["agent"] = view.agent;
    e["role_bit"] = view.role_bit;
    e["participant"] = view.participant;
    e["theta"] = view.theta;
    e["kappa"] = bitstring(view.kappa);
    e["outcomes"] = view.true_outcomes.to_hex();
    e["alice_bits"] = view.alice_random_bits.to_hex();
    views.push_back(e);
  }
  j["views"] = views;

  ordered_json adv;
  adv["dishonest"] = t.adversary.dishonest;
  ordered_json leaked = ordered_json::array();
  for (const auto& [round, bit] : t.adversary.leaked_key)
    leaked.push_back(ordered_json::array({round, bit}));
  adv["leaked_key"] = leaked;
  adv["residual_outcomes"] = t.adversary.residual_outcomes.to_hex();
  j["adversary"] = adv;
  return j;
}

std::string rounds_csv(const Transcript& t) {
  std::string csv = "round,kind,announcements,result_bit\n";
  for (const auto& round : t.rounds) {
    csv += std::to_string(round.index);
    csv.push_back(',');
    csv.push_back(round.kind);
    csv.push_back(',');
    csv += bitstring(round.announced);
    csv.push_back(',');
    csv += std::to_string(static_cast<int>(round.result));
    csv.push_back('\n');
  }
  return csv;
}

}  // namespace appe
