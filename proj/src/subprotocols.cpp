#include "appe/subprotocols.hpp"

#include <cmath>
#include <stdexcept>

#include "appe/channels.hpp"

namespace appe {
namespace {

// n-bit share string with given parity: n-1 free bits plus a closing bit.
void draw_parity_shares(std::uint8_t target_parity, int n, RngStream& rng,
                        std::vector<std::uint8_t>& out) {
  out.resize(n);
  std::uint8_t acc = 0;
  for (int j = 0; j + 1 < n; ++j) {
    out[j] = rng.bit();
    acc ^= out[j];
  }
  out[n - 1] = acc ^ (target_parity & 1u);
}

}  // namespace

int RoleAssignment::m() const {
  int count = 0;
  for (auto p : participant) count += (p & 1u);
  return count;
}

bool RoleAssignment::is_participant(int agent) const {
  return participant.at(agent - 1) & 1u;
}

void RoleAssignment::validate() const {
  if (n < 2) throw std::invalid_argument("need at least two agents");
  if (alice < 1 || alice > n) throw std::invalid_argument("alice index out of range");
  if (static_cast<int>(participant.size()) != n)
    throw std::invalid_argument("participant vector length must equal n");
  if (m() < 1) throw std::invalid_argument("at least one participant required");
}

NotificationRecord notification(const RoleAssignment& roles, RngStream& rng) {
  roles.validate();
  const int n = roles.n;
  NotificationRecord rec;
  rec.n = n;
  rec.r = BitVec(static_cast<std::size_t>(n) * n * n);
  rec.t = BitVec(static_cast<std::size_t>(n) * n);
  rec.z.assign(n, 0);

  std::vector<std::uint8_t> shares;
  for (int i = 1; i <= n; ++i) {
    for (int k = 1; k <= n; ++k) {
      RngStream stream = rng.fork(stream::kNotification, i, k);
      const std::uint8_t target =
          (i == roles.alice && roles.is_participant(k)) ? 1 : 0;
      draw_parity_shares(target, n, stream, shares);
      for (int j = 1; j <= n; ++j)
        rec.r.set((static_cast<std::size_t>(i - 1) * n + (j - 1)) * n + (k - 1),
                  shares[j - 1]);
    }
  }
  for (int j = 1; j <= n; ++j) {
    for (int k = 1; k <= n; ++k) {
      std::uint8_t t = 0;
      for (int i = 1; i <= n; ++i)
        t ^= rec.r.get((static_cast<std::size_t>(i - 1) * n + (j - 1)) * n + (k - 1));
      rec.t.set(static_cast<std::size_t>(j - 1) * n + (k - 1), t);
    }
  }
  for (int k = 1; k <= n; ++k) {
    std::uint8_t z = 0;
    for (int j = 1; j <= n; ++j)
      z ^= rec.t.get(static_cast<std::size_t>(j - 1) * n + (k - 1));
    rec.z[k - 1] = z;
  }
  return rec;
}

ParityRecord parity_protocol(const std::vector<std::uint8_t>& inputs,
                             RngStream& rng, std::optional<int> fail_agent) {
  const int n = static_cast<int>(inputs.size());
  if (n < 2) throw std::invalid_argument("parity needs at least two agents");

  ParityRecord rec;
  rec.n = n;
  rec.shares = BitVec(static_cast<std::size_t>(n) * n);

  std::vector<std::uint8_t> shares;
  for (int i = 1; i <= n; ++i) {
    RngStream stream = rng.fork(i);
    draw_parity_shares(inputs[i - 1], n, stream, shares);
    for (int j = 1; j <= n; ++j)
      rec.shares.set(static_cast<std::size_t>(i - 1) * n + (j - 1), shares[j - 1]);
  }

  SimultaneousBroadcast bc(n);
  for (int i = 1; i <= n; ++i) {
    if (fail_agent && *fail_agent == i) {
      bc.mark_failed(i);
      continue;
    }
    std::uint8_t z = 0;
    for (int j = 1; j <= n; ++j)
      z ^= rec.shares.get(static_cast<std::size_t>(j - 1) * n + (i - 1));
    bc.commit(i, {z});
  }
  if (!bc.reveal()) {
    rec.aborted = true;
    return rec;
  }
  rec.announced.resize(n);
  for (int i = 1; i <= n; ++i) {
    rec.announced[i - 1] = bc.value(i)[0];
    rec.y ^= rec.announced[i - 1];
  }
  return rec;
}

double vote_expected_parity(int v, int n) {
  if (n < 3) throw std::invalid_argument("vote needs at least three agents");
  if (v < 0) throw std::invalid_argument("tally cannot be negative");
  return 0.5 * (1.0 - std::pow((n - 2.0) / n, v));
}

std::optional<int> vote_resolve(double sigma, int n) {
  const double window = 1.0 / (2.0 * std::exp(2.0) * n);
  std::optional<int> found;
  for (int v = 0; v <= n; ++v) {
    if (std::abs(sigma - vote_expected_parity(v, n)) < window) {
      if (found) return std::nullopt;  // ambiguous
      found = v;
    }
  }
  return found;
}

VoteRecord vote(const std::vector<std::uint8_t>& choices, int s, RngStream& rng,
                std::optional<int> fail_agent) {
  const int n = static_cast<int>(choices.size());
  if (n < 3) throw std::invalid_argument("vote needs at least three agents");
  if (s < 1) throw std::invalid_argument("vote needs at least one round");

  VoteRecord rec;
  rec.n = n;
  rec.s = s;

  std::vector<std::uint8_t> shares;
  for (int b = 0; b <= 1; ++b) {
    rec.shares[b] = BitVec(static_cast<std::size_t>(s) * n * n);
    rec.broadcast[b] = BitVec(static_cast<std::size_t>(s) * n);

    // Phase A: masked parity rounds; announcement bits stored, not revealed.
    std::vector<std::vector<std::uint8_t>> stored(n);
    for (int round = 0; round < s; ++round) {
      for (int i = 1; i <= n; ++i) {
        RngStream stream = rng.fork(b, round, i);
        const std::uint8_t masked =
            (choices[i - 1] == b && stream.bernoulli(1.0 / n)) ? 1 : 0;
        draw_parity_shares(masked, n, stream, shares);
        for (int j = 1; j <= n; ++j)
          rec.shares[b].set(
              (static_cast<std::size_t>(round) * n + (i - 1)) * n + (j - 1),
              shares[j - 1]);
      }
      for (int i = 1; i <= n; ++i) {
        std::uint8_t z = 0;
        for (int j = 1; j <= n; ++j)
          z ^= rec.shares[b].get(
              (static_cast<std::size_t>(round) * n + (j - 1)) * n + (i - 1));
        stored[i - 1].push_back(z);
      }
    }

    // Phase B: one simultaneous broadcast of all stored bits.
    SimultaneousBroadcast bc(n);
    for (int i = 1; i <= n; ++i) {
      if (fail_agent && *fail_agent == i) {
        bc.mark_failed(i);
        continue;
      }
      bc.commit(i, stored[i - 1]);
    }
    if (!bc.reveal()) {
      rec.aborted = true;
      rec.abort_reason = "broadcast-failure";
      return rec;
    }
    for (int i = 1; i <= n; ++i)
      for (int round = 0; round < s; ++round)
        rec.broadcast[b].set(static_cast<std::size_t>(round) * n + (i - 1),
                             bc.value(i)[round]);

    // Phase C: recover the tally from the odd-parity fraction.
    int odd = 0;
    for (int round = 0; round < s; ++round) {
      std::uint8_t p = 0;
      for (int i = 1; i <= n; ++i)
        p ^= rec.broadcast[b].get(static_cast<std::size_t>(round) * n + (i - 1));
      odd += p;
    }
    rec.sigma[b] = static_cast<double>(odd) / s;
    const auto v = vote_resolve(rec.sigma[b], n);
    if (!v) {
      rec.aborted = true;
      rec.abort_reason = "tally-unresolved";
      return rec;
    }
    rec.tally[b] = *v;
  }

  if (rec.tally[0] + rec.tally[1] != n) {
    rec.aborted = true;
    rec.abort_reason = "tally-inconsistent";
  }
  return rec;
}

}  // namespace appe
