#include "appe/channels.hpp"

#include <stdexcept>

namespace appe {

SimultaneousBroadcast::SimultaneousBroadcast(int n)
    : n_(n), committed_(n, false), failed_(n, false), values_(n) {
  if (n < 1) throw std::invalid_argument("broadcast needs at least one agent");
}

void SimultaneousBroadcast::commit(int agent, std::vector<std::uint8_t> bits) {
  if (agent < 1 || agent > n_) throw std::invalid_argument("agent index out of range");
  if (revealed_) throw std::logic_error("commit after reveal");
  committed_[agent - 1] = true;
  values_[agent - 1] = std::move(bits);
}

void SimultaneousBroadcast::mark_failed(int agent) {
  if (agent < 1 || agent > n_) throw std::invalid_argument("agent index out of range");
  failed_[agent - 1] = true;
}

bool SimultaneousBroadcast::reveal() {
  revealed_ = true;
  for (int i = 0; i < n_; ++i)
    if (failed_[i] || !committed_[i]) return false;
  return true;
}

const std::vector<std::uint8_t>& SimultaneousBroadcast::value(int agent) const {
  if (agent < 1 || agent > n_) throw std::invalid_argument("agent index out of range");
  if (!revealed_) throw std::logic_error("broadcast value read before reveal");
  return values_[agent - 1];
}

}  // namespace appe
