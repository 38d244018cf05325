#include "spinmarket/market_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spinmarket/error.hpp"

namespace spinmarket {

SpinSpace SpinSpace::discrete(int S) {
  if (S < 1) throw Error("spin amplitude S must be >= 1 (got " + std::to_string(S) + ")");
  return SpinSpace(Kind::discrete, S);
}

bool SpinSpace::contains(double value) const noexcept {
  if (!std::isfinite(value)) return false;
  if (kind_ == Kind::continuous) return value >= -1.0 && value <= 1.0;
  return value == std::nearbyint(value) && std::abs(value) <= S_;
}

FieldSchedule::FieldSchedule(std::vector<FieldSegment> segments) : segments_(std::move(segments)) {
  std::sort(segments_.begin(), segments_.end(),
            [](const FieldSegment& x, const FieldSegment& y) { return x.t_start < y.t_start; });
  for (std::size_t k = 0; k < segments_.size(); ++k) {
    const auto& s = segments_[k];
    if (s.t_start >= s.t_end)
      throw Error("field segment needs t_start < t_end (got " + std::to_string(s.t_start) + ", " +
                  std::to_string(s.t_end) + ")");
    if (!std::isfinite(s.H)) throw Error("field segment strength must be finite");
    if (k > 0 && segments_[k - 1].t_end > s.t_start)
      throw Error("field segments overlap at t=" + std::to_string(s.t_start));
  }
}

void ModelParams::validate() const {
  if (!std::isfinite(T) || T <= 0) throw Error("temperature T must be > 0");
  if (!std::isfinite(a) || a < 0) throw Error("global coupling a must be >= 0");
  if (!std::isfinite(J)) throw Error("coupling J must be finite");
  if (!std::isfinite(A)) throw Error("clearing price A must be finite");
  if (!std::isfinite(global_scale) || global_scale < 0)
    throw Error("global_scale must be >= 0");
}

SideCounts count_sides(std::span<const double> spins) noexcept {
  if (spins.empty()) return {};
  long up = 0, dn = 0;
  for (double s : spins) {
    up += s > 0;
    dn += s < 0;
  }
  const auto n = static_cast<double>(spins.size());
  return {up / n, dn / n};
}

MarketState::MarketState(std::vector<double> spins, long t) : t_(t) { assign(std::move(spins)); }

void MarketState::assign(std::vector<double> spins) {
  spins_ = std::move(spins);
  up_ = dn_ = 0;
  for (double s : spins_) {
    up_ += s > 0;
    dn_ += s < 0;
  }
  const auto n = static_cast<double>(std::max<std::size_t>(spins_.size(), 1));
  counts_ = {up_ / n, dn_ / n};
}

void MarketState::set_spin(std::size_t i, double value) noexcept {
  const double old = spins_[i];
  up_ += (value > 0) - (old > 0);
  dn_ += (value < 0) - (old < 0);
  spins_[i] = value;
  const auto n = static_cast<double>(spins_.size());
  counts_ = {up_ / n, dn_ / n};
}

double MarketState::magnetization() const noexcept {
  double m = 0;
  for (double s : spins_) m += s;
  return m;
}

double agent_energy(const MarketState& snapshot, std::size_t i, double value,
                    const NeighborGraph& graph, const ModelParams& params, double H) {
  if (!params.spin.contains(value))
    throw Error("agent_energy: value " + std::to_string(value) + " is outside the spin space");
  double local = 0;
  for (int j : graph.neighbors(i)) local += snapshot.spin(static_cast<std::size_t>(j));
  return value * (-params.J * local) + params.a * params.global_scale * value * snapshot.imbalance() -
         H * value;
}

double total_energy(const MarketState& state, const NeighborGraph& graph,
                    const ModelParams& params, double H) {
  const double global = params.a * params.global_scale * state.imbalance();
  double pair = 0, single = 0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    const double s = state.spin(i);
    if (s == 0) continue;
    double local = 0;
    for (int j : graph.neighbors(i)) local += state.spin(static_cast<std::size_t>(j));
    pair += s * local;
    single += s * (global - H);
  }
  return -0.5 * params.J * pair + single;
}

double price(double n_up, double n_dn, double a, double A) noexcept { return a * (n_up - n_dn) + A; }

double gross_return(double P_t, double P_prev) {
  if (P_prev == 0) throw Error("gross_return: previous price is zero, return undefined");
  return (P_t - P_prev) / P_prev;
}

}  // namespace spinmarket
