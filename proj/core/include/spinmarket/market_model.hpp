#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "spinmarket/lattice.hpp"

namespace spinmarket {

/// Agent state space: the 2S+1 integers -S..S, or the real interval [-1, 1].
class SpinSpace {
 public:
  enum class Kind { discrete, continuous };

  static SpinSpace discrete(int S);
  static SpinSpace continuous() noexcept { return SpinSpace(Kind::continuous, 0); }

  Kind kind() const noexcept { return kind_; }
  bool is_discrete() const noexcept { return kind_ == Kind::discrete; }
  /// Amplitude S for discrete spaces, 0 for the continuous one.
  int amplitude() const noexcept { return S_; }
  /// Largest |value| in the space.
  double bound() const noexcept { return is_discrete() ? S_ : 1.0; }
  bool contains(double value) const noexcept;

  friend bool operator==(const SpinSpace&, const SpinSpace&) = default;

 private:
  SpinSpace(Kind kind, int S) noexcept : kind_(kind), S_(S) {}
  Kind kind_;
  int S_;
};

struct FieldSegment {
  long t_start = 0;
  long t_end = 0;  // exclusive
  double H = 0.0;

  friend bool operator==(const FieldSegment&, const FieldSegment&) = default;
};

/// Piecewise-constant boosting field over sweep indices. Segments are
/// half-open [t_start, t_end), kept sorted and non-overlapping; H = 0 elsewhere.
class FieldSchedule {
 public:
  FieldSchedule() = default;
  explicit FieldSchedule(std::vector<FieldSegment> segments);

  static FieldSchedule pulse(long t_start, long t_end, double H) {
    return FieldSchedule({{t_start, t_end, H}});
  }

  const std::vector<FieldSegment>& segments() const noexcept { return segments_; }
  bool empty() const noexcept { return segments_.empty(); }

  friend bool operator==(const FieldSchedule&, const FieldSchedule&) = default;

 private:
  std::vector<FieldSegment> segments_;
};

struct ModelParams {
  SpinSpace spin = SpinSpace::discrete(1);
  double J = 1.0;  // imitation coupling
  double a = 0.0;  // global price coupling, a >= 0
  double A = 3.0;  // market-clearing price
  double T = 1.0;  // market temperature, k_B = 1
  FieldSchedule schedule;
  /// Multiplier on the global term inside the agent energy only (the price
  /// always uses `a` unscaled). 1 gives the plain per-capita form.
  double global_scale = 1.0;

  /// Throws Error when T <= 0, a < 0, global_scale < 0 or any value is not finite.
  void validate() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

struct SideCounts {
  double up = 0.0;  // fraction with spin > 0
  double dn = 0.0;  // fraction with spin < 0
};

/// Buyer / seller fractions: sign counting, zero is neutral.
SideCounts count_sides(std::span<const double> spins) noexcept;

/// Per-agent spin values at sweep t plus the buyer/seller fractions derived
/// from them.
class MarketState {
 public:
  MarketState() = default;
  explicit MarketState(std::vector<double> spins, long t = 0);

  std::span<const double> spins() const noexcept { return spins_; }
  double spin(std::size_t i) const noexcept { return spins_[i]; }
  std::size_t size() const noexcept { return spins_.size(); }
  long t() const noexcept { return t_; }
  double n_up() const noexcept { return counts_.up; }
  double n_dn() const noexcept { return counts_.dn; }
  double imbalance() const noexcept { return counts_.up - counts_.dn; }
  double magnetization() const noexcept;  // sum of spins

  void set_t(long t) noexcept { t_ = t; }
  /// Replaces all spins and recounts.
  void assign(std::vector<double> spins);
  /// Changes one spin and updates the cached fractions incrementally.
  void set_spin(std::size_t i, double value) noexcept;

 private:
  std::vector<double> spins_;
  long t_ = 0;
  SideCounts counts_;
  long up_ = 0;
  long dn_ = 0;
};

/// Energy of agent i if it took `value`, against the neighbor spins and
/// buyer/seller imbalance stored in `snapshot`:
///   value * (-J * sum_nbrs) + a * global_scale * value * (n_up - n_dn) - H * value
double agent_energy(const MarketState& snapshot, std::size_t i, double value,
                    const NeighborGraph& graph, const ModelParams& params, double H);

/// Sum of agent energies with the pairwise J term counted once per edge.
double total_energy(const MarketState& state, const NeighborGraph& graph,
                    const ModelParams& params, double H);

/// P = a * (n_up - n_dn) + A
double price(double n_up, double n_dn, double a, double A) noexcept;

/// R = (P_t - P_prev) / P_prev. Throws Error when P_prev == 0.
double gross_return(double P_t, double P_prev);

}  // namespace spinmarket
