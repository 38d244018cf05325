#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "spinmarket/lattice.hpp"
#include "spinmarket/market_model.hpp"

namespace spinmarket {

// Metropolis time evolution.
//
// snapshot: every agent in sweep t reads neighbor spins and the buyer/seller
//   imbalance frozen at the end of sweep t-1. This is the market model's
//   native semantics.
// in_place: updates are visible immediately and the imbalance is maintained
//   incrementally, giving an ordinary sequential Metropolis chain (used to
//   check sampling against exact Gibbs weights).
enum class UpdateMode { snapshot, in_place };

struct InitFractions {
  double up = 0.0;  // fraction of buyers
  double dn = 0.0;  // fraction of sellers
};

struct RunConfig {
  std::shared_ptr<const NeighborGraph> graph;
  ModelParams params;
  long n_sweeps = 0;
  InitFractions init;
  std::uint64_t seed = 0;
  UpdateMode mode = UpdateMode::snapshot;

  void validate() const;
};

struct TimeSeriesRow {
  long t = 0;
  double E = 0;  // total energy
  double M = 0;  // sum of spins
  double n_up = 0;
  double n_dn = 0;
  double P = 0;
  double R = 0;  // 0 on row 0; NaN if the previous price was exactly zero
  double H = 0;  // field in force during the sweep that produced the row
};

struct TimeSeries {
  std::size_t n_sites = 0;
  std::vector<TimeSeriesRow> rows;

  std::size_t size() const noexcept { return rows.size(); }
  std::vector<double> prices() const;
  std::vector<double> returns() const;
};

/// Places exactly round(f_up*N) buyers and round(f_dn*N) sellers at random
/// sites. Buyers (sellers) are spread uniformly over the positive (negative)
/// states. Remaining agents are 0 (discrete) or uniform in [-0.05, 0.05]
/// (continuous).
MarketState init_state(const RunConfig& config);

/// Field of the segment with t_start <= t < t_end, else 0.
double field_at(const FieldSchedule& schedule, long t) noexcept;

/// One Metropolis sweep turning state t into state t+1. Every site proposes a
/// value drawn uniformly from the spin space and accepts with probability
/// min(1, exp(-dE/T)). Random draws for site i in sweep t come from
/// Rng::for_site(stream, t, i). In snapshot mode the result is therefore
/// independent of `visit_order`. An empty order means index order.
void metropolis_sweep(MarketState& state, const NeighborGraph& graph, const ModelParams& params,
                      double H, std::uint64_t stream, UpdateMode mode,
                      std::span<const std::size_t> visit_order = {});

/// Initial state plus n_sweeps sweeps, one observable row per state.
TimeSeries run_market(const RunConfig& config);

}  // namespace spinmarket
