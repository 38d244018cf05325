#include "spinmarket/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "spinmarket/error.hpp"
#include "spinmarket/random.hpp"

namespace spinmarket {

namespace {

double propose(const SpinSpace& space, Rng& rng) {
  if (space.is_discrete()) {
    const int S = space.amplitude();
    return static_cast<double>(static_cast<long>(rng.below(2 * S + 1)) - S);
  }
  return 2.0 * rng.uniform() - 1.0;
}

bool accept(double dE, double beta, Rng& rng) {
  return dE <= 0 || rng.uniform() < std::exp(-dE * beta);
}

}  // namespace

void RunConfig::validate() const {
  if (!graph) throw Error("run config has no interaction graph");
  params.validate();
  if (n_sweeps < 0) throw Error("n_sweeps must be >= 0");
  if (!(init.up >= 0 && init.dn >= 0 && init.up + init.dn <= 1 + 1e-12))
    throw Error("initial fractions need f_up, f_dn >= 0 and f_up + f_dn <= 1");
}

std::vector<double> TimeSeries::prices() const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.P);
  return out;
}

std::vector<double> TimeSeries::returns() const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.R);
  return out;
}

MarketState init_state(const RunConfig& config) {
  config.validate();
  const std::size_t n = config.graph->size();
  const auto n_up = static_cast<std::size_t>(std::llround(config.init.up * static_cast<double>(n)));
  const auto n_dn = std::min(n - std::min(n, n_up),
                             static_cast<std::size_t>(std::llround(config.init.dn * static_cast<double>(n))));

  Rng rng(derive_seed(config.seed, "init"));
  std::vector<std::size_t> sites(n);
  std::iota(sites.begin(), sites.end(), std::size_t{0});
  for (std::size_t k = n; k > 1; --k) std::swap(sites[k - 1], sites[rng.below(k)]);

  const SpinSpace& space = config.params.spin;
  const auto draw_positive = [&]() -> double {
    if (space.is_discrete()) return static_cast<double>(1 + rng.below(space.amplitude()));
    return 1.0 - rng.uniform();  // (0, 1]
  };
  std::vector<double> spins(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double& s = spins[sites[k]];
    if (k < n_up)
      s = draw_positive();
    else if (k < n_up + n_dn)
      s = -draw_positive();
    else if (!space.is_discrete())
      s = 0.1 * rng.uniform() - 0.05;
  }
  return MarketState(std::move(spins), 0);
}

double field_at(const FieldSchedule& schedule, long t) noexcept {
  for (const auto& seg : schedule.segments())
    if (seg.t_start <= t && t < seg.t_end) return seg.H;
  return 0.0;
}

void metropolis_sweep(MarketState& state, const NeighborGraph& graph, const ModelParams& params,
                      double H, std::uint64_t stream, UpdateMode mode,
                      std::span<const std::size_t> visit_order) {
  const std::size_t n = state.size();
  const auto sweep = static_cast<std::uint64_t>(state.t());
  const double beta = 1.0 / params.T;
  const double global = params.a * params.global_scale;
  const double J = params.J;

  const auto visit = [&](auto&& update) {
    if (visit_order.empty()) {
      for (std::size_t i = 0; i < n; ++i) update(i);
    } else {
      for (std::size_t i : visit_order) update(i);
    }
  };

  if (mode == UpdateMode::snapshot) {
    const std::vector<double> frozen(state.spins().begin(), state.spins().end());
    const double external = global * state.imbalance() - H;
    std::vector<double> next = frozen;
    visit([&](std::size_t i) {
      Rng rng = Rng::for_site(stream, sweep, i);
      double local = 0;
      for (int j : graph.neighbors(i)) local += frozen[static_cast<std::size_t>(j)];
      const double candidate = propose(params.spin, rng);
      const double dE = (candidate - frozen[i]) * (external - J * local);
      if (accept(dE, beta, rng)) next[i] = candidate;
    });
    state.assign(std::move(next));
  } else {
    visit([&](std::size_t i) {
      Rng rng = Rng::for_site(stream, sweep, i);
      double local = 0;
      for (int j : graph.neighbors(i)) local += state.spin(static_cast<std::size_t>(j));
      const double candidate = propose(params.spin, rng);
      const double dE = (candidate - state.spin(i)) * (global * state.imbalance() - H - J * local);
      if (accept(dE, beta, rng)) state.set_spin(i, candidate);
    });
  }
  state.set_t(state.t() + 1);
}

TimeSeries run_market(const RunConfig& config) {
  MarketState state = init_state(config);
  const NeighborGraph& graph = *config.graph;
  const ModelParams& params = config.params;
  const std::uint64_t stream = derive_seed(config.seed, "sweep");

  TimeSeries series;
  series.n_sites = graph.size();
  series.rows.reserve(static_cast<std::size_t>(config.n_sweeps) + 1);

  const auto record = [&](double H) {
    TimeSeriesRow row;
    row.t = state.t();
    row.H = H;
    row.E = total_energy(state, graph, params, H);
    row.M = state.magnetization();
    row.n_up = state.n_up();
    row.n_dn = state.n_dn();
    row.P = price(row.n_up, row.n_dn, params.a, params.A);
    if (!series.rows.empty()) {
      const double prev = series.rows.back().P;
      row.R = prev == 0 ? std::numeric_limits<double>::quiet_NaN() : gross_return(row.P, prev);
    }
    series.rows.push_back(row);
  };

  record(field_at(params.schedule, 0));
  for (long t = 1; t <= config.n_sweeps; ++t) {
    const double H = field_at(params.schedule, t);
    metropolis_sweep(state, graph, params, H, stream, config.mode);
    record(H);
  }
  return series;
}

}  // namespace spinmarket
