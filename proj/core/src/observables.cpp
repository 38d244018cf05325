#include "spinmarket/observables.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spinmarket/error.hpp"
#include "spinmarket/parallel.hpp"
#include "spinmarket/random.hpp"

namespace spinmarket {

namespace {

struct Moments {
  double mean = 0;
  double var = 0;  // population variance, two-pass so it is never negative
};

template <class Get>
Moments moments(std::span<const TimeSeriesRow> rows, Get get) {
  Moments m;
  for (const auto& r : rows) m.mean += get(r);
  m.mean /= static_cast<double>(rows.size());
  for (const auto& r : rows) {
    const double d = get(r) - m.mean;
    m.var += d * d;
  }
  m.var /= static_cast<double>(rows.size());
  return m;
}

double mean_of(std::span<const double> x) {
  double s = 0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

}  // namespace

ThermalStats thermal_stats(const TimeSeries& series, long discard, double T) {
  if (!(T > 0)) throw Error("thermal_stats: T must be > 0");
  if (series.n_sites == 0) throw Error("thermal_stats: series has no sites");
  const auto first = std::find_if(series.rows.begin(), series.rows.end(),
                                  [&](const TimeSeriesRow& r) { return r.t >= discard; });
  if (first == series.rows.end())
    throw Error("thermal_stats: no rows left after discarding " + std::to_string(discard) + " sweeps");
  const std::span<const TimeSeriesRow> window(&*first, static_cast<std::size_t>(series.rows.end() - first));
  const auto n = static_cast<double>(series.n_sites);

  const Moments e = moments(window, [](const TimeSeriesRow& r) { return r.E; });
  const Moments m = moments(window, [n](const TimeSeriesRow& r) { return r.M / n; });
  return {T, e.mean / n, e.var / (n * T * T), m.mean, n * m.var / T};
}

std::vector<ThermalStats> temperature_scan(const RunConfig& base, std::span<const double> T_grid,
                                           long discard, long measure, unsigned threads) {
  if (T_grid.empty()) throw Error("temperature_scan: empty temperature grid");
  if (discard < 0 || measure < 1) throw Error("temperature_scan: need discard >= 0 and measure >= 1");
  std::vector<ThermalStats> out(T_grid.size());
  parallel_for(T_grid.size(), threads, [&](std::size_t k) {
    RunConfig cfg = base;
    cfg.params.T = T_grid[k];
    cfg.n_sweeps = discard + measure;
    cfg.seed = derive_seed(base.seed, "scan", k);
    out[k] = thermal_stats(run_market(cfg), discard, T_grid[k]);
  });
  return out;
}

TcEstimate estimate_tc(std::span<const ThermalStats> scan) {
  if (scan.size() < 3) throw Error("estimate_tc: need at least 3 temperatures");
  for (std::size_t k = 1; k < scan.size(); ++k)
    if (!(scan[k].T > scan[k - 1].T)) throw Error("estimate_tc: temperatures must be increasing");
  const auto peak = static_cast<std::size_t>(
      std::max_element(scan.begin(), scan.end(),
                       [](const ThermalStats& x, const ThermalStats& y) { return x.chi < y.chi; }) -
      scan.begin());
  if (peak == 0 || peak + 1 == scan.size())
    throw Error("estimate_tc: susceptibility peak at grid boundary T=" + std::to_string(scan[peak].T) +
                "; widen grid");

  const double x0 = scan[peak - 1].T, x1 = scan[peak].T, x2 = scan[peak + 1].T;
  const double y0 = scan[peak - 1].chi, y1 = scan[peak].chi, y2 = scan[peak + 1].chi;
  // Vertex of the parabola through the three points.
  const double num = (x1 - x0) * (x1 - x0) * (y1 - y2) - (x1 - x2) * (x1 - x2) * (y1 - y0);
  const double den = (x1 - x0) * (y1 - y2) - (x1 - x2) * (y1 - y0);
  double tc = den == 0 ? x1 : x1 - 0.5 * num / den;
  tc = std::clamp(tc, x0, x2);
  return {tc, 0.5 * (x2 - x0)};
}

std::vector<double> autocorrelation(std::span<const double> x, std::size_t max_lag) {
  if (x.size() <= max_lag) throw Error("autocorrelation: series must be longer than max_lag");
  const double mean = mean_of(x);
  const auto n = x.size();
  double c0 = 0;
  for (double v : x) c0 += (v - mean) * (v - mean);
  if (!(c0 > 0)) throw Error("autocorrelation: series has zero variance");
  std::vector<double> c(max_lag + 1);
  for (std::size_t lag = 0; lag <= max_lag; ++lag) {
    double s = 0;
    for (std::size_t t = 0; t + lag < n; ++t) s += (x[t] - mean) * (x[t + lag] - mean);
    c[lag] = s / c0;
  }
  c[0] = 1.0;
  return c;
}

double integrated_autocorrelation_time(std::span<const double> x) {
  if (x.size() < 4) return 0.5;
  const double mean = mean_of(x);
  double c0 = 0;
  for (double v : x) c0 += (v - mean) * (v - mean);
  if (!(c0 > 0)) return 0.5;
  const std::size_t n = x.size();
  double tau = 0.5;
  for (std::size_t w = 1; w < n; ++w) {
    double s = 0;
    for (std::size_t t = 0; t + w < n; ++t) s += (x[t] - mean) * (x[t + w] - mean);
    tau += s / c0;
    if (static_cast<double>(w) >= 5.0 * tau) break;
  }
  return std::max(tau, 0.5);
}

std::vector<double> rolling_volatility(std::span<const double> returns, std::size_t window) {
  if (window < 2) throw Error("rolling_volatility: window must be >= 2");
  if (returns.size() < window) throw Error("rolling_volatility: series shorter than window");
  std::vector<double> out;
  out.reserve(returns.size() - window + 1);
  for (std::size_t start = 0; start + window <= returns.size(); ++start) {
    const auto w = returns.subspan(start, window);
    const double mean = mean_of(w);
    double var = 0;
    for (double r : w) var += (r - mean) * (r - mean);
    out.push_back(std::sqrt(var / static_cast<double>(window)));
  }
  return out;
}

PersistenceReport persistence_score(const TimeSeries& series, long t1, long t2, long horizon,
                                    const PersistenceCriteria& criteria) {
  if (horizon < 2 || t1 >= t2 || t1 - horizon < 0)
    throw Error("persistence_score: need horizon >= 2, t1 < t2 and t1 >= horizon");
  if (series.rows.empty() || series.rows.front().t != 0 ||
      t2 + horizon > static_cast<long>(series.rows.size()))
    throw Error("persistence_score: windows extend past the end of the series");

  const auto prices = series.prices();
  const auto window = [&](long from, long to) {
    return std::span<const double>(prices).subspan(static_cast<std::size_t>(from),
                                                   static_cast<std::size_t>(to - from));
  };
  PersistenceReport rep;
  const auto base = window(t1 - horizon, t1);
  rep.baseline = mean_of(base);
  rep.during = mean_of(window(t1, t2));
  rep.after = mean_of(window(t2, t2 + horizon));
  for (long t = t1; t < t2; ++t) rep.field += series.rows[static_cast<std::size_t>(t)].H;
  rep.field /= static_cast<double>(t2 - t1);

  double var = 0;
  for (double p : base) var += (p - rep.baseline) * (p - rep.baseline);
  var /= static_cast<double>(base.size() - 1);
  const double tau = integrated_autocorrelation_time(base);
  const double std_error = std::sqrt(var * 2.0 * tau / static_cast<double>(base.size()));
  rep.noise_floor = criteria.noise_factor * std_error;

  const double shift = rep.during - rep.baseline;
  if (std::abs(shift) > rep.noise_floor && shift != 0) rep.retention = (rep.after - rep.baseline) / shift;
  const bool follows_field = rep.field != 0 && shift * rep.field > 0;
  rep.persistent = follows_field && rep.retention && *rep.retention >= criteria.retention_threshold;
  return rep;
}

RunConfig pulse_run_config(const RunConfig& base, double T, double H, const PulseProtocol& pulse,
                           std::size_t replica) {
  RunConfig cfg = base;
  cfg.params.T = T;
  cfg.params.schedule = FieldSchedule::pulse(pulse.t1, pulse.t2, H);
  cfg.n_sweeps = std::max(base.n_sweeps, pulse.t2 + pulse.horizon);
  cfg.seed = derive_seed(base.seed, "replica", replica);
  return cfg;
}

HcProbe probe_persistence(const RunConfig& base, double T, double H, int n_seeds,
                          const PulseProtocol& pulse, unsigned threads) {
  if (n_seeds < 1) throw Error("probe_persistence: need at least one replica");
  HcProbe probe;
  probe.H = H;
  probe.replicas = n_seeds;
  probe.reports.resize(static_cast<std::size_t>(n_seeds));
  parallel_for(probe.reports.size(), threads, [&](std::size_t k) {
    const RunConfig cfg = pulse_run_config(base, T, H, pulse, k);
    probe.reports[k] =
        persistence_score(run_market(cfg), pulse.t1, pulse.t2, pulse.horizon, pulse.criteria);
  });
  for (const auto& r : probe.reports) probe.votes += r.persistent;
  probe.persistent = 2 * probe.votes > probe.replicas;
  return probe;
}

HcBracket find_critical_h(const RunConfig& base, double T, double h_lo, double h_hi, int n_seeds,
                          double tol, const PulseProtocol& pulse, unsigned threads) {
  if (!(h_lo < h_hi) || !(tol > 0)) throw Error("find_critical_h: need h_lo < h_hi and tol > 0");
  HcBracket bracket{h_lo, h_hi, {}};
  bracket.probes.push_back(probe_persistence(base, T, h_lo, n_seeds, pulse, threads));
  bracket.probes.push_back(probe_persistence(base, T, h_hi, n_seeds, pulse, threads));
  const auto& lo = bracket.probes[0];
  const auto& hi = bracket.probes[1];
  if (lo.persistent || !hi.persistent)
    throw Error("find_critical_h: unordered bracket at T=" + std::to_string(T) + ": H=" +
                std::to_string(h_lo) + " persistent in " + std::to_string(lo.votes) + "/" +
                std::to_string(n_seeds) + ", H=" + std::to_string(h_hi) + " persistent in " +
                std::to_string(hi.votes) + "/" + std::to_string(n_seeds) +
                " (need lower end not persistent and upper end persistent)");
  while (bracket.hi - bracket.lo > tol) {
    const double mid = 0.5 * (bracket.lo + bracket.hi);
    bracket.probes.push_back(probe_persistence(base, T, mid, n_seeds, pulse, threads));
    (bracket.probes.back().persistent ? bracket.hi : bracket.lo) = mid;
  }
  return bracket;
}

}  // namespace spinmarket
