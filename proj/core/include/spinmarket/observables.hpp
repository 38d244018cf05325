#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "spinmarket/dynamics.hpp"

namespace spinmarket {

/// Per-agent thermal averages at one temperature (k_B = 1).
struct ThermalStats {
  double T = 0;
  double e_mean = 0;  // <E>/N
  double c_v = 0;     // (<E^2> - <E>^2) / (N T^2)
  double m_mean = 0;  // <M>/N
  double chi = 0;     // N (<m^2> - <m>^2) / T, m = M/N
};

/// Moments over rows with t >= discard.
ThermalStats thermal_stats(const TimeSeries& series, long discard, double T);

/// One fresh run per temperature (seed derived per grid index), each run
/// discard + measure sweeps long and reduced by thermal_stats.
std::vector<ThermalStats> temperature_scan(const RunConfig& base, std::span<const double> T_grid,
                                           long discard, long measure, unsigned threads = 1);

struct TcEstimate {
  double T_c = 0;
  double uncertainty = 0;  // grid spacing around the peak
};

/// Susceptibility peak refined by a parabola through the maximum and its two
/// neighbors. Throws when the maximum sits on the grid boundary.
TcEstimate estimate_tc(std::span<const ThermalStats> scan);

/// Normalized autocorrelation C(0..max_lag) with the 1/n lag estimator.
std::vector<double> autocorrelation(std::span<const double> x, std::size_t max_lag);

/// Integrated autocorrelation time 1/2 + sum C(tau), summed up to the first
/// window W with W >= 5 * tau(W) (Sokal's automatic windowing). Returns 0.5 for
/// constant or very short series.
double integrated_autocorrelation_time(std::span<const double> x);

/// Population standard deviation over each sliding window of `window` returns.
std::vector<double> rolling_volatility(std::span<const double> returns, std::size_t window);

struct PersistenceCriteria {
  double retention_threshold = 0.5;
  double noise_factor = 3.0;  // noise floor = factor * standard error of the baseline mean
};

struct PersistenceReport {
  double baseline = 0;  // mean price over [t1 - horizon, t1)
  double during = 0;    // mean price over [t1, t2)
  double after = 0;     // mean price over [t2, t2 + horizon)
  double field = 0;     // mean H over [t1, t2)
  double noise_floor = 0;
  std::optional<double> retention;  // (after - baseline) / (during - baseline), only above the floor
  bool persistent = false;
};

/// Decides whether the price shift produced by a field pulse on [t1, t2)
/// survives its removal. A pulse counts as persistent when the shift during the
/// pulse follows the sign of the field, exceeds the noise floor, and at least
/// `retention_threshold` of it remains over the following `horizon` sweeps.
PersistenceReport persistence_score(const TimeSeries& series, long t1, long t2, long horizon,
                                    const PersistenceCriteria& criteria = {});

struct PulseProtocol {
  long t1 = 400;
  long t2 = 600;
  long horizon = 200;
  PersistenceCriteria criteria;
};

struct HcProbe {
  double H = 0;
  int votes = 0;  // replicas judged persistent
  int replicas = 0;
  bool persistent = false;  // strict majority
  std::vector<PersistenceReport> reports;
};

struct HcBracket {
  double lo = 0;  // largest probed H judged not persistent
  double hi = 0;  // smallest probed H judged persistent
  std::vector<HcProbe> probes;  // in evaluation order
};

/// Run config of replica k in a pulse experiment: field H on [t1, t2) at
/// temperature T, long enough to cover the after window.
RunConfig pulse_run_config(const RunConfig& base, double T, double H, const PulseProtocol& pulse,
                           std::size_t replica);

/// Single pulse of strength H with the replica seeds used by find_critical_h.
HcProbe probe_persistence(const RunConfig& base, double T, double H, int n_seeds,
                          const PulseProtocol& pulse, unsigned threads = 1);

/// Bisects the critical pulse strength between h_lo (not persistent) and h_hi
/// (persistent). Every probe runs the same n_seeds replica seeds and takes the
/// majority verdict. Stops once hi - lo <= tol.
HcBracket find_critical_h(const RunConfig& base, double T, double h_lo, double h_hi, int n_seeds,
                          double tol, const PulseProtocol& pulse, unsigned threads = 1);

}  // namespace spinmarket
