#pragma once

#include <iosfwd>
#include <span>

#include "spinmarket/dynamics.hpp"
#include "spinmarket/meanfield.hpp"
#include "spinmarket/observables.hpp"

namespace spinmarket {

// CSV writers. Reals use 12 significant digits, NaN is written as `nan`.

/// t,E,M,n_up,n_dn,P,R,H
void write_timeseries_csv(std::ostream& out, const TimeSeries& series);

/// T,E,Cv,M,chi
void write_scan_csv(std::ostream& out, std::span<const ThermalStats> scan);

struct PersistenceRow {
  double H = 0;
  double T = 0;
  PersistenceReport report;
};

/// H,T,baseline,during,after,retention,persistent (retention empty when the
/// shift stayed under the noise floor)
void write_persistence_csv(std::ostream& out, std::span<const PersistenceRow> rows);

/// H,votes,replicas,persistent
void write_hc_csv(std::ostream& out, std::span<const HcProbe> probes);

/// t,s1,s2,P
void write_trajectory_csv(std::ostream& out, const MeanFieldTrajectory& traj);

/// T,regime,period,amplitude
void write_regime_scan_csv(std::ostream& out, std::span<const RegimeScanRow> rows);

}  // namespace spinmarket
