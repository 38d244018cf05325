#include "spinmarket/csv.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

namespace spinmarket {

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

void write_timeseries_csv(std::ostream& out, const TimeSeries& series) {
  out << "t,E,M,n_up,n_dn,P,R,H\n";
  for (const auto& r : series.rows)
    out << r.t << ',' << num(r.E) << ',' << num(r.M) << ',' << num(r.n_up) << ',' << num(r.n_dn) << ','
        << num(r.P) << ',' << num(r.R) << ',' << num(r.H) << '\n';
}

void write_scan_csv(std::ostream& out, std::span<const ThermalStats> scan) {
  out << "T,E,Cv,M,chi\n";
  for (const auto& s : scan)
    out << num(s.T) << ',' << num(s.e_mean) << ',' << num(s.c_v) << ',' << num(s.m_mean) << ','
        << num(s.chi) << '\n';
}

void write_persistence_csv(std::ostream& out, std::span<const PersistenceRow> rows) {
  out << "H,T,baseline,during,after,retention,persistent\n";
  for (const auto& row : rows) {
    const auto& r = row.report;
    out << num(row.H) << ',' << num(row.T) << ',' << num(r.baseline) << ',' << num(r.during) << ','
        << num(r.after) << ',' << (r.retention ? num(*r.retention) : "") << ','
        << (r.persistent ? "true" : "false") << '\n';
  }
}

void write_hc_csv(std::ostream& out, std::span<const HcProbe> probes) {
  out << "H,votes,replicas,persistent\n";
  for (const auto& p : probes)
    out << num(p.H) << ',' << p.votes << ',' << p.replicas << ',' << (p.persistent ? "true" : "false") << '\n';
}

void write_trajectory_csv(std::ostream& out, const MeanFieldTrajectory& traj) {
  out << "t,s1,s2,P\n";
  for (const auto& r : traj.rows) out << r.t << ',' << num(r.s1) << ',' << num(r.s2) << ',' << num(r.P) << '\n';
}

void write_regime_scan_csv(std::ostream& out, std::span<const RegimeScanRow> rows) {
  out << "T,regime,period,amplitude\n";
  for (const auto& r : rows)
    out << num(r.T) << ',' << r.regime << ',' << num(r.period) << ',' << num(r.amplitude) << '\n';
}

}  // namespace spinmarket
