#include "spinmarket/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>

#include "spinmarket/parallel.hpp"

namespace spinmarket {

namespace {

constexpr double kSeriesCutoff = 1e-4;

double range_of(const std::vector<double>& x, std::size_t from, std::size_t to) {
  const auto [lo, hi] = std::minmax_element(x.begin() + static_cast<long>(from), x.begin() + static_cast<long>(to));
  return *hi - *lo;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Regimes as an ordered category: 0 ordered, 1 in between, 2 clearing.
int rank_at(const MeanFieldParams& p, double T, const RegimeOptions& opts, std::string* name = nullptr) {
  try {
    const Regime r = regime_at(p, T, opts).regime;
    if (name) *name = regime_name(r);
    return r == Regime::ordered ? 0 : r == Regime::clearing ? 2 : 1;
  } catch (const TransientError&) {
    if (name) *name = "transient";
    return 1;
  }
}

}  // namespace

double brillouin(double u, int M) {
  if (M < 1) throw Error("brillouin: M must be >= 1");
  const double m = M;
  const double c = m + 0.5;
  if (std::abs(u) < kSeriesCutoff) {
    return u * m * (m + 1) / 3.0 - u * u * u * (c * c * c * c - 1.0 / 16.0) / 45.0;
  }
  const double x = std::abs(u);
  const double b = c / std::tanh(c * x) - 0.5 / std::tanh(0.5 * x);
  return std::copysign(b, u);
}

void MeanFieldParams::validate() const {
  if (!(T > 0) || !std::isfinite(T)) throw Error("mean field: T must be > 0");
  if (M1 < 1 || M2 < 1) throw Error("mean field: M1 and M2 must be >= 1");
  for (double v : {J1, J2, K12, K21, a, s1_0, s2_0, price_scale, clearing_price})
    if (!std::isfinite(v)) throw Error("mean field: parameters must be finite");
  if (std::abs(s1_0) > M1 || std::abs(s2_0) > M2)
    throw Error("mean field: initial averages need |s1_0| <= M1 and |s2_0| <= M2");
}

std::array<double, 2> mf_fields(double s1, double s2, const MeanFieldParams& p) {
  const double beta = 1.0 / p.T;
  const double ga = p.a_over_T ? p.a * beta : p.a;
  const double global = ga * (s1 - s2);
  return {p.J1 * beta * s1 + p.K12 * beta * s2 - global, p.J2 * beta * s2 + p.K21 * beta * s1 - global};
}

std::array<double, 2> mf_step(double s1, double s2, const MeanFieldParams& p) {
  const auto [u1, u2] = mf_fields(s1, s2, p);
  return {brillouin(u1, p.M1), brillouin(u2, p.M2)};
}

double mf_price(double s1, double s2, double a_p, double A) noexcept { return A + a_p * 0.5 * (s1 + s2); }

MeanFieldTrajectory mf_run(const MeanFieldParams& p, long steps) {
  p.validate();
  if (steps < 1) throw Error("mf_run: steps must be >= 1");
  MeanFieldTrajectory traj;
  traj.rows.reserve(static_cast<std::size_t>(steps) + 1);
  double s1 = p.s1_0, s2 = p.s2_0;
  traj.rows.push_back({0, s1, s2, mf_price(s1, s2, p.price_scale, p.clearing_price)});
  for (long t = 1; t <= steps; ++t) {
    const auto next = mf_step(s1, s2, p);
    s1 = next[0];
    s2 = next[1];
    traj.rows.push_back({t, s1, s2, mf_price(s1, s2, p.price_scale, p.clearing_price)});
  }
  return traj;
}

const char* regime_name(Regime r) noexcept {
  switch (r) {
    case Regime::ordered: return "ordered";
    case Regime::oscillating: return "oscillating";
    case Regime::clearing: return "clearing";
  }
  return "?";
}

RegimeReport classify_regime(const MeanFieldTrajectory& traj, long tail, double tol) {
  const auto len = static_cast<long>(traj.rows.size());
  if (tail < 8 || tail >= len) throw Error("classify_regime: need 8 <= tail < trajectory length");
  if (!(tol > 0)) throw Error("classify_regime: tol must be > 0");

  std::vector<double> s1, s2;
  for (long k = len - tail; k < len; ++k) {
    s1.push_back(traj.rows[static_cast<std::size_t>(k)].s1);
    s2.push_back(traj.rows[static_cast<std::size_t>(k)].s2);
  }
  const std::size_t n = s1.size();

  RegimeReport rep;
  rep.s1 = s1.back();
  rep.s2 = s2.back();
  rep.amplitude = std::max(range_of(s1, 0, n), range_of(s2, 0, n));

  double peak = 0, step = 0;
  for (std::size_t k = 0; k < n; ++k) {
    peak = std::max({peak, std::abs(s1[k]), std::abs(s2[k])});
    if (k > 0) step = std::max({step, std::abs(s1[k] - s1[k - 1]), std::abs(s2[k] - s2[k - 1])});
  }
  if (peak < tol) {
    rep.regime = Regime::clearing;
    return rep;
  }
  if (step < tol && rep.amplitude < tol) {
    rep.regime = Regime::ordered;
    return rep;
  }

  const std::size_t q = n / 4;
  const auto quarter_range = [&](std::size_t from, std::size_t to) {
    return std::max(range_of(s1, from, to), range_of(s2, from, to));
  };
  const double last = quarter_range(n - q, n);
  const double before = quarter_range(n - 2 * q, n - q);

  double mean = 0;
  for (double v : s1) mean += v;
  mean /= static_cast<double>(n);
  std::vector<std::size_t> crossings;
  for (std::size_t k = 1; k < n; ++k)
    if ((s1[k - 1] - mean < 0) != (s1[k] - mean < 0)) crossings.push_back(k);

  if (rep.amplitude > tol && last >= 0.9 * before && crossings.size() >= 2) {
    rep.regime = Regime::oscillating;
    const double spacing = static_cast<double>(crossings.back() - crossings.front()) /
                           static_cast<double>(crossings.size() - 1);
    rep.period = 2.0 * spacing;
    return rep;
  }
  throw TransientError("transient - lengthen run (tail amplitude " + fmt(rep.amplitude) +
                       ", last/previous quarter range " + fmt(last) + "/" + fmt(before) + ", " +
                       std::to_string(crossings.size()) + " mean crossings)");
}

RegimeReport regime_at(MeanFieldParams p, double T, const RegimeOptions& opts) {
  p.T = T;
  return classify_regime(mf_run(p, opts.steps), opts.tail, opts.tol);
}

std::vector<RegimeScanRow> regime_scan(const MeanFieldParams& p, const std::vector<double>& T_grid,
                                       const RegimeOptions& opts, unsigned threads) {
  std::vector<RegimeScanRow> rows(T_grid.size());
  parallel_for(T_grid.size(), threads, [&](std::size_t k) {
    RegimeScanRow& row = rows[k];
    row.T = T_grid[k];
    try {
      const RegimeReport rep = regime_at(p, T_grid[k], opts);
      row.regime = regime_name(rep.regime);
      row.period = rep.period;
      row.amplitude = rep.amplitude;
    } catch (const TransientError&) {
      row.regime = "transient";
      row.period = std::numeric_limits<double>::quiet_NaN();
      row.amplitude = std::numeric_limits<double>::quiet_NaN();
    }
  });
  return rows;
}

RegimeBoundaries regime_boundaries(const MeanFieldParams& p, double T_lo, double T_hi, double tol,
                                   const RegimeOptions& opts) {
  p.validate();
  if (!(T_lo > 0) || !(T_lo < T_hi) || !(tol > 0))
    throw Error("regime_boundaries: need 0 < T_lo < T_hi and tol > 0");
  const int n = std::max(opts.grid, 2);

  std::vector<double> grid;
  std::vector<int> rank;
  std::string seen;
  bool monotone = true;
  for (int k = 0; k < n; ++k) {
    const double T = T_lo + (T_hi - T_lo) * k / (n - 1);
    std::string name;
    grid.push_back(T);
    rank.push_back(rank_at(p, T, opts, &name));
    if (k > 0 && rank[k] < rank[k - 1]) monotone = false;
    seen += (k ? ", " : "") + fmt(T) + ":" + name;
  }
  if (rank.front() != 0 || rank.back() != 2 || !monotone)
    throw Error("regime_boundaries: expected ordered -> oscillating -> clearing over [" + fmt(T_lo) +
                ", " + fmt(T_hi) + "], observed " + seen);

  // Bisect the first grid interval where rank crosses `level`.
  const auto boundary = [&](int level) {
    std::size_t k = 0;
    while (rank[k + 1] < level) ++k;
    double lo = grid[k], hi = grid[k + 1];
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      (rank_at(p, mid, opts) >= level ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
  };
  return {boundary(1), boundary(2)};
}

std::array<std::array<double, 2>, 2> origin_jacobian(const MeanFieldParams& p) {
  p.validate();
  const double beta = 1.0 / p.T;
  const double ga = p.a_over_T ? p.a * beta : p.a;
  const double g1 = p.M1 * (p.M1 + 1) / 3.0;
  const double g2 = p.M2 * (p.M2 + 1) / 3.0;
  return {{{g1 * (p.J1 * beta - ga), g1 * (p.K12 * beta + ga)},
           {g2 * (p.K21 * beta - ga), g2 * (p.J2 * beta + ga)}}};
}

double origin_spectral_radius(const MeanFieldParams& p) {
  const auto m = origin_jacobian(p);
  const double tr = m[0][0] + m[1][1];
  const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  const double disc = tr * tr / 4 - det;
  if (disc < 0) return std::sqrt(det);
  const double r = std::sqrt(disc);
  return std::max(std::abs(tr / 2 + r), std::abs(tr / 2 - r));
}

}  // namespace spinmarket
