#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "spinmarket/error.hpp"
#include "spinmarket/observables.hpp"

using namespace spinmarket;

namespace {

TimeSeries series_from(const std::vector<double>& E, const std::vector<double>& M, std::size_t n_sites) {
  TimeSeries ts;
  ts.n_sites = n_sites;
  for (std::size_t t = 0; t < E.size(); ++t) {
    TimeSeriesRow r;
    r.t = static_cast<long>(t);
    r.E = E[t];
    r.M = M[t];
    ts.rows.push_back(r);
  }
  return ts;
}

TimeSeries price_series(const std::vector<double>& P, long t1, long t2, double H) {
  TimeSeries ts;
  ts.n_sites = 1;
  for (std::size_t t = 0; t < P.size(); ++t) {
    TimeSeriesRow r;
    r.t = static_cast<long>(t);
    r.P = P[t];
    r.H = r.t >= t1 && r.t < t2 ? H : 0.0;
    ts.rows.push_back(r);
  }
  return ts;
}

// Baseline 3, then `during` on [400, 600), then `after`, plus small white noise.
std::vector<double> pulse_prices(double during, double after, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> noise(0, 0.01);
  std::vector<double> P(801);
  for (std::size_t t = 0; t < P.size(); ++t)
    P[t] = (t < 400 ? 3.0 : t < 600 ? during : after) + noise(gen);
  return P;
}

std::vector<double> ar1(double phi, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> z;
  std::vector<double> x(n);
  double v = 0;
  for (auto& e : x) e = v = phi * v + z(gen);
  return x;
}

RunConfig fcc_config(int L, double T, std::uint64_t seed) {
  RunConfig c;
  c.graph = std::make_shared<const NeighborGraph>(build_fcc(L));
  c.params.a = 3;
  c.params.global_scale = 1.0 / 144;
  c.params.T = T;
  c.init = {0.4, 0.6};
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("thermal stats of degenerate series") {
  const auto constant = series_from(std::vector<double>(10, -5.0), std::vector<double>(10, 4.0), 4);
  const auto s = thermal_stats(constant, 0, 2.0);
  CHECK(s.c_v == 0);
  CHECK(s.chi == 0);
  CHECK(s.m_mean == 1.0);
  CHECK(s.e_mean == -1.25);
  CHECK_THROWS_AS(thermal_stats(constant, 10, 1.0), Error);
  CHECK_THROWS_AS(thermal_stats(constant, 0, 0.0), Error);
}

TEST_CASE("thermal stats match direct moments and ignore row order") {
  std::mt19937_64 gen(4);
  std::normal_distribution<double> z;
  std::vector<double> E(200), M(200);
  for (std::size_t k = 0; k < E.size(); ++k) {
    E[k] = -100 + 5 * z(gen);
    M[k] = 30 + 2 * z(gen);
  }
  const double N = 50, T = 1.7;
  const auto s = thermal_stats(series_from(E, M, 50), 100, T);

  double e1 = 0, e2 = 0, m1 = 0, m2 = 0;
  for (std::size_t k = 100; k < 200; ++k) {
    e1 += E[k] / 100;
    e2 += E[k] * E[k] / 100;
    m1 += M[k] / N / 100;
    m2 += (M[k] / N) * (M[k] / N) / 100;
  }
  CHECK(s.e_mean == doctest::Approx(e1 / N));
  CHECK(s.c_v == doctest::Approx((e2 - e1 * e1) / (N * T * T)).epsilon(1e-9));
  CHECK(s.chi == doctest::Approx(N * (m2 - m1 * m1) / T).epsilon(1e-9));

  std::vector<double> E2(E.begin() + 100, E.end()), M2(M.begin() + 100, M.end());
  std::vector<std::size_t> idx(100);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::shuffle(idx.begin(), idx.end(), gen);
  std::vector<double> Es, Ms;
  for (auto k : idx) {
    Es.push_back(E2[k]);
    Ms.push_back(M2[k]);
  }
  const auto p = thermal_stats(series_from(Es, Ms, 50), 0, T);
  CHECK(p.c_v == doctest::Approx(s.c_v));
  CHECK(p.chi == doctest::Approx(s.chi));
  CHECK(p.c_v >= 0);
  CHECK(p.chi >= 0);
}

TEST_CASE("critical temperature from the susceptibility peak") {
  std::vector<ThermalStats> scan{{6, 0, 0, 0, 1}, {7, 0, 0, 0, 5}, {8, 0, 0, 0, 1}};
  auto tc = estimate_tc(scan);
  CHECK(tc.T_c == doctest::Approx(7.0));
  CHECK(tc.uncertainty == doctest::Approx(1.0));

  // parabola y = -(T - 6.3)^2 sampled on a unit grid peaks at 6.3
  std::vector<ThermalStats> skew;
  for (double T : {4.0, 5.0, 6.0, 7.0, 8.0}) skew.push_back({T, 0, 0, 0, 10 - (T - 6.3) * (T - 6.3)});
  CHECK(estimate_tc(skew).T_c == doctest::Approx(6.3));
  for (auto& s : skew) s.chi *= 42;
  CHECK(estimate_tc(skew).T_c == doctest::Approx(6.3));

  std::vector<ThermalStats> edge{{6, 0, 0, 0, 9}, {7, 0, 0, 0, 5}, {8, 0, 0, 0, 1}};
  CHECK_THROWS_WITH_AS(estimate_tc(edge), doctest::Contains("widen grid"), Error);
  CHECK_THROWS_AS(estimate_tc(std::span(scan).first(2)), Error);
}

TEST_CASE("temperature scan runs one chain per temperature") {
  auto base = fcc_config(3, 1, 5);
  const std::vector<double> one{6.0};
  const auto s = temperature_scan(base, one, 20, 20);
  REQUIRE(s.size() == 1);
  CHECK(s[0].T == 6.0);

  const std::vector<double> grid{5.0, 6.0, 7.0};
  const auto a = temperature_scan(base, grid, 20, 30, 1);
  const auto b = temperature_scan(base, grid, 20, 30, 3);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    CHECK(a[k].chi == b[k].chi);
    CHECK(a[k].e_mean == b[k].e_mean);
  }
  CHECK_THROWS_AS(temperature_scan(base, std::vector<double>{}, 1, 1), Error);
}

TEST_CASE("autocorrelation") {
  const auto noise = ar1(0.0, 20000, 1);
  const auto c = autocorrelation(noise, 20);
  CHECK(c[0] == 1.0);
  for (std::size_t k = 1; k < c.size(); ++k) CHECK(std::abs(c[k]) < 4 / std::sqrt(20000.0));

  const auto slow = ar1(0.9, 20000, 2);
  const auto cs = autocorrelation(slow, 50);
  for (double v : cs) CHECK(std::abs(v) <= 1 + 1e-12);
  CHECK(cs[1] == doctest::Approx(0.9).epsilon(0.03));

  CHECK_THROWS_AS(autocorrelation(std::vector<double>(10, 1.0), 3), Error);
  CHECK_THROWS_AS(autocorrelation(noise, noise.size()), Error);
}

TEST_CASE("integrated autocorrelation time of AR(1) series") {
  // tau_int = (1 + phi) / (2 (1 - phi))
  CHECK(integrated_autocorrelation_time(ar1(0.0, 50000, 3)) == doctest::Approx(0.5).epsilon(0.1));
  CHECK(integrated_autocorrelation_time(ar1(0.8, 200000, 4)) == doctest::Approx(4.5).epsilon(0.1));
  CHECK(integrated_autocorrelation_time(std::vector<double>(100, 2.0)) == 0.5);
}

TEST_CASE("rolling volatility") {
  const std::vector<double> flat(50, 0.0);
  for (double v : rolling_volatility(flat, 10)) CHECK(v == 0);

  const std::vector<double> r{0.1, -0.2, 0.05, 0.3, -0.1};
  const auto whole = rolling_volatility(r, r.size());
  REQUIRE(whole.size() == 1);
  const double mean = 0.03;
  double var = 0;
  for (double v : r) var += (v - mean) * (v - mean) / 5;
  CHECK(whole[0] == doctest::Approx(std::sqrt(var)));
  CHECK(rolling_volatility(r, 2).size() == 4);
  CHECK_THROWS_AS(rolling_volatility(r, 1), Error);
  CHECK_THROWS_AS(rolling_volatility(r, 6), Error);
}

TEST_CASE("persistence of synthetic price paths") {
  const auto kept = persistence_score(price_series(pulse_prices(3.5, 3.4, 1), 400, 600, 0.2), 400, 600, 200);
  CHECK(kept.baseline == doctest::Approx(3.0).epsilon(0.01));
  CHECK(kept.during == doctest::Approx(3.5).epsilon(0.01));
  CHECK(kept.field == doctest::Approx(0.2));
  REQUIRE(kept.retention);
  CHECK(*kept.retention == doctest::Approx(0.8).epsilon(0.02));
  CHECK(kept.persistent);

  const auto lost = persistence_score(price_series(pulse_prices(3.5, 3.0, 2), 400, 600, 0.2), 400, 600, 200);
  REQUIRE(lost.retention);
  CHECK(*lost.retention < 0.1);
  CHECK_FALSE(lost.persistent);

  // no visible response: retention undefined
  const auto flat = persistence_score(price_series(pulse_prices(3.0, 3.0, 3), 400, 600, 0.2), 400, 600, 200);
  CHECK_FALSE(flat.retention);
  CHECK_FALSE(flat.persistent);

  // a shift against the field, or with no field at all, is not a boost
  const auto against = persistence_score(price_series(pulse_prices(3.5, 3.5, 4), 400, 600, -0.2), 400, 600, 200);
  CHECK_FALSE(against.persistent);
  const auto null = persistence_score(price_series(pulse_prices(3.5, 3.5, 5), 400, 600, 0.0), 400, 600, 200);
  CHECK_FALSE(null.persistent);

  const auto ts = price_series(pulse_prices(3.5, 3.4, 6), 400, 600, 0.2);
  CHECK_THROWS_AS(persistence_score(ts, 400, 600, 300), Error);
  CHECK_THROWS_AS(persistence_score(ts, 100, 600, 200), Error);
  CHECK_THROWS_AS(persistence_score(ts, 600, 400, 100), Error);
}

TEST_CASE("null pulses never count as persistent") {
  const auto base = fcc_config(6, 1, 9);
  PulseProtocol pulse;
  for (double T : {4.0, 6.0, 6.7, 8.0}) {
    const auto probe = probe_persistence(base, T, 0.0, 3, pulse);
    CHECK(probe.votes == 0);
  }
}

TEST_CASE("critical field search rejects an unordered bracket") {
  const auto base = fcc_config(4, 1, 9);
  PulseProtocol pulse;
  CHECK_THROWS_WITH_AS(find_critical_h(base, 30.0, 0.01, 0.05, 3, 0.01, pulse), doctest::Contains("unordered"), Error);
  CHECK_THROWS_AS(find_critical_h(base, 6.0, 0.05, 0.01, 3, 0.01, pulse), Error);
}

TEST_CASE("critical field search narrows to the tolerance") {
  // A tiny lattice deep in the ordered phase: a strong pulse flips it for good,
  // a negligible one does not.
  const auto base = fcc_config(3, 4.0, 12);
  PulseProtocol pulse;
  const auto b = find_critical_h(base, 4.0, 1e-4, 20.0, 3, 0.5, pulse);
  CHECK(b.hi - b.lo <= 0.5);
  CHECK_FALSE(b.probes[0].persistent);
  CHECK(b.probes[1].persistent);
  for (const auto& p : b.probes) {
    if (p.H <= b.lo) CHECK_FALSE(p.persistent);
    if (p.H >= b.hi) CHECK(p.persistent);
  }
}

TEST_CASE("magnetization decorrelates more slowly near the critical temperature") {
  auto c = fcc_config(12, 6.6, 33);
  c.n_sweeps = 3000;
  const auto near = run_market(c);
  c.params.T = 0.8 * 6.6;
  const auto far = run_market(c);
  const auto tail_M = [](const TimeSeries& ts) {
    std::vector<double> m;
    for (std::size_t t = 1000; t < ts.rows.size(); ++t) m.push_back(ts.rows[t].M);
    return m;
  };
  CHECK(integrated_autocorrelation_time(tail_M(near)) > 2 * integrated_autocorrelation_time(tail_M(far)));
}
