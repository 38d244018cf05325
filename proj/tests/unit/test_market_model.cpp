#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "spinmarket/error.hpp"
#include "spinmarket/market_model.hpp"

using namespace spinmarket;

namespace {

NeighborGraph star(int leaves) {
  std::vector<std::pair<int, int>> edges;
  for (int k = 1; k <= leaves; ++k) edges.emplace_back(0, k);
  return build_custom(edges, leaves + 1);
}

// Pair sum over an explicit edge list plus the per-agent terms.
double brute_energy(const std::vector<double>& s, const std::vector<std::pair<int, int>>& edges,
                    const ModelParams& p, double H) {
  const auto sides = count_sides(s);
  double e = 0;
  for (auto [i, j] : edges) e -= p.J * s[static_cast<std::size_t>(i)] * s[static_cast<std::size_t>(j)];
  for (double v : s) e += p.a * p.global_scale * v * (sides.up - sides.dn) - H * v;
  return e;
}

}  // namespace

TEST_CASE("spin spaces") {
  const auto three = SpinSpace::discrete(1);
  CHECK(three.contains(-1));
  CHECK(three.contains(0));
  CHECK(three.contains(1));
  CHECK_FALSE(three.contains(2));
  CHECK_FALSE(three.contains(0.5));
  CHECK(SpinSpace::discrete(2).contains(-2));
  CHECK(SpinSpace::continuous().contains(-0.37));
  CHECK_FALSE(SpinSpace::continuous().contains(1.01));
  CHECK_THROWS_AS(SpinSpace::discrete(0), Error);
}

TEST_CASE("field schedules are sorted and non-overlapping") {
  const FieldSchedule s({{700, 800, -0.1}, {400, 600, 0.2}});
  REQUIRE(s.segments().size() == 2);
  CHECK(s.segments()[0].t_start == 400);
  CHECK_NOTHROW(FieldSchedule({{0, 10, 1}, {10, 20, 2}}));
  CHECK_THROWS_AS(FieldSchedule({{0, 10, 1}, {9, 20, 2}}), Error);
  CHECK_THROWS_AS(FieldSchedule({{5, 5, 1}}), Error);
  CHECK_THROWS_AS(FieldSchedule({{0, 5, NAN}}), Error);
}

TEST_CASE("model parameter validation") {
  ModelParams p;
  CHECK_NOTHROW(p.validate());
  p.T = 0;
  CHECK_THROWS_AS(p.validate(), Error);
  p.T = 1;
  p.a = -0.1;
  CHECK_THROWS_AS(p.validate(), Error);
  p.a = 0;
  p.global_scale = -1;
  CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("count_sides uses sign counting") {
  const std::vector<double> three{1, -1, 0, 1};
  CHECK(count_sides(three).up == doctest::Approx(0.5));
  CHECK(count_sides(three).dn == doctest::Approx(0.25));
  const std::vector<double> five{2, 1, -2, 0};
  CHECK(count_sides(five).up == doctest::Approx(0.5));
  CHECK(count_sides(five).dn == doctest::Approx(0.25));
  const std::vector<double> cont{0.3, -0.7};
  CHECK(count_sides(cont).up == doctest::Approx(0.5));
  CHECK(count_sides(cont).dn == doctest::Approx(0.5));
}

TEST_CASE("market state keeps counts consistent under single-spin updates") {
  MarketState st({1, 0, -1, -1});
  CHECK(st.n_up() == 0.25);
  CHECK(st.n_dn() == 0.5);
  st.set_spin(1, -1);
  st.set_spin(2, 1);
  st.set_spin(0, 0);
  const auto fresh = count_sides(st.spins());
  CHECK(st.n_up() == fresh.up);
  CHECK(st.n_dn() == fresh.dn);
  CHECK(st.magnetization() == -1);
}

TEST_CASE("agent energy examples") {
  const auto g = star(12);
  ModelParams p;
  p.a = 0;
  std::vector<double> spins(13, 1.0);
  CHECK(agent_energy(MarketState(spins), 0, 1.0, g, p, 0.0) == doctest::Approx(-12));

  // neighbor sum 4 and imbalance 4/8 = 0.5: a star of four buyers plus three idle sites
  const std::pair<int, int> edges[] = {{0, 1}, {0, 2}, {0, 3}, {0, 4}};
  const auto g4 = build_custom(edges, 8);
  const MarketState st({0, 1, 1, 1, 1, 0, 0, 0});
  REQUIRE(st.imbalance() == 0.5);
  p.a = 3;
  CHECK(agent_energy(st, 0, 1.0, g4, p, 0.2) == doctest::Approx(-2.7));

  CHECK(agent_energy(st, 0, 0.0, g4, p, 0.7) == 0.0);
  CHECK_THROWS_AS(agent_energy(st, 0, 0.5, g4, p, 0.0), Error);
}

TEST_CASE("agent energy is linear in the candidate value") {
  const auto g = build_fcc(2);
  ModelParams p;
  p.spin = SpinSpace::discrete(2);
  p.a = 1.3;
  std::mt19937_64 gen(5);
  std::uniform_int_distribution<int> pick(-2, 2);
  std::vector<double> s(g.size());
  for (double& v : s) v = pick(gen);
  const MarketState st(s);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double e1 = agent_energy(st, i, 1.0, g, p, 0.3);
    CHECK(agent_energy(st, i, 2.0, g, p, 0.3) == doctest::Approx(2 * e1));
    CHECK(agent_energy(st, i, -1.0, g, p, 0.3) == doctest::Approx(-e1));
  }
}

TEST_CASE("total energy halves only the pair term") {
  const std::pair<int, int> one[] = {{0, 1}};
  ModelParams p;
  CHECK(total_energy(MarketState({1, 1}), build_custom(one, 2), p, 0.0) == doctest::Approx(-1));
  CHECK(total_energy(MarketState({0, 0, 0}), build_custom({}, 3), p, 0.5) == 0.0);

  const std::vector<std::pair<int, int>> edges{{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}};
  const auto g = build_custom(edges, 4);
  std::mt19937_64 gen(11);
  std::uniform_int_distribution<int> pick(-1, 1);
  p.a = 0.8;
  p.J = 1.7;
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> s(4);
    for (double& v : s) v = pick(gen);
    const double H = 0.1 * rep - 2;
    CHECK(total_energy(MarketState(s), g, p, H) == doctest::Approx(brute_energy(s, edges, p, H)));
  }
}

TEST_CASE("global flip with reversed field leaves total energy unchanged") {
  const auto g = build_fcc(2);
  ModelParams p;
  p.spin = SpinSpace::continuous();
  p.a = 3;
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> s(g.size()), flipped(g.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    s[i] = u(gen);
    flipped[i] = -s[i];
  }
  const MarketState a(s), b(flipped);
  CHECK(b.imbalance() == doctest::Approx(-a.imbalance()));
  CHECK(total_energy(b, g, p, -0.3) == doctest::Approx(total_energy(a, g, p, 0.3)));
}

TEST_CASE("price and gross return") {
  CHECK(price(0.3, 0.3, 3, 3) == 3);
  CHECK(price(0.5, 0.5, 7, 3) == 3);
  CHECK(price(1, 0, 3, 3) == 6);
  CHECK(gross_return(3, 3) == 0);
  CHECK(gross_return(3.3, 3) == doctest::Approx(0.1));
  CHECK_THROWS_AS(gross_return(1, 0), Error);
}
