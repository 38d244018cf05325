#include <doctest.h>

#include <random>

#include "spinmarket/config.hpp"
#include "spinmarket/error.hpp"

using namespace spinmarket;

namespace {

const char* kThreeState = R"(# 3-state reference model
model.spin = discrete
model.S = 1
model.J = 1
model.a = 3
lattice.L = 12
run.T = 6.692
run.sweeps = 800
run.f_up = 0.4
run.f_dn = 0.6
run.seed = 11
)";

int error_line(std::string_view text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_CASE("minimal three-state config parses and resolves") {
  const auto c = parse_config(kThreeState);
  CHECK(c.S == 1);
  CHECK(c.a == 3.0);
  CHECK(c.L == 12);
  CHECK_FALSE(c.A);

  const auto r = resolve(c, Command::run);
  CHECK(r.A == 3.0);
  CHECK(r.mode == "snapshot");
  CHECK(r.global_scale == "0.006944444444444444");

  const auto rc = run_config(r);
  CHECK(rc.graph->size() == 6912);
  CHECK(rc.params.T == 6.692);
  CHECK(rc.params.global_scale == doctest::Approx(1.0 / 144));
  CHECK(rc.init.dn == 0.6);
}

TEST_CASE("missing temperature names run.T") {
  std::string text = kThreeState;
  text.erase(text.find("run.T"), std::string("run.T = 6.692\n").size());
  const auto c = parse_config(text);
  CHECK_THROWS_WITH_AS(resolve(c, Command::run), doctest::Contains("run.T"), ConfigError);
  CHECK_THROWS_WITH_AS(resolve(parse_config("model.J = 1\n"), Command::scan), doctest::Contains("model.spin"),
                       ConfigError);
}

TEST_CASE("syntax errors carry line numbers") {
  CHECK(error_line("model.J = 1\nmodel.J = 2\n") == 2);
  CHECK(error_line("model.J = 1\n\nbogus line\n") == 3);
  CHECK(error_line("model.colour = red\n") == 1);
  CHECK(error_line("# c\nmodel.J = one\n") == 2);
  CHECK(error_line("schedule = 1:2\n") == 1);
  CHECK(error_line("= 3\n") == 1);
  CHECK_THROWS_WITH_AS(parse_config("model.J = 1\nmodel.J = 1\n"), doctest::Contains("duplicate"), ConfigError);
}

TEST_CASE("semantic errors name the key") {
  CHECK_THROWS_WITH_AS(parse_config("model.S = 0\n"), doctest::Contains("model.S"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("run.T = -1\n"), doctest::Contains("run.T"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("model.a = -3\n"), doctest::Contains("model.a"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("run.f_up = 0.7\nrun.f_dn = 0.6\n"), doctest::Contains("run.f_dn"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("run.mode = random\n"), doctest::Contains("run.mode"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("schedule = 0:10:1, 5:20:1\n"), doctest::Contains("schedule"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("scan.T = 5, 4\n"), doctest::Contains("scan.T"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("model.global_scale = lots\n"), doctest::Contains("global_scale"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("mf.s1_0 = 2\n"), doctest::Contains("mf.s1_0"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("run.T = inf\n"), doctest::Contains("finite"), ConfigError);
  CHECK_THROWS_AS(parse_config("model.spin = quantum\n"), ConfigError);
}

TEST_CASE("manifest metadata keys are ignored") {
  const auto c = parse_config("command = run\ntool.version = 0.1.0\nresult.final_P = 3.2\nmodel.J = 1\n");
  CHECK(c.J == 1.0);
  CHECK(c == parse_config("model.J = 1"));
}

TEST_CASE("ranges and defaults") {
  const auto g = expand_range({5.0, 8.0, 0.15});
  REQUIRE(g.size() == 21);
  CHECK(g.back() == doctest::Approx(8.0));

  auto c = parse_config(std::string(kThreeState) + "scan.T_range = 5:8:0.15\n");
  const auto r = resolve(c, Command::scan);
  CHECK(r.discard == 400);

  auto p = parse_config(std::string(kThreeState) + "pulse.t1 = 400\npulse.t2 = 600\npulse.H = 0.2\npulse.horizon = 250\n");
  const auto rp = resolve(p, Command::pulse);
  CHECK(rp.sweeps == 850);
  CHECK(rp.pulse_replicas == 1);
  CHECK(rp.pulse_retention == 0.5);
  CHECK(pulse_protocol(rp).horizon == 250);

  auto m = parse_config("mf.J1 = 1\nmf.J2 = 0.5\nmf.K12 = 1\nmf.K21 = -0.5\nmf.a = 5\nmf.T = 6.78\n");
  const auto rm = resolve(m, Command::mft);
  CHECK(rm.mf_steps == 2000);
  CHECK(rm.mf_tail == 500);
  CHECK(rm.mf_s2_0 == -1.0);
  const auto mp = meanfield_params(rm);
  CHECK(mp == MeanFieldParams{1, 0.5, 1, -0.5, 5, 6.78, 1, 1, 1, -1, false, 1, 3});
  CHECK_THROWS_WITH_AS(resolve(m, Command::mft_scan), doctest::Contains("mf.T_list"), ConfigError);
}

TEST_CASE("emit and parse round-trip") {
  const auto full = resolve(parse_config(std::string(kThreeState) +
                                         "schedule = 400:600:0.2, 700:710:-1e-3\nscan.T = 5, 5.5, 6.25\n"
                                         "pulse.t1 = 400\npulse.t2 = 600\npulse.H = 0.2\npulse.horizon = 200\n"
                                         "hc.h_lo = 0.01\nhc.h_hi = 0.1\nhc.seeds = 5\nhc.tol = 0.005\n"),
                            Command::hc_search);
  CHECK(parse_config(emit_config(full)) == full);

  std::mt19937_64 gen(6);
  std::uniform_real_distribution<double> u(0.001, 50);
  for (int k = 0; k < 200; ++k) {
    ExperimentConfig c;
    c.spin = k % 2 ? "continuous" : "discrete";
    c.S = 1 + k % 3;
    c.J = u(gen);
    c.a = u(gen);
    c.A = u(gen);
    c.global_scale = k % 3 ? "auto" : "0.1";
    c.T = u(gen);
    c.f_up = u(gen) / 100;
    c.f_dn = u(gen) / 100;
    c.seed = gen();
    c.mf_a_over_T = k % 2 == 0;
    c.mf_T_range = std::array<double, 3>{1.0, 1.0 + u(gen), u(gen) / 10};
    c.schedule = std::vector<FieldSegment>{{k, k + 5, -u(gen)}};
    const auto text = emit_config(c);
    CHECK(parse_config(text) == c);
  }
}
