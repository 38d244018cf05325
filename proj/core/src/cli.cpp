#include "spinmarket/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "spinmarket/config.hpp"
#include "spinmarket/csv.hpp"
#include "spinmarket/error.hpp"
#include "spinmarket/parallel.hpp"

#ifndef SPINMARKET_VERSION
#define SPINMARKET_VERSION "unknown"
#endif

namespace spinmarket {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  unsigned threads = 1;
};

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("failed reading config file '" + path + "'");
  return buf.str();
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  body(out);
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

// key = value lines appended after the resolved config.
using Results = std::vector<std::pair<std::string, std::string>>;

void write_manifest(const fs::path& dir, Command cmd, const ExperimentConfig& cfg, const Results& results) {
  write_file(dir / "manifest", [&](std::ostream& out) {
    out << "command = " << command_name(cmd) << "\n";
    out << "tool.name = spinmarket\n";
    out << "tool.version = " << SPINMARKET_VERSION << "\n";
    out << emit_config(cfg);
    for (const auto& [k, v] : results) out << "result." << k << " = " << v << "\n";
  });
}

std::vector<double> grid_of(const std::optional<std::vector<double>>& list,
                            const std::optional<std::array<double, 3>>& range) {
  return list ? *list : expand_range(*range);
}

const char* a_scaling(const ExperimentConfig& cfg) { return cfg.mf_a_over_T.value() ? "a_over_T" : "literal"; }

int execute(Command cmd, const ExperimentConfig& cfg, const fs::path& dir, unsigned threads) {
  Results results;
  switch (cmd) {
    case Command::run: {
      const TimeSeries series = run_market(run_config(cfg));
      write_file(dir / "timeseries.csv", [&](std::ostream& o) { write_timeseries_csv(o, series); });
      const auto& last = series.rows.back();
      results = {{"final_M", num(last.M)}, {"final_P", num(last.P)}};
      break;
    }
    case Command::scan: {
      const auto grid = grid_of(cfg.scan_T, cfg.scan_T_range);
      const long discard = cfg.discard.value();
      const auto scan = temperature_scan(run_config(cfg), grid, discard, cfg.sweeps.value() - discard, threads);
      write_file(dir / "scan.csv", [&](std::ostream& o) { write_scan_csv(o, scan); });
      try {
        const TcEstimate tc = estimate_tc(scan);
        results = {{"T_c", num(tc.T_c)}, {"T_c_uncertainty", num(tc.uncertainty)}};
      } catch (const Error& e) {
        write_manifest(dir, cmd, cfg, {{"T_c", "nan"}, {"T_c_error", e.what()}});
        throw;
      }
      break;
    }
    case Command::pulse: {
      const RunConfig base = run_config(cfg);
      const PulseProtocol protocol = pulse_protocol(cfg);
      const double T = cfg.T.value(), H = cfg.pulse_H.value();
      const auto n = static_cast<std::size_t>(cfg.pulse_replicas.value());
      std::vector<PersistenceRow> rows(n);
      TimeSeries first;
      parallel_for(n, threads, [&](std::size_t k) {
        TimeSeries series = run_market(pulse_run_config(base, T, H, protocol, k));
        rows[k] = {H, T, persistence_score(series, protocol.t1, protocol.t2, protocol.horizon, protocol.criteria)};
        if (k == 0) first = std::move(series);
      });
      write_file(dir / "timeseries.csv", [&](std::ostream& o) { write_timeseries_csv(o, first); });
      write_file(dir / "persistence.csv", [&](std::ostream& o) { write_persistence_csv(o, rows); });
      int votes = 0;
      for (const auto& r : rows) votes += r.report.persistent;
      const auto& r0 = rows.front().report;
      results = {{"votes", std::to_string(votes)},
                 {"replicas", std::to_string(n)},
                 {"persistent", 2 * votes > static_cast<int>(n) ? "true" : "false"},
                 {"retention", r0.retention ? num(*r0.retention) : "nan"},
                 {"noise_floor", num(r0.noise_floor)}};
      break;
    }
    case Command::hc_search: {
      const HcBracket b = find_critical_h(run_config(cfg), cfg.T.value(), cfg.hc_h_lo.value(), cfg.hc_h_hi.value(),
                                          cfg.hc_seeds.value(), cfg.hc_tol.value(), pulse_protocol(cfg), threads);
      std::vector<PersistenceRow> rows;
      for (const auto& p : b.probes)
        for (const auto& r : p.reports) rows.push_back({p.H, cfg.T.value(), r});
      write_file(dir / "hc.csv", [&](std::ostream& o) { write_hc_csv(o, b.probes); });
      write_file(dir / "persistence.csv", [&](std::ostream& o) { write_persistence_csv(o, rows); });
      results = {{"H_lo", num(b.lo)}, {"H_hi", num(b.hi)}, {"probes", std::to_string(b.probes.size())}};
      break;
    }
    case Command::mft: {
      const MeanFieldParams p = meanfield_params(cfg);
      const RegimeOptions opts = regime_options(cfg);
      const MeanFieldTrajectory traj = mf_run(p, opts.steps);
      write_file(dir / "trajectory.csv", [&](std::ostream& o) { write_trajectory_csv(o, traj); });
      results = {{"a_scaling", a_scaling(cfg)}, {"origin_spectral_radius", num(origin_spectral_radius(p))}};
      try {
        const RegimeReport rep = classify_regime(traj, opts.tail, opts.tol);
        results.insert(results.end(), {{"regime", regime_name(rep.regime)},
                                       {"period", num(rep.period)},
                                       {"amplitude", num(rep.amplitude)}});
      } catch (const TransientError&) {
        results.push_back({"regime", "transient"});
      }
      break;
    }
    case Command::mft_scan: {
      const MeanFieldParams p = meanfield_params(cfg);
      const RegimeOptions opts = regime_options(cfg);
      const auto rows = regime_scan(p, grid_of(cfg.mf_T_list, cfg.mf_T_range), opts, threads);
      write_file(dir / "regime_scan.csv", [&](std::ostream& o) { write_regime_scan_csv(o, rows); });
      results = {{"a_scaling", a_scaling(cfg)}};
      if (cfg.mf_T_lo) {
        try {
          const RegimeBoundaries b =
              regime_boundaries(p, cfg.mf_T_lo.value(), cfg.mf_T_hi.value(), cfg.mf_bisect_tol.value(), opts);
          results.insert(results.end(), {{"T_c1", num(b.T_c1)}, {"T_c2", num(b.T_c2)}});
        } catch (const Error& e) {
          results.push_back({"boundaries_error", e.what()});
          write_manifest(dir, cmd, cfg, results);
          throw;
        }
      }
      break;
    }
  }
  write_manifest(dir, cmd, cfg, results);
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Agent-based market simulation on an FCC lattice, with a two-community mean-field map"};
  app.set_version_flag("--version", SPINMARKET_VERSION);
  app.require_subcommand(1);

  Options opt;
  std::uint64_t seed = 0;
  app.add_option("--config", opt.config_path, "Experiment config (key = value lines)")->required();
  auto* seed_opt = app.add_option("--seed", seed, "Root seed; overrides run.seed");
  app.add_option("--out", opt.out_dir, "Output directory")->capture_default_str();
  app.add_option("--threads", opt.threads, "Concurrent replicas or temperatures")
      ->check(CLI::Range(1u, 1024u))
      ->capture_default_str();

  const std::pair<const char*, Command> subs[] = {
      {"run", Command::run},           {"scan", Command::scan}, {"pulse", Command::pulse},
      {"hc-search", Command::hc_search}, {"mft", Command::mft},   {"mft-scan", Command::mft_scan}};
  const char* help[] = {"Single time series",
                        "Temperature scan and critical temperature estimate",
                        "Field pulse and persistence verdict",
                        "Bisection for the critical pulse strength",
                        "Mean-field trajectory",
                        "Mean-field regime scan and boundaries"};
  std::vector<std::pair<CLI::App*, Command>> commands;
  for (std::size_t k = 0; k < std::size(subs); ++k)
    commands.emplace_back(app.add_subcommand(subs[k].first, help[k])->fallthrough(), subs[k].second);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  if (*seed_opt) opt.seed = seed;

  Command cmd = Command::run;
  for (const auto& [sub, c] : commands)
    if (sub->parsed()) cmd = c;

  try {
    ExperimentConfig cfg = parse_config(read_file(opt.config_path));
    if (opt.seed) cfg.seed = opt.seed;
    cfg = resolve(std::move(cfg), cmd);
    const fs::path dir(opt.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + opt.out_dir + "': " + ec.message());
    return execute(cmd, cfg, dir, opt.threads);
  } catch (const IoError& e) {
    std::cerr << "spinmarket: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "spinmarket: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace spinmarket
