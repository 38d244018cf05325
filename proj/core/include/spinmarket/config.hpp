#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spinmarket/dynamics.hpp"
#include "spinmarket/meanfield.hpp"
#include "spinmarket/observables.hpp"

namespace spinmarket {

// Experiment configuration. The text form is one `key = value` per line,
// `#` starts a comment, and keys are flat dotted names:
//
//   model.spin = discrete | continuous      model.S (discrete only)
//   model.J, model.a                         model.A = 3
//   model.global_scale = auto | <number>     lattice.L
//   run.T, run.sweeps, run.discard = sweeps/2, run.f_up, run.f_dn,
//   run.seed, run.mode = snapshot | in_place
//   schedule = t1:t2:H, t1:t2:H ...
//   scan.T = T, T, ...  or  scan.T_range = lo:hi:step
//   pulse.t1, pulse.t2, pulse.H, pulse.horizon, pulse.replicas = 1,
//   pulse.retention = 0.5, pulse.noise_factor = 3
//   hc.h_lo, hc.h_hi, hc.seeds, hc.tol
//   mf.J1, mf.J2, mf.K12, mf.K21, mf.a, mf.T, mf.a_p = 1, mf.A = 3,
//   mf.M1 = 1, mf.M2 = 1, mf.s1_0 = 1, mf.s2_0 = -1, mf.a_over_T = false,
//   mf.steps = 2000, mf.tail = 500, mf.tol = 1e-3,
//   mf.T_list = T, ...  or  mf.T_range = lo:hi:step,
//   mf.T_lo, mf.T_hi, mf.bisect_tol, mf.grid = 41
//
// Keys `command`, `tool.*` and `result.*` are manifest metadata and ignored.
// Unset optional keys stay unset; defaults are applied by resolve().

struct ExperimentConfig {
  std::optional<std::string> spin;  // "discrete" or "continuous"
  std::optional<int> S;
  std::optional<double> J;
  std::optional<double> a;
  std::optional<double> A;
  std::optional<std::string> global_scale;  // "auto" or a number
  std::optional<int> L;

  std::optional<double> T;
  std::optional<long> sweeps;
  std::optional<long> discard;
  std::optional<double> f_up;
  std::optional<double> f_dn;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  std::optional<std::vector<FieldSegment>> schedule;

  std::optional<std::vector<double>> scan_T;
  std::optional<std::array<double, 3>> scan_T_range;

  std::optional<long> pulse_t1;
  std::optional<long> pulse_t2;
  std::optional<double> pulse_H;
  std::optional<long> pulse_horizon;
  std::optional<int> pulse_replicas;
  std::optional<double> pulse_retention;
  std::optional<double> pulse_noise_factor;

  std::optional<double> hc_h_lo;
  std::optional<double> hc_h_hi;
  std::optional<int> hc_seeds;
  std::optional<double> hc_tol;

  std::optional<double> mf_J1;
  std::optional<double> mf_J2;
  std::optional<double> mf_K12;
  std::optional<double> mf_K21;
  std::optional<double> mf_a;
  std::optional<double> mf_T;
  std::optional<double> mf_a_p;
  std::optional<double> mf_A;
  std::optional<int> mf_M1;
  std::optional<int> mf_M2;
  std::optional<double> mf_s1_0;
  std::optional<double> mf_s2_0;
  std::optional<bool> mf_a_over_T;
  std::optional<long> mf_steps;
  std::optional<long> mf_tail;
  std::optional<double> mf_tol;
  std::optional<std::vector<double>> mf_T_list;
  std::optional<std::array<double, 3>> mf_T_range;
  std::optional<double> mf_T_lo;
  std::optional<double> mf_T_hi;
  std::optional<double> mf_bisect_tol;
  std::optional<int> mf_grid;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

enum class Command { run, scan, pulse, hc_search, mft, mft_scan };

const char* command_name(Command c) noexcept;

/// Parses and range-checks every key present. Throws ConfigError with the line
/// number for syntax errors, unknown or duplicate keys and malformed values,
/// and naming the key for out-of-range values.
ExperimentConfig parse_config(std::string_view text);

/// Canonical text form; parse_config(emit_config(c)) == c.
std::string emit_config(const ExperimentConfig& config);

/// Range checks on the keys that are set.
void validate_config(const ExperimentConfig& config);

/// Checks that everything `command` needs is present, then fills the
/// documented defaults so the result can be echoed as a complete manifest.
ExperimentConfig resolve(ExperimentConfig config, Command command);

/// Evenly spaced grid lo, lo+step, ... <= hi (with a small tolerance on hi).
std::vector<double> expand_range(const std::array<double, 3>& range);

// Builders for resolved configs.
ModelParams model_params(const ExperimentConfig& config);
RunConfig run_config(const ExperimentConfig& config);
PulseProtocol pulse_protocol(const ExperimentConfig& config);
MeanFieldParams meanfield_params(const ExperimentConfig& config);
RegimeOptions regime_options(const ExperimentConfig& config);

}  // namespace spinmarket
