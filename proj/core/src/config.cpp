#include "spinmarket/config.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <variant>

#include "spinmarket/error.hpp"

namespace spinmarket {

namespace {

using C = ExperimentConfig;
using Member = std::variant<std::optional<std::string> C::*, std::optional<int> C::*, std::optional<long> C::*,
                            std::optional<double> C::*, std::optional<std::uint64_t> C::*,
                            std::optional<bool> C::*, std::optional<std::vector<double>> C::*,
                            std::optional<std::array<double, 3>> C::*,
                            std::optional<std::vector<FieldSegment>> C::*>;

struct Field {
  const char* key;
  Member member;
};

const Field kFields[] = {
    {"model.spin", &C::spin},
    {"model.S", &C::S},
    {"model.J", &C::J},
    {"model.a", &C::a},
    {"model.A", &C::A},
    {"model.global_scale", &C::global_scale},
    {"lattice.L", &C::L},
    {"run.T", &C::T},
    {"run.sweeps", &C::sweeps},
    {"run.discard", &C::discard},
    {"run.f_up", &C::f_up},
    {"run.f_dn", &C::f_dn},
    {"run.seed", &C::seed},
    {"run.mode", &C::mode},
    {"schedule", &C::schedule},
    {"scan.T", &C::scan_T},
    {"scan.T_range", &C::scan_T_range},
    {"pulse.t1", &C::pulse_t1},
    {"pulse.t2", &C::pulse_t2},
    {"pulse.H", &C::pulse_H},
    {"pulse.horizon", &C::pulse_horizon},
    {"pulse.replicas", &C::pulse_replicas},
    {"pulse.retention", &C::pulse_retention},
    {"pulse.noise_factor", &C::pulse_noise_factor},
    {"hc.h_lo", &C::hc_h_lo},
    {"hc.h_hi", &C::hc_h_hi},
    {"hc.seeds", &C::hc_seeds},
    {"hc.tol", &C::hc_tol},
    {"mf.J1", &C::mf_J1},
    {"mf.J2", &C::mf_J2},
    {"mf.K12", &C::mf_K12},
    {"mf.K21", &C::mf_K21},
    {"mf.a", &C::mf_a},
    {"mf.T", &C::mf_T},
    {"mf.a_p", &C::mf_a_p},
    {"mf.A", &C::mf_A},
    {"mf.M1", &C::mf_M1},
    {"mf.M2", &C::mf_M2},
    {"mf.s1_0", &C::mf_s1_0},
    {"mf.s2_0", &C::mf_s2_0},
    {"mf.a_over_T", &C::mf_a_over_T},
    {"mf.steps", &C::mf_steps},
    {"mf.tail", &C::mf_tail},
    {"mf.tol", &C::mf_tol},
    {"mf.T_list", &C::mf_T_list},
    {"mf.T_range", &C::mf_T_range},
    {"mf.T_lo", &C::mf_T_lo},
    {"mf.T_hi", &C::mf_T_hi},
    {"mf.bisect_tol", &C::mf_bisect_tol},
    {"mf.grid", &C::mf_grid},
};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) return parts;
    start = pos + 1;
  }
}

// Value parsing. Throws a plain message; the caller attaches key and line.
struct BadValue {
  std::string what;
};

template <class T>
T parse_number(std::string_view s) {
  T v{};
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size() || s.empty())
    throw BadValue{std::string("expected ") + (std::is_floating_point_v<T> ? "a number" : "an integer") +
                   ", got '" + std::string(s) + "'"};
  if constexpr (std::is_floating_point_v<T>)
    if (!std::isfinite(v)) throw BadValue{"value must be finite"};
  return v;
}

template <class T>
T parse_value(std::string_view s);

template <>
std::string parse_value(std::string_view s) {
  if (s.empty()) throw BadValue{"empty value"};
  return std::string(s);
}
template <>
int parse_value(std::string_view s) { return parse_number<int>(s); }
template <>
long parse_value(std::string_view s) { return parse_number<long>(s); }
template <>
double parse_value(std::string_view s) { return parse_number<double>(s); }
template <>
std::uint64_t parse_value(std::string_view s) { return parse_number<std::uint64_t>(s); }
template <>
bool parse_value(std::string_view s) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw BadValue{"expected true or false, got '" + std::string(s) + "'"};
}
template <>
std::vector<double> parse_value(std::string_view s) {
  std::vector<double> out;
  for (auto part : split(s, ',')) out.push_back(parse_number<double>(part));
  return out;
}
template <>
std::array<double, 3> parse_value(std::string_view s) {
  const auto parts = split(s, ':');
  if (parts.size() != 3) throw BadValue{"expected lo:hi:step, got '" + std::string(s) + "'"};
  return {parse_number<double>(parts[0]), parse_number<double>(parts[1]), parse_number<double>(parts[2])};
}
template <>
std::vector<FieldSegment> parse_value(std::string_view s) {
  std::vector<FieldSegment> out;
  if (s.empty()) return out;
  for (auto seg : split(s, ',')) {
    const auto parts = split(seg, ':');
    if (parts.size() != 3) throw BadValue{"expected t1:t2:H segments, got '" + std::string(seg) + "'"};
    out.push_back({parse_number<long>(parts[0]), parse_number<long>(parts[1]), parse_number<double>(parts[2])});
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format_value(const std::string& v) { return v; }
std::string format_value(int v) { return std::to_string(v); }
std::string format_value(long v) { return std::to_string(v); }
std::string format_value(double v) { return format_double(v); }
std::string format_value(std::uint64_t v) { return std::to_string(v); }
std::string format_value(bool v) { return v ? "true" : "false"; }
std::string format_value(const std::vector<double>& v) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) out += (k ? ", " : "") + format_double(v[k]);
  return out;
}
std::string format_value(const std::array<double, 3>& v) {
  return format_double(v[0]) + ":" + format_double(v[1]) + ":" + format_double(v[2]);
}
std::string format_value(const std::vector<FieldSegment>& v) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k)
    out += (k ? ", " : "") + std::to_string(v[k].t_start) + ":" + std::to_string(v[k].t_end) + ":" +
           format_double(v[k].H);
  return out;
}

bool is_metadata(std::string_view key) {
  return key == "command" || key.starts_with("tool.") || key.starts_with("result.");
}

[[noreturn]] void fail(const std::string& key, const std::string& what) { throw ConfigError(key + ": " + what); }

void check(bool ok, const char* key, const char* constraint) {
  if (!ok) fail(key, constraint);
}

void check_grid(const std::vector<double>& g, const char* key) {
  check(!g.empty(), key, "must list at least one temperature");
  for (std::size_t k = 0; k < g.size(); ++k) {
    check(g[k] > 0, key, "temperatures must be > 0");
    if (k) check(g[k] > g[k - 1], key, "temperatures must be strictly increasing");
  }
}

void check_range(const std::array<double, 3>& r, const char* key) {
  check(r[0] > 0 && r[1] > r[0] && r[2] > 0, key, "need 0 < lo < hi and step > 0");
}

template <class T>
void require(const std::optional<T>& v, const char* key, Command cmd) {
  if (!v) throw ConfigError(std::string("missing required key '") + key + "' for command " + command_name(cmd));
}

template <class T>
void set_default(std::optional<T>& v, T value) {
  if (!v) v = std::move(value);
}

}  // namespace

const char* command_name(Command c) noexcept {
  switch (c) {
    case Command::run: return "run";
    case Command::scan: return "scan";
    case Command::pulse: return "pulse";
    case Command::hc_search: return "hc-search";
    case Command::mft: return "mft";
    case Command::mft_scan: return "mft-scan";
  }
  return "?";
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::map<std::string, int, std::less<>> seen;
  int line_no = 0;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected 'key = value', got '" + std::string(line) + "'", line_no);
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("missing key before '='", line_no);
    if (const auto it = seen.find(key); it != seen.end())
      throw ConfigError("duplicate key '" + key + "' (first set on line " + std::to_string(it->second) + ")", line_no);
    seen.emplace(key, line_no);
    if (is_metadata(key)) continue;

    const Field* field = nullptr;
    for (const auto& f : kFields)
      if (key == f.key) field = &f;
    if (!field) throw ConfigError("unknown key '" + key + "'", line_no);
    try {
      std::visit(
          [&](auto member) {
            using T = typename std::remove_reference_t<decltype(cfg.*member)>::value_type;
            cfg.*member = parse_value<T>(value);
          },
          field->member);
    } catch (const BadValue& bad) {
      throw ConfigError(key + ": " + bad.what, line_no);
    }
  }
  validate_config(cfg);
  return cfg;
}

std::string emit_config(const ExperimentConfig& config) {
  std::string out;
  for (const auto& f : kFields) {
    std::visit(
        [&](auto member) {
          if (const auto& v = config.*member) out += std::string(f.key) + " = " + format_value(*v) + "\n";
        },
        f.member);
  }
  return out;
}

void validate_config(const ExperimentConfig& c) {
  if (c.spin) check(*c.spin == "discrete" || *c.spin == "continuous", "model.spin", "must be discrete or continuous");
  if (c.S) check(*c.S >= 1, "model.S", "must be >= 1");
  if (c.a) check(*c.a >= 0, "model.a", "must be >= 0");
  if (c.global_scale && *c.global_scale != "auto") {
    double g = -1;
    try {
      g = parse_number<double>(*c.global_scale);
    } catch (const BadValue&) {
      fail("model.global_scale", "must be auto or a number >= 0");
    }
    check(g >= 0, "model.global_scale", "must be auto or a number >= 0");
  }
  if (c.L) check(*c.L >= 2, "lattice.L", "must be >= 2");

  if (c.T) check(*c.T > 0, "run.T", "must be > 0");
  if (c.sweeps) check(*c.sweeps >= 0, "run.sweeps", "must be >= 0");
  if (c.discard) check(*c.discard >= 0, "run.discard", "must be >= 0");
  if (c.sweeps && c.discard) check(*c.discard < *c.sweeps, "run.discard", "must be < run.sweeps");
  if (c.f_up) check(*c.f_up >= 0 && *c.f_up <= 1, "run.f_up", "must be in [0, 1]");
  if (c.f_dn) check(*c.f_dn >= 0 && *c.f_dn <= 1, "run.f_dn", "must be in [0, 1]");
  if (c.f_up && c.f_dn) check(*c.f_up + *c.f_dn <= 1 + 1e-12, "run.f_dn", "run.f_up + run.f_dn must be <= 1");
  if (c.mode) check(*c.mode == "snapshot" || *c.mode == "in_place", "run.mode", "must be snapshot or in_place");
  if (c.schedule) {
    try {
      FieldSchedule{*c.schedule};
    } catch (const Error& e) {
      fail("schedule", e.what());
    }
  }

  check(!(c.scan_T && c.scan_T_range), "scan.T", "give either scan.T or scan.T_range, not both");
  if (c.scan_T) check_grid(*c.scan_T, "scan.T");
  if (c.scan_T_range) check_range(*c.scan_T_range, "scan.T_range");

  if (c.pulse_horizon) check(*c.pulse_horizon >= 2, "pulse.horizon", "must be >= 2");
  if (c.pulse_t1 && c.pulse_t2) check(*c.pulse_t1 < *c.pulse_t2, "pulse.t2", "must be > pulse.t1");
  if (c.pulse_t1 && c.pulse_horizon)
    check(*c.pulse_t1 >= *c.pulse_horizon, "pulse.t1", "must be >= pulse.horizon (baseline window)");
  if (c.pulse_replicas) check(*c.pulse_replicas >= 1, "pulse.replicas", "must be >= 1");
  if (c.pulse_noise_factor) check(*c.pulse_noise_factor >= 0, "pulse.noise_factor", "must be >= 0");

  if (c.hc_h_lo && c.hc_h_hi) check(*c.hc_h_lo < *c.hc_h_hi, "hc.h_hi", "must be > hc.h_lo");
  if (c.hc_seeds) check(*c.hc_seeds >= 1, "hc.seeds", "must be >= 1");
  if (c.hc_tol) check(*c.hc_tol > 0, "hc.tol", "must be > 0");

  if (c.mf_T) check(*c.mf_T > 0, "mf.T", "must be > 0");
  if (c.mf_M1) check(*c.mf_M1 >= 1, "mf.M1", "must be >= 1");
  if (c.mf_M2) check(*c.mf_M2 >= 1, "mf.M2", "must be >= 1");
  if (c.mf_s1_0) check(std::abs(*c.mf_s1_0) <= c.mf_M1.value_or(1), "mf.s1_0", "must satisfy |s1_0| <= M1");
  if (c.mf_s2_0) check(std::abs(*c.mf_s2_0) <= c.mf_M2.value_or(1), "mf.s2_0", "must satisfy |s2_0| <= M2");
  if (c.mf_steps) check(*c.mf_steps >= 1, "mf.steps", "must be >= 1");
  if (c.mf_tail) check(*c.mf_tail >= 8, "mf.tail", "must be >= 8");
  if (c.mf_steps && c.mf_tail) check(*c.mf_tail <= *c.mf_steps, "mf.tail", "must be <= mf.steps");
  if (c.mf_tol) check(*c.mf_tol > 0, "mf.tol", "must be > 0");
  check(!(c.mf_T_list && c.mf_T_range), "mf.T_list", "give either mf.T_list or mf.T_range, not both");
  if (c.mf_T_list) check_grid(*c.mf_T_list, "mf.T_list");
  if (c.mf_T_range) check_range(*c.mf_T_range, "mf.T_range");
  if (c.mf_T_lo) check(*c.mf_T_lo > 0, "mf.T_lo", "must be > 0");
  if (c.mf_T_lo && c.mf_T_hi) check(*c.mf_T_lo < *c.mf_T_hi, "mf.T_hi", "must be > mf.T_lo");
  if (c.mf_bisect_tol) check(*c.mf_bisect_tol > 0, "mf.bisect_tol", "must be > 0");
  if (c.mf_grid) check(*c.mf_grid >= 2, "mf.grid", "must be >= 2");
}

ExperimentConfig resolve(ExperimentConfig c, Command cmd) {
  validate_config(c);
  const bool lattice_cmd = cmd == Command::run || cmd == Command::scan || cmd == Command::pulse ||
                           cmd == Command::hc_search;
  if (lattice_cmd) {
    require(c.spin, "model.spin", cmd);
    if (*c.spin == "discrete") require(c.S, "model.S", cmd);
    require(c.J, "model.J", cmd);
    require(c.a, "model.a", cmd);
    require(c.L, "lattice.L", cmd);
    require(c.f_up, "run.f_up", cmd);
    require(c.f_dn, "run.f_dn", cmd);
    require(c.seed, "run.seed", cmd);
    set_default(c.A, 3.0);
    set_default(c.mode, std::string("snapshot"));
    // FCC coordination z = 12; auto means a / z^2 inside the agent energy.
    if (!c.global_scale || *c.global_scale == "auto") c.global_scale = format_double(1.0 / 144.0);
  }
  switch (cmd) {
    case Command::run:
      require(c.T, "run.T", cmd);
      require(c.sweeps, "run.sweeps", cmd);
      break;
    case Command::scan:
      require(c.sweeps, "run.sweeps", cmd);
      if (!c.scan_T && !c.scan_T_range)
        throw ConfigError("missing required key 'scan.T' or 'scan.T_range' for command scan");
      set_default(c.discard, *c.sweeps / 2);
      check(*c.discard < *c.sweeps, "run.discard", "must be < run.sweeps");
      break;
    case Command::pulse:
      require(c.T, "run.T", cmd);
      require(c.pulse_t1, "pulse.t1", cmd);
      require(c.pulse_t2, "pulse.t2", cmd);
      require(c.pulse_H, "pulse.H", cmd);
      require(c.pulse_horizon, "pulse.horizon", cmd);
      set_default(c.pulse_replicas, 1);
      break;
    case Command::hc_search:
      require(c.T, "run.T", cmd);
      require(c.pulse_t1, "pulse.t1", cmd);
      require(c.pulse_t2, "pulse.t2", cmd);
      require(c.pulse_horizon, "pulse.horizon", cmd);
      require(c.hc_h_lo, "hc.h_lo", cmd);
      require(c.hc_h_hi, "hc.h_hi", cmd);
      require(c.hc_seeds, "hc.seeds", cmd);
      require(c.hc_tol, "hc.tol", cmd);
      break;
    case Command::mft:
    case Command::mft_scan:
      require(c.mf_J1, "mf.J1", cmd);
      require(c.mf_J2, "mf.J2", cmd);
      require(c.mf_K12, "mf.K12", cmd);
      require(c.mf_K21, "mf.K21", cmd);
      require(c.mf_a, "mf.a", cmd);
      if (cmd == Command::mft) {
        require(c.mf_T, "mf.T", cmd);
      } else {
        if (!c.mf_T_list && !c.mf_T_range)
          throw ConfigError("missing required key 'mf.T_list' or 'mf.T_range' for command mft-scan");
        if (c.mf_T_lo || c.mf_T_hi) {
          require(c.mf_T_lo, "mf.T_lo", cmd);
          require(c.mf_T_hi, "mf.T_hi", cmd);
          require(c.mf_bisect_tol, "mf.bisect_tol", cmd);
          set_default(c.mf_grid, 41);
        }
      }
      set_default(c.mf_a_p, 1.0);
      set_default(c.mf_A, 3.0);
      set_default(c.mf_M1, 1);
      set_default(c.mf_M2, 1);
      set_default(c.mf_s1_0, 1.0);
      set_default(c.mf_s2_0, -1.0);
      set_default(c.mf_a_over_T, false);
      set_default(c.mf_steps, 2000L);
      set_default(c.mf_tail, 500L);
      set_default(c.mf_tol, 1e-3);
      break;
  }
  if (cmd == Command::pulse || cmd == Command::hc_search) {
    set_default(c.pulse_retention, 0.5);
    set_default(c.pulse_noise_factor, 3.0);
    const long need = *c.pulse_t2 + *c.pulse_horizon;
    if (!c.sweeps || *c.sweeps < need) c.sweeps = need;
  }
  validate_config(c);
  return c;
}

std::vector<double> expand_range(const std::array<double, 3>& r) {
  check_range(r, "range");
  std::vector<double> out;
  const auto n = static_cast<long>(std::floor((r[1] - r[0]) / r[2] + 1e-9));
  for (long k = 0; k <= n; ++k) out.push_back(r[0] + static_cast<double>(k) * r[2]);
  return out;
}

ModelParams model_params(const ExperimentConfig& c) {
  ModelParams p;
  p.spin = c.spin.value() == "continuous" ? SpinSpace::continuous() : SpinSpace::discrete(c.S.value());
  p.J = c.J.value();
  p.a = c.a.value();
  p.A = c.A.value();
  p.T = c.T.value_or(1.0);
  p.global_scale = parse_number<double>(c.global_scale.value());
  if (c.schedule) p.schedule = FieldSchedule(*c.schedule);
  return p;
}

RunConfig run_config(const ExperimentConfig& c) {
  RunConfig rc;
  rc.graph = std::make_shared<const NeighborGraph>(build_fcc(c.L.value()));
  rc.params = model_params(c);
  rc.n_sweeps = c.sweeps.value_or(0);
  rc.init = {c.f_up.value(), c.f_dn.value()};
  rc.seed = c.seed.value();
  rc.mode = c.mode.value() == "in_place" ? UpdateMode::in_place : UpdateMode::snapshot;
  rc.validate();
  return rc;
}

PulseProtocol pulse_protocol(const ExperimentConfig& c) {
  PulseProtocol p;
  p.t1 = c.pulse_t1.value();
  p.t2 = c.pulse_t2.value();
  p.horizon = c.pulse_horizon.value();
  p.criteria.retention_threshold = c.pulse_retention.value();
  p.criteria.noise_factor = c.pulse_noise_factor.value();
  return p;
}

MeanFieldParams meanfield_params(const ExperimentConfig& c) {
  MeanFieldParams p;
  p.J1 = c.mf_J1.value();
  p.J2 = c.mf_J2.value();
  p.K12 = c.mf_K12.value();
  p.K21 = c.mf_K21.value();
  p.a = c.mf_a.value();
  p.T = c.mf_T.value_or(1.0);
  p.M1 = c.mf_M1.value();
  p.M2 = c.mf_M2.value();
  p.s1_0 = c.mf_s1_0.value();
  p.s2_0 = c.mf_s2_0.value();
  p.a_over_T = c.mf_a_over_T.value();
  p.price_scale = c.mf_a_p.value();
  p.clearing_price = c.mf_A.value();
  p.validate();
  return p;
}

RegimeOptions regime_options(const ExperimentConfig& c) {
  RegimeOptions o;
  o.steps = c.mf_steps.value();
  o.tail = c.mf_tail.value();
  o.tol = c.mf_tol.value();
  o.grid = c.mf_grid.value_or(41);
  return o;
}

}  // namespace spinmarket
