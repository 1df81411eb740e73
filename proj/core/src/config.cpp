// Key = value run configuration.
//
//   # comment
//   schema = 1
//   p = 2
//   jumps = -0.4, 0.4
//
// Keys are listed in apply_setting.  Later assignments win, which is how
// command-line overrides are layered on top of a file.

#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <sstream>
#include <string>

#include "slowmo/error.hpp"
#include "slowmo/harness.hpp"

namespace slowmo {

std::string_view to_string(InitKind k) noexcept {
  switch (k) {
    case InitKind::layers: return "layers";
    case InitKind::stationary_subcritical: return "stationary-subcritical";
    case InitKind::stationary_periodic: return "stationary-periodic";
  }
  return "unknown";
}

std::string_view to_string(StopCondition s) noexcept {
  return s == StopCondition::t_end ? "t_end" : "first-collapse";
}

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto lo = s.find_first_not_of(ws);
  if (lo == std::string_view::npos) return {};
  const auto hi = s.find_last_not_of(ws);
  return s.substr(lo, hi - lo + 1);
}

[[noreturn]] void bad(std::string_view key, const std::string& why) {
  throw Error(Errc::validation_failure, std::string(key) + ": " + why);
}

double to_double(std::string_view key, std::string_view v) {
  v = trim(v);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    bad(key, "expected a number, got '" + std::string(v) + "'");
  return out;
}

long to_long(std::string_view key, std::string_view v) {
  v = trim(v);
  long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    bad(key, "expected an integer, got '" + std::string(v) + "'");
  return out;
}

std::vector<double> to_list(std::string_view key, std::string_view v) {
  std::vector<double> out;
  v = trim(v);
  if (v.empty()) return out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = v.find(',', start);
    out.push_back(to_double(key, v.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view raw) {
  key = trim(key);
  const std::string_view value = trim(raw);
  if (key == "schema") {
    cfg.schema = static_cast<int>(to_long(key, value));
    if (cfg.schema != RunConfig::kSchema)
      bad(key, "unsupported schema " + std::string(value) + " (expected " +
                   std::to_string(RunConfig::kSchema) + ")");
  } else if (key == "name") {
    cfg.name = std::string(value);
  } else if (key == "p") {
    cfg.params.p = to_double(key, value);
  } else if (key == "n") {
    cfg.params.n = to_double(key, value);
  } else if (key == "eps") {
    cfg.params.eps = to_double(key, value);
  } else if (key == "a") {
    cfg.a = to_double(key, value);
  } else if (key == "b") {
    cfg.b = to_double(key, value);
  } else if (key == "cells_per_eps") {
    cfg.cells_per_eps = to_double(key, value);
  } else if (key == "nodes") {
    const long m = to_long(key, value);
    if (m < 0) bad(key, "must be >= 0");
    cfg.nodes = m == 0 ? std::nullopt : std::optional<std::size_t>(static_cast<std::size_t>(m));
  } else if (key == "init") {
    if (value == "layers") cfg.init = InitKind::layers;
    else if (value == "stationary-subcritical") cfg.init = InitKind::stationary_subcritical;
    else if (value == "stationary-periodic") cfg.init = InitKind::stationary_periodic;
    else bad(key, "expected layers | stationary-subcritical | stationary-periodic");
  } else if (key == "jumps") {
    cfg.jumps = to_list(key, value);
  } else if (key == "first_sign") {
    cfg.first_sign = static_cast<int>(to_long(key, value));
  } else if (key == "periodic_zeros") {
    cfg.periodic_zeros = static_cast<int>(to_long(key, value));
  } else if (key == "scheme") {
    try {
      cfg.solver.scheme = scheme_from_string(value);
    } catch (const Error&) {
      bad(key, "expected explicit | semi-implicit-lagged | linearly-implicit");
    }
  } else if (key == "dt_init") {
    cfg.solver.dt_init = to_double(key, value);
  } else if (key == "dt_min") {
    cfg.solver.dt_min = to_double(key, value);
  } else if (key == "dt_max") {
    cfg.solver.dt_max = to_double(key, value);
  } else if (key == "energy_tolerance") {
    cfg.solver.energy_tolerance = to_double(key, value);
  } else if (key == "reg_delta") {
    if (value == "auto") cfg.solver.reg_delta.reset();
    else cfg.solver.reg_delta = to_double(key, value);
  } else if (key == "cfl_safety") {
    cfg.solver.cfl_safety = to_double(key, value);
  } else if (key == "t_end") {
    cfg.t_end = to_double(key, value);
  } else if (key == "t_first") {
    cfg.schedule.t_first = to_double(key, value);
  } else if (key == "per_decade") {
    cfg.schedule.per_decade = static_cast<int>(to_long(key, value));
  } else if (key == "band_lo") {
    cfg.band.lo = to_double(key, value);
  } else if (key == "band_hi") {
    cfg.band.hi = to_double(key, value);
  } else if (key == "stop") {
    if (value == "t_end") cfg.stop = StopCondition::t_end;
    else if (value == "first-collapse") cfg.stop = StopCondition::first_collapse;
    else bad(key, "expected t_end | first-collapse");
  } else if (key == "A") {
    if (value == "auto") cfg.A.reset();
    else cfg.A = to_double(key, value);
  } else if (key == "delta") {
    if (value == "auto") cfg.delta.reset();
    else cfg.delta = to_double(key, value);
  } else if (key == "output_dir") {
    cfg.output_dir = std::string(value);
  } else {
    bad(key, "unknown key");
  }
}

RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  bool saw_schema = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view text = line;
    if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    text = trim(text);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos)
      throw Error(Errc::validation_failure,
                  "line " + std::to_string(lineno) + ": expected 'key = value'");
    const auto key = trim(text.substr(0, eq));
    if (key == "schema") saw_schema = true;
    apply_setting(cfg, key, text.substr(eq + 1));
  }
  if (!saw_schema) throw Error(Errc::validation_failure, "schema: missing (expected schema = 1)");
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::validation_failure, "cannot open config " + path.string());
  return parse_config(in);
}

std::string dump_config(const RunConfig& cfg) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "schema = " << cfg.schema << '\n'
     << "name = " << cfg.name << '\n'
     << "p = " << cfg.params.p << '\n'
     << "n = " << cfg.params.n << '\n'
     << "eps = " << cfg.params.eps << '\n'
     << "a = " << cfg.a << '\n'
     << "b = " << cfg.b << '\n'
     << "cells_per_eps = " << cfg.cells_per_eps << '\n'
     << "nodes = " << cfg.nodes.value_or(0) << '\n'
     << "init = " << to_string(cfg.init) << '\n'
     << "jumps = ";
  for (std::size_t i = 0; i < cfg.jumps.size(); ++i) os << (i ? ", " : "") << cfg.jumps[i];
  os << '\n'
     << "first_sign = " << cfg.first_sign << '\n'
     << "periodic_zeros = " << cfg.periodic_zeros << '\n'
     << "scheme = " << to_string(cfg.solver.scheme) << '\n'
     << "dt_init = " << cfg.solver.dt_init << '\n'
     << "dt_min = " << cfg.solver.dt_min << '\n'
     << "dt_max = " << cfg.solver.dt_max << '\n'
     << "energy_tolerance = " << cfg.solver.energy_tolerance << '\n';
  if (cfg.solver.reg_delta) os << "reg_delta = " << *cfg.solver.reg_delta << '\n';
  else os << "reg_delta = auto\n";
  os << "cfl_safety = " << cfg.solver.cfl_safety << '\n'
     << "t_end = " << cfg.t_end << '\n'
     << "t_first = " << cfg.schedule.t_first << '\n'
     << "per_decade = " << cfg.schedule.per_decade << '\n'
     << "band_lo = " << cfg.band.lo << '\n'
     << "band_hi = " << cfg.band.hi << '\n'
     << "stop = " << to_string(cfg.stop) << '\n';
  if (cfg.A) os << "A = " << *cfg.A << '\n';
  else os << "A = auto\n";
  if (cfg.delta) os << "delta = " << *cfg.delta << '\n';
  else os << "delta = auto\n";
  if (!cfg.output_dir.empty()) os << "output_dir = " << cfg.output_dir.string() << '\n';
  return os.str();
}

}  // namespace slowmo
