#include "config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <optional>
#include <sstream>

#include "json.hpp"
#include "kglab/dispersion.hpp"

namespace kglab::scenarios {

using nlohmann::json;

namespace {

constexpr std::array<ScenarioInfo, 7> kCatalog{{
    {"packet-continuity", "packet",
     "continuity of (rho_kg, j) and of the amended pair for a Klein-Gordon packet, with a Schrodinger twin"},
    {"gamma-density", "packet", "rho_kg against gamma_bar psi* psi for a broad packet"},
    {"amended", "packet", "gamma-amended density and current against psi* psi and the group velocity"},
    {"branch-demo", "plane_wave", "plane-wave rho_kg on the positive and on the unphysical negative branch"},
    {"two-mode", "two_mode", "two interfering modes of unequal weight: analytic and realized negative density"},
    {"superposition-scan", "modes", "density of a mode superposition, term by term and from psi, d_t psi"},
    {"nonrel-limit", "packet", "rest-phase-stripped Klein-Gordon evolution against Schrodinger evolution"},
}};

std::string join(const std::string& pointer, std::string_view key) { return pointer + "/" + std::string(key); }

void expect_object(const json& j, const std::string& pointer) {
  if (!j.is_object()) throw ConfigError(pointer.empty() ? "/" : pointer, "expected an object");
}

void check_keys(const json& j, const std::string& pointer, std::initializer_list<std::string_view> allowed) {
  expect_object(j, pointer);
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      std::string list;
      for (auto a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
      throw ConfigError(join(pointer, key), "unknown key (allowed: " + list + ")");
    }
  }
}

const json& require(const json& j, const std::string& pointer, std::string_view key) {
  auto it = j.find(std::string(key));
  if (it == j.end()) throw ConfigError(join(pointer, key), "required field is missing");
  return *it;
}

double as_number(const json& v, const std::string& pointer) {
  if (!v.is_number()) throw ConfigError(pointer, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(pointer, "must be finite");
  return d;
}

long long as_integer(const json& v, const std::string& pointer) {
  if (!v.is_number_integer()) throw ConfigError(pointer, "expected an integer");
  return v.get<long long>();
}

double number_field(const json& j, const std::string& pointer, std::string_view key) {
  return as_number(require(j, pointer, key), join(pointer, key));
}

double number_field_or(const json& j, const std::string& pointer, std::string_view key, double fallback) {
  auto it = j.find(std::string(key));
  return it == j.end() ? fallback : as_number(*it, join(pointer, key));
}

// Wavenumber given either as "k" (must be on the lattice) or as an integer "k_index".
double lattice_wavenumber(const json& j, const std::string& pointer, const Grid1D& grid) {
  const bool has_k = j.contains("k");
  const bool has_index = j.contains("k_index");
  if (has_k == has_index) throw ConfigError(pointer, "give exactly one of \"k\" or \"k_index\"");
  if (has_index) {
    const auto index = as_integer(j.at("k_index"), join(pointer, "k_index"));
    const auto half = static_cast<long long>(grid.size() / 2);
    if (index < -half || index >= half) {
      throw ConfigError(join(pointer, "k_index"), "outside the lattice range [-n/2, n/2)");
    }
    return grid.k(grid.slot_of(static_cast<std::ptrdiff_t>(index)));
  }
  const double k = as_number(j.at("k"), join(pointer, "k"));
  const auto slot = grid.slot_of_wavenumber(k);
  if (!slot) {
    throw ConfigError(join(pointer, "k"), "wavenumber " + std::to_string(k) +
                                              " is not on the lattice 2 pi j / L of this grid");
  }
  return grid.k(*slot);
}

double two_mode_length(const TwoModeStateSpec& spec, const UnitSystem& units) {
  const double w0 = units.compton_omega();
  const double w2 = spec.omega_ratio * w0;
  const double k2 = std::sqrt(w2 * w2 - w0 * w0) / units.c();
  return 2.0 * std::numbers::pi * spec.lattice_index / k2;
}

TwoModeStateSpec parse_two_mode(const json& j, const std::string& pointer, std::size_t n) {
  check_keys(j, pointer, {"weights", "omega_ratio", "relative_phase", "lattice_index"});
  const auto& w = require(j, pointer, "weights");
  const auto wp = join(pointer, "weights");
  if (!w.is_array() || w.size() != 2) throw ConfigError(wp, "expected an array of two weights |a1|^2, |a2|^2");
  TwoModeStateSpec spec;
  spec.weight1 = as_number(w[0], wp + "/0");
  spec.weight2 = as_number(w[1], wp + "/1");
  if (spec.weight1 < 0.0 || spec.weight2 < 0.0) throw ConfigError(wp, "weights must be non-negative");
  if (std::abs(spec.weight1 + spec.weight2 - 1.0) > ModeSet::kUnitarityTolerance) {
    throw ConfigError(wp, "mode amplitudes must satisfy unitarity: |a1|^2 + |a2|^2 = 1");
  }
  spec.omega_ratio = number_field(j, pointer, "omega_ratio");
  if (!(spec.omega_ratio > 1.0)) {
    throw ConfigError(join(pointer, "omega_ratio"), "must exceed 1 (the first mode sits at rest)");
  }
  spec.relative_phase = number_field_or(j, pointer, "relative_phase", 0.0);
  const auto index = as_integer(require(j, pointer, "lattice_index"), join(pointer, "lattice_index"));
  if (index < 1 || index >= static_cast<long long>(n / 2)) {
    throw ConfigError(join(pointer, "lattice_index"), "must lie in [1, n/2)");
  }
  spec.lattice_index = static_cast<int>(index);
  return spec;
}

ModeSet parse_modes(const json& j, const std::string& pointer, const Grid1D& grid) {
  if (!j.is_array() || j.empty()) throw ConfigError(pointer, "expected a non-empty array of modes");
  std::vector<Mode> modes;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto p = pointer + "/" + std::to_string(i);
    check_keys(j[i], p, {"re", "im", "k", "k_index"});
    const Complex a(number_field(j[i], p, "re"), number_field_or(j[i], p, "im", 0.0));
    modes.push_back({a, lattice_wavenumber(j[i], p, grid)});
  }
  try {
    return ModeSet(std::move(modes));
  } catch (const InvalidArgument& e) {
    throw ConfigError(pointer, e.what());
  }
}

SpectralState initial_state(const ScenarioConfig& c) {
  const auto kind = DispersionKind::klein_gordon();
  return std::visit(
      [&](const auto& spec) -> SpectralState {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, PacketSpec>) {
          return gaussian_packet(spec, c.grid, c.units, kind);
        } else if constexpr (std::is_same_v<T, ModeSet>) {
          return superposition(spec, c.grid, c.units, kind);
        } else if constexpr (std::is_same_v<T, TwoModeStateSpec>) {
          return superposition(two_mode_set(spec, c.grid), c.grid, c.units, kind);
        } else {
          return plane_wave(spec.k, c.grid, c.units, kind);
        }
      },
      c.state);
}

}  // namespace

std::span<const ScenarioInfo> catalog() { return kCatalog; }

const ScenarioInfo* find_scenario(std::string_view name) {
  for (const auto& info : kCatalog) {
    if (info.name == name) return &info;
  }
  return nullptr;
}

std::string_view format_name(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "json"; }

ModeSet two_mode_set(const TwoModeStateSpec& spec, const Grid1D& grid) {
  return ModeSet({{Complex(std::sqrt(spec.weight1), 0.0), 0.0},
                  {std::polar(std::sqrt(spec.weight2), spec.relative_phase),
                   grid.k(grid.slot_of(spec.lattice_index))}});
}

ScenarioConfig validate_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed config: ") + e.what());
  }
  check_keys(root, "",
             {"scenario", "grid", "units", "state", "times", "dt_continuity", "gamma_gate", "output", "format"});

  ScenarioConfig config;

  const auto& scenario = require(root, "", "scenario");
  if (!scenario.is_string()) throw ConfigError("/scenario", "expected a string");
  config.scenario = scenario.get<std::string>();
  const auto* info = find_scenario(config.scenario);
  if (info == nullptr) throw ConfigError("/scenario", "unknown scenario \"" + config.scenario + "\"");

  if (auto it = root.find("units"); it != root.end()) {
    check_keys(*it, "/units", {"hbar", "c", "m"});
    try {
      config.units = UnitSystem(number_field(*it, "/units", "hbar"), number_field(*it, "/units", "c"),
                                number_field(*it, "/units", "m"));
    } catch (const InvalidArgument& e) {
      throw ConfigError("/units", e.what());
    }
  }

  const auto& state = require(root, "", "state");
  check_keys(state, "/state", {"packet", "modes", "two_mode", "plane_wave"});
  if (state.size() != 1) throw ConfigError("/state", "give exactly one state description");
  const std::string state_key = state.begin().key();
  if (state_key != info->state_key) {
    throw ConfigError("/state/" + state_key, "scenario \"" + config.scenario + "\" takes a \"" +
                                                 std::string(info->state_key) + "\" state");
  }

  const auto& grid = require(root, "", "grid");
  check_keys(grid, "/grid", {"n", "length"});
  const auto n_raw = as_integer(require(grid, "/grid", "n"), "/grid/n");
  if (n_raw < 8 || (n_raw & (n_raw - 1)) != 0) throw ConfigError("/grid/n", "must be a power of two >= 8");
  const auto n = static_cast<std::size_t>(n_raw);

  std::optional<TwoModeStateSpec> two_mode;
  double length = 0.0;
  if (state_key == "two_mode") {
    two_mode = parse_two_mode(state.at("two_mode"), "/state/two_mode", n);
    length = two_mode_length(*two_mode, config.units);
    if (auto it = grid.find("length"); it != grid.end()) {
      const double given = as_number(*it, "/grid/length");
      if (std::abs(given - length) > 1e-12 * length) {
        throw ConfigError("/grid/length", "two-mode runs derive the length (" + std::to_string(length) +
                                              "); omit it or give the derived value");
      }
    }
  } else {
    length = number_field(grid, "/grid", "length");
  }
  try {
    config.grid = Grid1D(n, length);
  } catch (const InvalidArgument& e) {
    throw ConfigError("/grid", e.what());
  }

  if (state_key == "packet") {
    const auto& p = state.at("packet");
    check_keys(p, "/state/packet", {"x0", "k0", "sigma"});
    PacketSpec spec{number_field(p, "/state/packet", "x0"), number_field(p, "/state/packet", "k0"),
                    number_field(p, "/state/packet", "sigma")};
    if (spec.sigma <= 0.0) throw ConfigError("/state/packet/sigma", "must be positive");
    config.state = spec;
  } else if (state_key == "modes") {
    config.state = parse_modes(state.at("modes"), "/state/modes", config.grid);
  } else if (state_key == "two_mode") {
    config.state = *two_mode;
  } else {
    const auto& pw = state.at("plane_wave");
    check_keys(pw, "/state/plane_wave", {"k", "k_index"});
    config.state = PlaneWaveSpec{lattice_wavenumber(pw, "/state/plane_wave", config.grid)};
  }

  const auto& times = require(root, "", "times");
  if (!times.is_array() || times.empty()) throw ConfigError("/times", "expected a non-empty array of times");
  for (std::size_t i = 0; i < times.size(); ++i) {
    config.times.push_back(as_number(times[i], "/times/" + std::to_string(i)));
    if (i > 0 && !(config.times[i] > config.times[i - 1])) {
      throw ConfigError("/times/" + std::to_string(i), "times must be strictly ascending");
    }
  }

  config.dt_continuity = number_field_or(root, "", "dt_continuity", config.dt_continuity);
  if (!(config.dt_continuity > 0.0)) throw ConfigError("/dt_continuity", "must be positive");
  config.gamma_gate = number_field_or(root, "", "gamma_gate", config.gamma_gate);
  if (!(config.gamma_gate > 0.0)) throw ConfigError("/gamma_gate", "must be positive");

  if (auto it = root.find("output"); it != root.end()) {
    if (!it->is_string() || it->get<std::string>().empty()) throw ConfigError("/output", "expected a path");
    config.output = it->get<std::string>();
  }
  if (auto it = root.find("format"); it != root.end()) {
    const auto f = it->is_string() ? it->get<std::string>() : std::string();
    if (f == "csv") {
      config.format = OutputFormat::Csv;
    } else if (f == "json") {
      config.format = OutputFormat::Json;
    } else {
      throw ConfigError("/format", "expected \"csv\" or \"json\"");
    }
  }

  // Bandwidth and support problems surface here as BandwidthError; anything else
  // the state constructors reject is a config problem.
  if (const auto* packet = std::get_if<PacketSpec>(&config.state)) packet->validate(config.grid);
  try {
    (void)initial_state(config);
  } catch (const InvalidArgument& e) {
    throw ConfigError("/state/" + state_key, e.what());
  }
  return config;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return validate_config(buffer.str());
}

std::string config_to_json(const ScenarioConfig& config, int indent) {
  json root;
  root["scenario"] = config.scenario;
  root["grid"] = {{"n", config.grid.size()}, {"length", config.grid.length()}};
  root["units"] = {{"hbar", config.units.hbar()}, {"c", config.units.c()}, {"m", config.units.m()}};
  json state;
  std::visit(
      [&](const auto& spec) {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, PacketSpec>) {
          state["packet"] = {{"x0", spec.x0}, {"k0", spec.k0}, {"sigma", spec.sigma}};
        } else if constexpr (std::is_same_v<T, ModeSet>) {
          json modes = json::array();
          for (const auto& m : spec.modes()) {
            const auto slot = config.grid.slot_of_wavenumber(m.k);
            modes.push_back({{"re", m.amplitude.real()},
                             {"im", m.amplitude.imag()},
                             {"k_index", config.grid.mode_number(*slot)}});
          }
          state["modes"] = modes;
        } else if constexpr (std::is_same_v<T, TwoModeStateSpec>) {
          state["two_mode"] = {{"weights", {spec.weight1, spec.weight2}},
                               {"omega_ratio", spec.omega_ratio},
                               {"relative_phase", spec.relative_phase},
                               {"lattice_index", spec.lattice_index}};
        } else {
          state["plane_wave"] = {{"k_index", config.grid.mode_number(*config.grid.slot_of_wavenumber(spec.k))}};
        }
      },
      config.state);
  root["state"] = state;
  root["times"] = config.times;
  root["dt_continuity"] = config.dt_continuity;
  root["gamma_gate"] = config.gamma_gate;
  root["output"] = config.output.generic_string();
  root["format"] = std::string(format_name(config.format));
  return root.dump(indent);
}

}  // namespace kglab::scenarios
