#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "kglab/error.hpp"
#include "kglab/grid.hpp"
#include "kglab/state.hpp"
#include "kglab/units.hpp"

namespace kglab::scenarios {

/// Config rejected at the boundary. `field` is a JSON pointer ("/grid/n") or empty
/// for parse errors, whose message carries the line and column.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Output directory or file could not be written.
class IoError : public Error {
 public:
  using Error::Error;
};

enum class OutputFormat { Csv, Json };

/// Unit-amplitude plane wave, used by the branch demonstration.
struct PlaneWaveSpec {
  double k = 0.0;
};

/// Two modes at k = 0 and at lattice site `lattice_index`, with |a1|^2 : |a2|^2 = weights
/// and omega2 / omega1 = omega_ratio. The box length is derived so that the second
/// wavenumber sits exactly on the lattice.
struct TwoModeStateSpec {
  double weight1 = 0.5;
  double weight2 = 0.5;
  double omega_ratio = 2.0;
  double relative_phase = 0.0;
  int lattice_index = 1;
};

using StateSpec = std::variant<PacketSpec, ModeSet, TwoModeStateSpec, PlaneWaveSpec>;

struct ScenarioInfo {
  std::string_view name;
  std::string_view state_key;  ///< which "state" entry the scenario takes
  std::string_view summary;
};

/// The shipped catalog, in display order.
std::span<const ScenarioInfo> catalog();
const ScenarioInfo* find_scenario(std::string_view name);

struct ScenarioConfig {
  std::string scenario;
  Grid1D grid{8, 1.0};
  UnitSystem units = UnitSystem::natural();
  StateSpec state = PacketSpec{};
  std::vector<double> times;
  double dt_continuity = 1e-3;
  double gamma_gate = 0.01;
  std::filesystem::path output = "kg-lab-out";
  OutputFormat format = OutputFormat::Csv;
};

/// Parses and checks a config. Unknown keys are rejected at every level and every
/// module invariant is re-checked by building the initial state.
///
/// Throws ConfigError for schema violations and BandwidthError when the packet or
/// mode set does not fit the grid.
ScenarioConfig validate_config(std::string_view text);

/// Reads `path` and validates it. Throws IoError when the file cannot be read.
ScenarioConfig load_config(const std::filesystem::path& path);

/// Serialized form of a validated config, with defaults and derived values filled in.
std::string config_to_json(const ScenarioConfig& config, int indent = 2);

/// Mode set described by a two-mode spec on `grid`.
ModeSet two_mode_set(const TwoModeStateSpec& spec, const Grid1D& grid);

std::string_view format_name(OutputFormat f);

}  // namespace kglab::scenarios
