#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "config.hpp"
#include "json.hpp"
#include "kglab/observables.hpp"

namespace kglab::scenarios {

/// Everything recorded for one series at one sample time.
struct SeriesRecord {
  double t = 0.0;
  ComplexArray psi;
  DensityCurrentFields fields;
  Moments moments;
  double continuity_residual = 0.0;
  double min_rho_kg = 0.0;
  double argmin_x = 0.0;
};

/// One evolving state sampled at every configured time.
struct Series {
  std::string name;
  std::string kind;
  std::vector<SeriesRecord> records;
};

struct RunResult {
  ScenarioConfig config;
  std::vector<Series> series;
  nlohmann::json derived;  ///< gamma_bar, group velocity, derived grid quantities
  nlohmann::json results;  ///< scenario-specific checks
};

/// Runs one scenario in memory. Pure: identical configs give identical results.
RunResult run_scenario(const ScenarioConfig& config);

/// Writes metadata.json plus one fields and one summary file per series into `dir`,
/// creating it if needed. Returns the paths written. Throws IoError on failure.
std::vector<std::filesystem::path> write_outputs(const RunResult& result, const std::filesystem::path& dir,
                                                 OutputFormat format);

/// Human-readable table of the per-time summaries and the scenario results.
void print_summary(const RunResult& result, std::ostream& out);

/// Column names of the field and summary files.
std::span<const std::string_view> field_columns();
std::span<const std::string_view> summary_columns();

}  // namespace kglab::scenarios
