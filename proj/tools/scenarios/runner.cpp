#include "runner.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>

#include "kglab/propagation.hpp"
#include "kglab/version.hpp"

namespace kglab::scenarios {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

constexpr std::array<std::string_view, 9> kFieldColumns{"t",     "x",           "re_psi", "im_psi",   "rho_nonrel",
                                                        "rho_kg", "rho_amended", "j_std",  "j_amended"};
constexpr std::array<std::string_view, 9> kSummaryColumns{
    "t", "norm", "centroid", "variance", "gamma_bar", "gamma_spread", "continuity_residual", "min_rho_kg", "argmin_x"};

double max_of(std::span<const double> v) { return *std::max_element(v.begin(), v.end()); }

// Residual of the pairing that is conserved for this kind of state.
double conserved_residual(const ContinuityReport& r, DispersionKind kind) {
  return kind == DispersionKind::schrodinger() ? r.nonrel.normalized : r.kg.normalized;
}

SeriesRecord make_record(const EvolutionResult& evolved, const ScenarioConfig& config) {
  const auto& state = evolved.state;
  const GammaGate gate{config.gamma_gate};
  SeriesRecord rec;
  rec.t = state.time();
  rec.psi.assign(state.values().begin(), state.values().end());
  rec.fields = compute_fields(evolved, gate);
  rec.moments = moments(rec.fields.rho_nonrel, state.grid());
  rec.continuity_residual = conserved_residual(check_continuity(state, config.dt_continuity, gate), state.kind());
  if (state.kind().is_klein_gordon()) {
    const auto it = std::min_element(rec.fields.rho_kg.begin(), rec.fields.rho_kg.end());
    rec.min_rho_kg = *it;
    rec.argmin_x = state.grid().x(static_cast<std::size_t>(it - rec.fields.rho_kg.begin()));
  } else {
    // The Klein-Gordon density has no meaning for a Schrodinger state.
    std::fill(rec.fields.rho_kg.begin(), rec.fields.rho_kg.end(), kNaN);
    rec.min_rho_kg = kNaN;
    rec.argmin_x = kNaN;
  }
  return rec;
}

Series sample(std::string name, const SpectralState& initial, const ScenarioConfig& config) {
  Series series{std::move(name), std::string(initial.kind().name()), {}};
  for (const auto& evolved : evolve_many(initial, config.times)) series.records.push_back(make_record(evolved, config));
  return series;
}

SpectralState build_initial(const ScenarioConfig& config, DispersionKind kind) {
  return std::visit(
      [&](const auto& spec) -> SpectralState {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, PacketSpec>) {
          return gaussian_packet(spec, config.grid, config.units, kind);
        } else if constexpr (std::is_same_v<T, ModeSet>) {
          return superposition(spec, config.grid, config.units, kind);
        } else if constexpr (std::is_same_v<T, TwoModeStateSpec>) {
          return superposition(two_mode_set(spec, config.grid), config.grid, config.units, kind);
        } else {
          return plane_wave(spec.k, config.grid, config.units, kind);
        }
      },
      config.state);
}

void add_packet_derived(RunResult& result, const SpectralState& kg) {
  const auto& cfg = result.config;
  const auto& packet = std::get<PacketSpec>(cfg.state);
  const auto gamma = gamma_of_state(kg);
  result.derived["gamma_bar"] = gamma.mean;
  result.derived["gamma_spread"] = gamma.relative_spread();
  result.derived["gamma_k0"] = gamma_of_omega(omega(DispersionKind::klein_gordon(), packet.k0, cfg.units), cfg.units);
  result.derived["group_velocity"] = group_velocity(DispersionKind::klein_gordon(), packet.k0, cfg.units);
  result.derived["group_velocity_schrodinger"] = group_velocity(DispersionKind::schrodinger(), packet.k0, cfg.units);
}

void run_packet_continuity(RunResult& result) {
  const auto& cfg = result.config;
  const auto kg = build_initial(cfg, DispersionKind::klein_gordon());
  const auto schr = build_initial(cfg, DispersionKind::schrodinger());
  add_packet_derived(result, kg);
  result.series.push_back(sample("klein_gordon", kg, cfg));
  result.series.push_back(sample("schrodinger", schr, cfg));

  const GammaGate gate{cfg.gamma_gate};
  double kg_max = 0.0, kg_half = 0.0, amended_max = 0.0, schr_max = 0.0, schr_half = 0.0;
  json per_time = json::array();
  const auto kg_states = evolve_many(kg, cfg.times);
  const auto schr_states = evolve_many(schr, cfg.times);
  for (std::size_t i = 0; i < cfg.times.size(); ++i) {
    const auto full = check_continuity(kg_states[i].state, cfg.dt_continuity, gate);
    const auto half = check_continuity(kg_states[i].state, 0.5 * cfg.dt_continuity, gate);
    const auto s_full = check_continuity(schr_states[i].state, cfg.dt_continuity, gate);
    const auto s_half = check_continuity(schr_states[i].state, 0.5 * cfg.dt_continuity, gate);
    kg_max = std::max(kg_max, full.kg.normalized);
    kg_half = std::max(kg_half, half.kg.normalized);
    amended_max = std::max(amended_max, full.amended.normalized);
    schr_max = std::max(schr_max, s_full.nonrel.normalized);
    schr_half = std::max(schr_half, s_half.nonrel.normalized);
    per_time.push_back({{"t", cfg.times[i]},
                        {"residual_kg", full.kg.normalized},
                        {"residual_amended", full.amended.normalized},
                        {"residual_kg_raw", full.kg.raw},
                        {"residual_amended_raw", full.amended.raw},
                        {"residual_kg_half_dt", half.kg.normalized},
                        {"residual_schrodinger", s_full.nonrel.normalized}});
  }
  result.results["dt"] = cfg.dt_continuity;
  result.results["per_time"] = per_time;
  result.results["max_residual_kg"] = kg_max;
  result.results["max_residual_amended"] = amended_max;
  result.results["max_residual_schrodinger"] = schr_max;
  result.results["convergence_ratio_kg"] = kg_max / kg_half;
  result.results["convergence_ratio_schrodinger"] = schr_max / schr_half;
  result.results["max_continuity_residual"] = std::max({kg_max, amended_max, schr_max});
}

void run_gamma_density(RunResult& result) {
  const auto& cfg = result.config;
  const auto kg = build_initial(cfg, DispersionKind::klein_gordon());
  add_packet_derived(result, kg);
  result.series.push_back(sample("klein_gordon", kg, cfg));
  json per_time = json::array();
  double worst = 0.0;
  for (const auto& rec : result.series.front().records) {
    const auto& f = rec.fields;
    const double floor = 1e-3 * max_of(f.rho_nonrel);
    double dev = 0.0;
    for (std::size_t i = 0; i < f.rho_kg.size(); ++i) {
      if (f.rho_nonrel[i] >= floor) {
        const double ref = f.gamma_bar * f.rho_nonrel[i];
        dev = std::max(dev, std::abs(f.rho_kg[i] - ref) / ref);
      }
    }
    worst = std::max(worst, dev);
    per_time.push_back({{"t", rec.t}, {"max_relative_deviation", dev}});
  }
  result.results["per_time"] = per_time;
  result.results["max_relative_deviation"] = worst;
}

void run_amended(RunResult& result) {
  const auto& cfg = result.config;
  const auto kg = build_initial(cfg, DispersionKind::klein_gordon());
  add_packet_derived(result, kg);
  result.series.push_back(sample("klein_gordon", kg, cfg));
  const double vg = result.derived["group_velocity"].get<double>();
  json per_time = json::array();
  double worst_l2 = 0.0, worst_v = 0.0;
  for (const auto& rec : result.series.front().records) {
    const auto& f = rec.fields;
    const double l2 = relative_l2_difference(std::span<const double>(f.rho_amended), f.rho_nonrel);
    const auto peak = static_cast<std::size_t>(std::max_element(f.rho_amended.begin(), f.rho_amended.end()) -
                                               f.rho_amended.begin());
    const double v = f.j_amended[peak] / f.rho_amended[peak];
    worst_l2 = std::max(worst_l2, l2);
    worst_v = std::max(worst_v, std::abs(v - vg));
    per_time.push_back({{"t", rec.t},
                        {"rho_amended_relative_l2", l2},
                        {"velocity_at_peak", v},
                        {"within_gate", !f.gamma_spread_flag}});
  }
  result.results["per_time"] = per_time;
  result.results["max_rho_amended_relative_l2"] = worst_l2;
  result.results["max_velocity_error"] = worst_v;
}

void run_branch_demo(RunResult& result) {
  const auto& cfg = result.config;
  const double k = std::get<PlaneWaveSpec>(cfg.state).k;
  const auto pos = build_initial(cfg, DispersionKind::klein_gordon());
  const auto neg = build_initial(cfg, DispersionKind::unphysical_negative_branch());
  result.derived["k"] = k;
  result.derived["omega_positive"] = omega(DispersionKind::klein_gordon(), k, cfg.units);
  result.derived["omega_negative"] = omega(DispersionKind::unphysical_negative_branch(), k, cfg.units);
  result.derived["gamma"] = gamma_of_omega(result.derived["omega_positive"].get<double>(), cfg.units);
  result.series.push_back(sample("klein_gordon_positive", pos, cfg));
  result.series.push_back(sample("klein_gordon_negative", neg, cfg));
  for (const auto& series : result.series) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& rec : series.records) {
      for (std::size_t i = 0; i < rec.fields.rho_kg.size(); ++i) {
        const double ratio = rec.fields.rho_kg[i] / rec.fields.rho_nonrel[i];
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
      }
    }
    result.results[series.name] = {{"min_density_ratio", lo}, {"max_density_ratio", hi}};
  }
}

void run_two_mode(RunResult& result) {
  const auto& cfg = result.config;
  const auto& spec = std::get<TwoModeStateSpec>(cfg.state);
  const auto modes = two_mode_set(spec, cfg.grid);
  const auto kg = superposition(modes, cfg.grid, cfg.units, DispersionKind::klein_gordon());
  const TwoModeSpec analytic{modes.modes()[0].amplitude, modes.modes()[1].amplitude,
                             omega(DispersionKind::klein_gordon(), modes.modes()[0].k, cfg.units),
                             omega(DispersionKind::klein_gordon(), modes.modes()[1].k, cfg.units)};
  result.derived["omega1"] = analytic.omega1;
  result.derived["omega2"] = analytic.omega2;
  result.derived["k2"] = modes.modes()[1].k;
  result.series.push_back(sample("klein_gordon", kg, cfg));

  double scan = std::numeric_limits<double>::infinity();
  constexpr int kSamples = 10000;
  for (int i = 0; i < kSamples; ++i) {
    scan = std::min(scan, two_mode_density(analytic, 2.0 * std::numbers::pi * i / kSamples, cfg.units));
  }
  double lattice = std::numeric_limits<double>::infinity();
  double where = 0.0, when = 0.0;
  for (const auto& rec : result.series.front().records) {
    if (rec.min_rho_kg < lattice) {
      lattice = rec.min_rho_kg;
      where = rec.argmin_x;
      when = rec.t;
    }
  }
  // Lattice densities carry the 1/L of the box normalization; the analytic form does not.
  const double length = cfg.grid.length();
  result.results["analytic_min_density"] = two_mode_min_density(analytic, cfg.units);
  result.results["phase_scan_min_density"] = scan;
  result.results["min_density"] = lattice * length;
  result.results["min_rho_kg"] = lattice;
  result.results["argmin_x"] = where;
  result.results["argmin_t"] = when;
  result.results["negative_density"] = lattice < 0.0;
}

void run_superposition_scan(RunResult& result) {
  const auto& cfg = result.config;
  const auto& modes = std::get<ModeSet>(cfg.state);
  const auto kg = superposition(modes, cfg.grid, cfg.units, DispersionKind::klein_gordon());
  result.derived["gamma_bar"] = gamma_of_state(kg).mean;
  result.derived["gamma_spread"] = gamma_of_state(kg).relative_spread();
  result.series.push_back(sample("klein_gordon", kg, cfg));
  json per_time = json::array();
  double overall = std::numeric_limits<double>::infinity();
  double worst_mismatch = 0.0;
  for (const auto& rec : result.series.front().records) {
    const auto direct = superposition_density(modes, rec.t, cfg.grid, cfg.units);
    double mismatch = 0.0;
    for (std::size_t i = 0; i < direct.rho.size(); ++i) {
      mismatch = std::max(mismatch, std::abs(direct.rho[i] - rec.fields.rho_kg[i]));
    }
    worst_mismatch = std::max(worst_mismatch, mismatch);
    overall = std::min(overall, direct.min);
    per_time.push_back(
        {{"t", rec.t}, {"min_density", direct.min}, {"argmin_x", direct.argmin_x}, {"max_formula_mismatch", mismatch}});
  }
  result.results["per_time"] = per_time;
  result.results["min_density"] = overall;
  result.results["negative_density"] = overall < 0.0;
  result.results["max_formula_mismatch"] = worst_mismatch;
}

double stripped_gap(const ScenarioConfig& cfg, const UnitSystem& units, double t) {
  const auto& packet = std::get<PacketSpec>(cfg.state);
  const auto kg = gaussian_packet(packet, cfg.grid, units, DispersionKind::klein_gordon());
  const auto schr = gaussian_packet(packet, cfg.grid, units, DispersionKind::schrodinger());
  const auto a = rest_phase_strip(evolve(kg, t).state);
  const auto b = evolve(schr, t).state;
  return relative_l2_difference(a.values(), b.values());
}

void run_nonrel_limit(RunResult& result) {
  const auto& cfg = result.config;
  const auto kg = build_initial(cfg, DispersionKind::klein_gordon());
  const auto schr = build_initial(cfg, DispersionKind::schrodinger());
  add_packet_derived(result, kg);

  auto stripped = sample("klein_gordon_stripped", kg, cfg);
  const auto evolved = evolve_many(kg, cfg.times);
  for (std::size_t i = 0; i < evolved.size(); ++i) {
    const auto s = rest_phase_strip(evolved[i].state);
    stripped.records[i].psi.assign(s.values().begin(), s.values().end());
  }
  result.series.push_back(std::move(stripped));
  result.series.push_back(sample("schrodinger", schr, cfg));

  json per_time = json::array();
  for (std::size_t i = 0; i < cfg.times.size(); ++i) {
    const auto& a = result.series[0].records[i].psi;
    const auto& b = result.series[1].records[i].psi;
    per_time.push_back({{"t", cfg.times[i]}, {"relative_l2_gap", relative_l2_difference(std::span<const Complex>(a), b)}});
  }
  const double t_last = cfg.times.back();
  const UnitSystem doubled(cfg.units.hbar(), 2.0 * cfg.units.c(), cfg.units.m());
  const double gap = stripped_gap(cfg, cfg.units, t_last);
  const double gap_doubled = stripped_gap(cfg, doubled, t_last);
  result.results["per_time"] = per_time;
  result.results["gap_at_last_time"] = gap;
  result.results["gap_at_last_time_c_doubled"] = gap_doubled;
  result.results["gap_ratio_c_doubled"] = gap / gap_doubled;
  result.results["note"] = "klein_gordon_stripped re_psi/im_psi hold the rest-phase-stripped wavefunction";
}

// Fixed 17-significant-digit formatting; NaN always prints as "nan".
std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_json(double v) { return std::isfinite(v) ? fmt(v) : "null"; }

std::array<double, 9> field_row(const SeriesRecord& rec, const Grid1D& grid, std::size_t i) {
  const auto& f = rec.fields;
  return {rec.t,        grid.x(i),         rec.psi[i].real(), rec.psi[i].imag(), f.rho_nonrel[i],
          f.rho_kg[i], f.rho_amended[i], f.j_std[i],         f.j_amended[i]};
}

std::array<double, 9> summary_row(const SeriesRecord& rec) {
  return {rec.t,
          rec.moments.norm,
          rec.moments.centroid,
          rec.moments.variance,
          rec.fields.gamma_bar,
          rec.fields.gamma_spread,
          rec.continuity_residual,
          rec.min_rho_kg,
          rec.argmin_x};
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

template <std::size_t N>
void write_csv_header(std::ostream& out, const std::array<std::string_view, N>& cols) {
  for (std::size_t c = 0; c < N; ++c) out << (c ? "," : "") << cols[c];
  out << '\n';
}

template <std::size_t N>
void write_csv_row(std::ostream& out, const std::array<double, N>& row) {
  for (std::size_t c = 0; c < N; ++c) out << (c ? "," : "") << fmt(row[c]);
  out << '\n';
}

void write_fields_json(std::ostream& out, const Series& series, const Grid1D& grid) {
  out << "{\n  \"series\": \"" << series.name << "\",\n  \"records\": [";
  for (std::size_t r = 0; r < series.records.size(); ++r) {
    const auto& rec = series.records[r];
    out << (r ? ",\n" : "\n") << "    {\"t\": " << fmt_json(rec.t);
    for (std::size_t c = 1; c < kFieldColumns.size(); ++c) {
      out << ",\n     \"" << kFieldColumns[c] << "\": [";
      for (std::size_t i = 0; i < grid.size(); ++i) out << (i ? "," : "") << fmt_json(field_row(rec, grid, i)[c]);
      out << "]";
    }
    out << "}";
  }
  out << "\n  ]\n}\n";
}

void write_summary_json(std::ostream& out, const Series& series) {
  out << "{\n  \"series\": \"" << series.name << "\",\n  \"records\": [";
  for (std::size_t r = 0; r < series.records.size(); ++r) {
    const auto row = summary_row(series.records[r]);
    out << (r ? ",\n" : "\n") << "    {";
    for (std::size_t c = 0; c < kSummaryColumns.size(); ++c) {
      out << (c ? ", " : "") << "\"" << kSummaryColumns[c] << "\": " << fmt_json(row[c]);
    }
    out << "}";
  }
  out << "\n  ]\n}\n";
}

}  // namespace

std::span<const std::string_view> field_columns() { return kFieldColumns; }
std::span<const std::string_view> summary_columns() { return kSummaryColumns; }

RunResult run_scenario(const ScenarioConfig& config) {
  RunResult result{config, {}, json::object(), json::object()};
  result.derived["dx"] = config.grid.dx();
  result.derived["length"] = config.grid.length();
  result.derived["rest_omega"] = config.units.compton_omega();
  const auto& name = config.scenario;
  if (name == "packet-continuity") {
    run_packet_continuity(result);
  } else if (name == "gamma-density") {
    run_gamma_density(result);
  } else if (name == "amended") {
    run_amended(result);
  } else if (name == "branch-demo") {
    run_branch_demo(result);
  } else if (name == "two-mode") {
    run_two_mode(result);
  } else if (name == "superposition-scan") {
    run_superposition_scan(result);
  } else if (name == "nonrel-limit") {
    run_nonrel_limit(result);
  } else {
    throw ConfigError("/scenario", "unknown scenario \"" + name + "\"");
  }
  return result;
}

std::vector<std::filesystem::path> write_outputs(const RunResult& result, const std::filesystem::path& dir,
                                                 OutputFormat format) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());

  const auto& grid = result.config.grid;
  const std::string ext = format == OutputFormat::Csv ? ".csv" : ".json";
  std::vector<std::filesystem::path> written;
  json series_meta = json::array();

  for (const auto& series : result.series) {
    const auto fields_path = dir / (series.name + ".fields" + ext);
    const auto summary_path = dir / (series.name + ".summary" + ext);
    {
      auto out = open_for_write(fields_path);
      if (format == OutputFormat::Csv) {
        write_csv_header(out, kFieldColumns);
        for (const auto& rec : series.records) {
          for (std::size_t i = 0; i < grid.size(); ++i) write_csv_row(out, field_row(rec, grid, i));
        }
      } else {
        write_fields_json(out, series, grid);
      }
      finish(out, fields_path);
    }
    {
      auto out = open_for_write(summary_path);
      if (format == OutputFormat::Csv) {
        write_csv_header(out, kSummaryColumns);
        for (const auto& rec : series.records) write_csv_row(out, summary_row(rec));
      } else {
        write_summary_json(out, series);
      }
      finish(out, summary_path);
    }
    written.push_back(fields_path);
    written.push_back(summary_path);
    series_meta.push_back({{"name", series.name},
                           {"kind", series.kind},
                           {"fields_file", fields_path.filename().string()},
                           {"summary_file", summary_path.filename().string()}});
  }

  auto echo = json::parse(config_to_json(result.config));
  echo.erase("output");
  echo["format"] = std::string(format_name(format));
  const json meta = {{"tool", "kg-lab"},
                     {"version", std::string(kglab::version())},
                     {"scenario", result.config.scenario},
                     {"config", echo},
                     {"derived", result.derived},
                     {"results", result.results},
                     {"series", series_meta}};
  const auto meta_path = dir / "metadata.json";
  auto out = open_for_write(meta_path);
  out << meta.dump(2) << '\n';
  finish(out, meta_path);
  written.push_back(meta_path);
  return written;
}

void print_summary(const RunResult& result, std::ostream& out) {
  out << "scenario " << result.config.scenario << "  (n = " << result.config.grid.size()
      << ", L = " << fmt(result.config.grid.length()) << ")\n";
  char line[256];
  for (const auto& series : result.series) {
    out << "\n  " << series.name << " [" << series.kind << "]\n";
    std::snprintf(line, sizeof line, "  %10s %12s %12s %12s %12s %12s %12s\n", "t", "norm", "centroid", "variance",
                  "gamma_bar", "continuity", "min_rho_kg");
    out << line;
    for (const auto& rec : series.records) {
      std::snprintf(line, sizeof line, "  %10.4g %12.9f %12.6g %12.6g %12.8g %12.3e %12.5g\n", rec.t,
                    rec.moments.norm, rec.moments.centroid, rec.moments.variance, rec.fields.gamma_bar,
                    rec.continuity_residual, rec.min_rho_kg);
      out << line;
    }
  }
  out << "\n  derived: " << result.derived.dump() << "\n";
  json headline = result.results;
  headline.erase("per_time");
  out << "  results: " << headline.dump() << "\n";
}

}  // namespace kglab::scenarios
