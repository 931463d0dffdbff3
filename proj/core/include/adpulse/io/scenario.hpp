#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "adpulse/floquet.hpp"
#include "adpulse/lz_model.hpp"
#include "adpulse/storage.hpp"
#include "adpulse/sweep.hpp"

namespace adpulse::io {

enum class Action { spectrum, sweep, polarize, storage, lzcompare };

std::string to_string(Action a);
Action action_from_string(const std::string& name);

// Values are kept in config units (kHz, us, ns, multiples of pi) so that emitting and
// re-parsing a resolved scenario reproduces it exactly. Conversion to SI happens in the
// make_* helpers below.

struct NucleusConfig {
  std::string label;
  double a_x_khz = 0.0;  // A_x / 2 pi
  double a_z_khz = 0.0;
  bool operator==(const NucleusConfig&) const = default;
};

struct SystemConfig {
  double larmor_khz = 0.0;             // omega_L / 2 pi
  std::optional<double> b_field_tesla; // kept when given; must agree with larmor_khz
  std::string coupling = "nv";         // nv | symmetric
  std::vector<NucleusConfig> nuclei;
  bool operator==(const SystemConfig&) const = default;
};

struct ProtocolConfig {
  std::string family = "cpmg";
  double delta_theta_pi_units = 0.0;
  double t_pi_ns = 0.0;
  std::string layout = "symmetric";
  bool operator==(const ProtocolConfig&) const = default;
};

struct SweepConfig {
  double tau_ini_us = 0.0;
  double tau_fin_us = 0.0;
  double delta_tau_ns = 1.0;
  int n_p = 1;
  int repetitions = 1;
  std::string reinit = "none";
  std::string electron = "xplus";   // ket0 | ket1 | xplus | xminus
  std::string nuclear = "all_down"; // all_down | all_up | mixed
  std::optional<double> t2_budget_us;
  std::string method = "fast";      // fast | dense
  double saturation_tol = 1e-3;
  bool operator==(const SweepConfig&) const = default;
};

struct SpectrumConfig {
  double tau_min_us = 0.0;  // 0/0 resolves to the sweep window
  double tau_max_us = 0.0;
  int points = 400;
  std::string assignment = "greedy";
  double overlap_floor = 0.5;
  std::string fold = "full";
  double threshold_factor = 0.2;
  bool operator==(const SpectrumConfig&) const = default;
};

struct StorageConfig {
  std::string target;  // resolves to the first nucleus
  int harmonic = 3;
  double amplitude_a = 1.0;
  double amplitude_b = 0.0;
  bool renormalize = false;
  std::string nuclear_init = "down";
  double tau_ini_us = 0.0;
  double tau_fin_us = 0.0;
  double delta_tau_ns = 0.5;
  bool larmor_correction = true;
  bool readout = true;
  bool compare_isolated = true;        // also run the target alone when the register is larger
  std::vector<double> scan_centers_us; // fidelity-vs-window grid (may be empty)
  std::vector<double> scan_widths_us;
  bool operator==(const StorageConfig&) const = default;
};

struct LZCompareConfig {
  std::string target;
  int harmonic = 1;
  std::string resonance = "tau_minus";  // tau_minus | tau_plus | nominal
  std::string polarization_sign = "auto";  // auto | +1 | -1
  std::vector<double> gamma0 = {0.3, 1.0, 3.0, 10.0};
  double window_linewidths = 25.0;
  std::string reading = "resonance";  // resonance | instantaneous
  std::vector<double> scaling_a_x_khz;  // empty: no scaling run
  double scaling_gamma0 = 10.0;
  double scaling_window_linewidths = 5.0;
  bool operator==(const LZCompareConfig&) const = default;
};

struct Scenario {
  std::string name;
  Action action = Action::sweep;
  std::uint64_t seed = 1;
  std::string output_dir;
  int threads = 1;
  SystemConfig system;
  ProtocolConfig protocol;
  SweepConfig sweep;
  SpectrumConfig spectrum;
  StorageConfig storage;
  LZCompareConfig lzcompare;
  bool operator==(const Scenario&) const = default;
};

struct ParseOptions {
  std::optional<std::uint64_t> seed;  // overrides the file's seed before random registers are drawn
  std::string source = "<string>";    // used in error messages
};

// INI text with ';' or '#' comment lines. Unknown keys and wrong unit suffixes are rejected
// with the full key path. Throws ConfigError.
Scenario parse_scenario_text(const std::string& text, const ParseOptions& options = {});
Scenario parse_scenario(const std::filesystem::path& path, ParseOptions options = {});

// Canonical INI form of a resolved scenario.
std::string emit_scenario(const Scenario& scenario);

SpinSystem make_system(const Scenario& scenario);
ProtocolSpec make_protocol(const Scenario& scenario);
SweepSchedule make_schedule(const Scenario& scenario);
SweepOptions make_sweep_options(const Scenario& scenario);
QuantumState make_initial_state(const Scenario& scenario, const SpinSystem& system);
ScanOptions make_scan_options(const Scenario& scenario);
FoldWindow fold_window(const Scenario& scenario);

}  // namespace adpulse::io
