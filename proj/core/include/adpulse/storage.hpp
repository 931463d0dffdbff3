#pragma once

#include <string>
#include <vector>

#include "adpulse/sweep.hpp"

namespace adpulse {

enum class NuclearBasis { down, up };
enum class ElectronBranch { ket0, ket1_reinit_needed };

struct StorageOptions {
  SweepOptions sweep;
  bool larmor_correction = true;
};

struct StorageResult {
  QuantumState final_state;
  double fidelity = 0.0;         // moduli of coefficients
  double strict_fidelity = 0.0;  // |<target|psi>|, phase sensitive
  ElectronBranch electron_branch = ElectronBranch::ket0;
  double larmor_phase = 0.0;     // arg(c_up c_dn*) of the stored qubit before correction
  double larmor_wait = 0.0;      // s
  double electron_excited = 0.0; // |1> population after the sweep, before any reset
  double tau_resonance = 0.0;    // target-spin resonance used for the bracket check
};

// Maps a|0> + b|1> (electron) onto a|down> + b|up> of `nucleus` by an adiabatic PulsePol sweep.
// The other nuclei start in |down>.
StorageResult run_storage(cplx a, cplx b, NuclearBasis nuclear_init, const SpinSystem& system,
                          const ProtocolSpec& spec, const SweepSchedule& schedule, int nucleus,
                          int j, const StorageOptions& options = {});

// Mirrored sweep on a stored state; returns the modulus fidelity of the recovered electron
// state a|0> + b|1> (nuclei back in |down>).
double readout_fidelity(const StorageResult& stored, cplx a, cplx b, const SpinSystem& system,
                        const ProtocolSpec& spec, const SweepSchedule& schedule, int nucleus,
                        const StorageOptions& options = {});

// Free evolution for `wait` seconds.
QuantumState larmor_z_correction(const QuantumState& state, const SpinSystem& system, double wait);

// Wait that takes a relative phase `current` to `target` (mod 2 pi) while the electron is in |0>.
double larmor_wait_for_phase(const SpinSystem& system, int nucleus, double current, double target);

// Sum_i |t_i| sqrt(rho_ii): overlap of coefficient moduli, valid for mixed rho too.
double modulus_fidelity(const QuantumState& state, const Vec& target);

struct SelectionRule {
  std::string from, to;
  double probability = 0.0;
  bool swap = false;
};

struct CrossingPairOptions {
  double half_width_linewidths = 10.0;
  double delta_tau = 0.5e-9;
  int scan_points = 400;
};

struct CrossingPairMap {
  double tau_avoided = 0.0;  // avoided crossing of the target spin
  double tau_true = 0.0;     // true crossing superposed on it (0 if none resolved)
  double gap = 0.0;
  std::vector<SelectionRule> rules;
  bool unresolved = false;  // another spin's resonance falls inside the window
  std::vector<std::string> overlapping;
  SweepSchedule schedule;   // sweep used to verify the rules
};

CrossingPairMap crossing_pair_map(const SpinSystem& system, const ProtocolSpec& spec, int nucleus, int j,
                                  const CrossingPairOptions& options = {});

}  // namespace adpulse
