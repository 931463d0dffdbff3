#pragma once

#include <optional>
#include <string>
#include <vector>

#include "adpulse/propagator.hpp"
#include "adpulse/quantum_state.hpp"

namespace adpulse {

enum class Reinit { none, to_ket0, to_Xplus, to_Xminus };

std::string to_string(Reinit r);
Reinit reinit_from_string(const std::string& name);  // throws ConfigError

// Linear tau grid tau_k = tau_ini + (k - 1) delta_tau, k = 1..N_s.
struct SweepSchedule {
  double tau_ini = 0.0;    // s
  double tau_fin = 0.0;    // s
  double delta_tau = 0.0;  // s, negative for downward sweeps
  int n_p = 1;
  int repetitions = 1;
  Reinit reinit = Reinit::none;

  int n_steps() const;
  double tau(int step) const;  // step in [1, n_steps]
};

SweepSchedule make_schedule(double tau_ini, double tau_fin, double delta_tau, int n_p = 1,
                            int repetitions = 1, Reinit reinit = Reinit::none);
void validate(const SweepSchedule& schedule);

// Eq. 3 in closed form: t_k = N_p * f * sum_{l<=k} tau_l, f = period / tau.
double cumulative_time(const SweepSchedule& schedule, Family family, int step);
double sweep_time(const SweepSchedule& schedule, Family family);

struct Observables {
  double L = 0.0;   // 2 <S_x>
  double P = 0.0;   // (1/N) sum_n 2 <I_z^n>
  double Mz = 0.0;  // sum_n <I_z^n>
  std::vector<double> iz;  // <I_z^n>
  double purity = 0.0;
};

Observables observables(const QuantumState& state, const SpinSystem& system);

struct TrajectoryRow {
  int step = 0;  // 1-based within the repetition
  int rep = 0;   // 1-based
  double tau = 0.0;
  double t_cum = 0.0;  // cumulative over the whole run
  Observables obs;
};

struct Trajectory {
  std::vector<TrajectoryRow> rows;
  std::vector<Observables> rep_end;  // state at the end of each sweep, before any reinit
  double t_sweep = 0.0;              // t_Tot of one sweep
  double t_total = 0.0;              // all repetitions
  std::vector<std::string> warnings;
  QuantumState final_state;
};

struct SweepOptions {
  std::optional<double> t2_budget;  // s; warn when the run exceeds it
  int threads = 1;                  // used for propagator precomputation
  ExpMethod method = ExpMethod::fast;
  bool record_steps = true;
  std::size_t cache_limit_bytes = std::size_t(512) << 20;
  std::optional<Eigen::Vector2cd> reinit_state;  // overrides the schedule's reinit target
};

Trajectory run_sweep(const QuantumState& state, const SpinSystem& system, const ProtocolSpec& spec,
                     const SweepSchedule& schedule, const SweepOptions& options = {});

struct RepeatedPolarization {
  std::vector<double> P;      // P at the end of repetition r (index r - 1)
  std::vector<double> gains;  // P(r) - P(r - 1), with P(0) the initial value
  std::optional<int> saturated_at;  // first r with |dP| < tol over three consecutive repeats
  Trajectory trajectory;
};

RepeatedPolarization run_repeated_polarization(const QuantumState& state, const SpinSystem& system,
                                               const ProtocolSpec& spec, const SweepSchedule& schedule,
                                               const SweepOptions& options = {},
                                               double saturation_tol = 1e-3);

// Mirror of a schedule: runs from tau_fin back to tau_ini.
SweepSchedule reversed(const SweepSchedule& schedule);

}  // namespace adpulse
