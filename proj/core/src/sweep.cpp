#include "adpulse/sweep.hpp"

#include <cmath>
#include <sstream>

#include "adpulse/errors.hpp"
#include "adpulse/parallel.hpp"

namespace adpulse {

std::string to_string(Reinit r) {
  switch (r) {
    case Reinit::none: return "none";
    case Reinit::to_ket0: return "to_ket0";
    case Reinit::to_Xplus: return "to_Xplus";
    case Reinit::to_Xminus: return "to_Xminus";
  }
  return "?";
}

Reinit reinit_from_string(const std::string& name) {
  if (name == "none") return Reinit::none;
  if (name == "to_ket0") return Reinit::to_ket0;
  if (name == "to_Xplus") return Reinit::to_Xplus;
  if (name == "to_Xminus") return Reinit::to_Xminus;
  throw ConfigError("unknown reinit '" + name + "' (expected none|to_ket0|to_Xplus|to_Xminus)");
}

int SweepSchedule::n_steps() const {
  if (delta_tau == 0.0) return 0;
  return static_cast<int>(std::lround((tau_fin - tau_ini) / delta_tau)) + 1;
}

double SweepSchedule::tau(int step) const { return tau_ini + (step - 1) * delta_tau; }

void validate(const SweepSchedule& s) {
  if (!(s.tau_ini > 0.0) || !(s.tau_fin > 0.0)) throw DomainError("sweep: tau_ini and tau_fin must be > 0");
  if (s.delta_tau == 0.0 || !std::isfinite(s.delta_tau)) throw DomainError("sweep: delta_tau must be nonzero");
  if ((s.tau_fin - s.tau_ini) * s.delta_tau < 0.0)
    throw DomainError("sweep: (tau_fin - tau_ini) and delta_tau have opposite signs");
  if (s.n_p < 1) throw DomainError("sweep: n_p must be >= 1");
  if (s.repetitions < 1) throw DomainError("sweep: repetitions must be >= 1");
  if (s.n_steps() > 10'000'000) throw DomainError("sweep: more than 1e7 steps");
  if (!(s.tau(s.n_steps()) > 0.0)) throw DomainError("sweep: grid reaches tau <= 0");
}

SweepSchedule make_schedule(double tau_ini, double tau_fin, double delta_tau, int n_p, int repetitions,
                            Reinit reinit) {
  SweepSchedule s{tau_ini, tau_fin, delta_tau, n_p, repetitions, reinit};
  validate(s);
  return s;
}

SweepSchedule reversed(const SweepSchedule& s) {
  SweepSchedule r = s;
  r.tau_ini = s.tau(s.n_steps());
  r.tau_fin = s.tau_ini;
  r.delta_tau = -s.delta_tau;
  return r;
}

double cumulative_time(const SweepSchedule& s, Family family, int step) {
  const double k = step;
  return s.n_p * period_factor(family) * (k * s.tau_ini + s.delta_tau * k * (k - 1) / 2.0);
}

double sweep_time(const SweepSchedule& s, Family family) {
  return cumulative_time(s, family, s.n_steps());
}

Observables observables(const QuantumState& state, const SpinSystem& system) {
  const int n = system.n_nuclei();
  const Eigen::Index d = state.rho.rows();
  const Eigen::Index h = d / 2;
  Observables o;
  o.iz.assign(n, 0.0);
  for (Eigen::Index i = 0; i < d; ++i) {
    const double p = state.rho(i, i).real();
    for (int k = 0; k < n; ++k) o.iz[k] += ((i >> (n - 1 - k)) & 1) ? -0.5 * p : 0.5 * p;
  }
  double sx = 0.0;
  for (Eigen::Index i = 0; i < h; ++i) sx += state.rho(i, i + h).real();
  o.L = 2.0 * sx;
  for (double v : o.iz) o.Mz += v;
  o.P = 2.0 * o.Mz / n;
  o.purity = purity(state);
  return o;
}

namespace {

Eigen::Vector2cd reinit_ket(Reinit r) {
  const double s = 1.0 / std::sqrt(2.0);
  switch (r) {
    case Reinit::to_ket0: return {1.0, 0.0};
    case Reinit::to_Xplus: return {s, s};
    case Reinit::to_Xminus: return {s, -s};
    case Reinit::none: break;
  }
  return {1.0, 0.0};
}

}  // namespace

Trajectory run_sweep(const QuantumState& initial, const SpinSystem& system, const ProtocolSpec& spec,
                     const SweepSchedule& schedule, const SweepOptions& options) {
  validate(schedule);
  if (initial.rho.rows() != system.dim()) throw DomainError("run_sweep: state does not match system");
  check_state(initial, true, "run_sweep initial state");

  const int ns = schedule.n_steps();
  const PeriodPropagator period(system, spec, options.method);
  auto step_unitary = [&](int step) {
    const Propagator p = period(schedule.tau(step));
    return schedule.n_p == 1 ? p.matrix : matrix_power(p.matrix, schedule.n_p);
  };

  const std::size_t bytes = std::size_t(ns) * system.dim() * system.dim() * sizeof(cplx);
  const bool cache = bytes <= options.cache_limit_bytes && (schedule.repetitions > 1 || options.threads > 1);
  std::vector<Mat> cached;
  if (cache) {
    cached.resize(ns);
    parallel_for(ns, options.threads, [&](int k) { cached[k] = step_unitary(k + 1); });
  }

  Trajectory traj;
  traj.t_sweep = sweep_time(schedule, spec.family);
  traj.t_total = traj.t_sweep * schedule.repetitions;
  if (options.t2_budget && traj.t_total > *options.t2_budget) {
    std::ostringstream w;
    w << "total sweep time " << traj.t_total << " s exceeds the T2 budget " << *options.t2_budget
      << " s (margin " << (*options.t2_budget - traj.t_total) << " s)";
    traj.warnings.push_back(w.str());
  }

  QuantumState state = initial;
  double t_offset = 0.0;
  const Eigen::Vector2cd target =
      options.reinit_state ? *options.reinit_state : reinit_ket(schedule.reinit);
  for (int rep = 1; rep <= schedule.repetitions; ++rep) {
    if (rep > 1 && (schedule.reinit != Reinit::none || options.reinit_state))
      state = reinitialize_electron(state, target);
    for (int step = 1; step <= ns; ++step) {
      const Mat u = cache ? cached[step - 1] : step_unitary(step);
      Mat rho = u * state.rho * u.adjoint();
      state.rho = 0.5 * (rho + rho.adjoint());
      check_state(state, false, "run_sweep step " + std::to_string(step) + " rep " + std::to_string(rep));
      if (options.record_steps || step == ns) {
        TrajectoryRow row;
        row.step = step;
        row.rep = rep;
        row.tau = schedule.tau(step);
        row.t_cum = t_offset + cumulative_time(schedule, spec.family, step);
        row.obs = observables(state, system);
        if (options.record_steps) traj.rows.push_back(row);
        if (step == ns) traj.rep_end.push_back(row.obs);
      }
    }
    check_state(state, true, "run_sweep end of repetition " + std::to_string(rep));
    t_offset += traj.t_sweep;
  }
  traj.final_state = std::move(state);
  return traj;
}

RepeatedPolarization run_repeated_polarization(const QuantumState& state, const SpinSystem& system,
                                               const ProtocolSpec& spec, const SweepSchedule& schedule,
                                               const SweepOptions& options, double saturation_tol) {
  if (schedule.repetitions < 2) throw DomainError("repeated polarization needs repetitions >= 2");
  if (schedule.reinit == Reinit::none && !options.reinit_state)
    throw DomainError("repeated polarization needs an electron reinitialization");
  RepeatedPolarization out;
  out.trajectory = run_sweep(state, system, spec, schedule, options);
  double prev = observables(state, system).P;
  for (const auto& o : out.trajectory.rep_end) {
    out.P.push_back(o.P);
    out.gains.push_back(o.P - prev);
    prev = o.P;
  }
  for (size_t r = 3; r <= out.P.size() && !out.saturated_at; ++r) {
    bool flat = true;
    for (size_t q = r - 2; q <= r; ++q)
      if (std::abs(out.gains[q - 1]) >= saturation_tol) flat = false;
    if (flat) out.saturated_at = static_cast<int>(r);
  }
  return out;
}

}  // namespace adpulse
