#include "adpulse/storage.hpp"

#include <cmath>

#include "adpulse/errors.hpp"
#include "adpulse/floquet.hpp"
#include "adpulse/lz_model.hpp"

namespace adpulse {

namespace {

// Basis index of |e> (x) (target in `up` or down) (x) others down.
int basis_index(int n_nuclei, int nucleus, int e, bool up) {
  int idx = (e << n_nuclei) | ((1 << n_nuclei) - 1);
  if (up) idx &= ~(1 << (n_nuclei - 1 - nucleus));
  return idx;
}

Vec basis_vector(int dim, int idx) {
  Vec v = Vec::Zero(dim);
  v(idx) = 1.0;
  return v;
}

void require_pulsepol(const ProtocolSpec& spec) {
  if (spec.family != Family::pulsepol) throw DomainError("storage requires the PulsePol protocol");
}

}  // namespace

QuantumState larmor_z_correction(const QuantumState& state, const SpinSystem& system, double wait) {
  if (wait < 0.0) throw DomainError("larmor_z_correction: wait must be >= 0");
  if (wait == 0.0) return state;
  const Mat u = segment_unitary(system, PulseSegment::free_for(wait));
  return {u * state.rho * u.adjoint(), state.n_nuclei};
}

double larmor_wait_for_phase(const SpinSystem& system, int nucleus, double current, double target) {
  // In electron branch |0> the nucleus precesses about its branch axis at omega_0; the
  // relative phase arg(c_up c_dn*) decreases at that rate.
  const auto& n = system.nuclei.at(nucleus);
  const double w = electron_weight(system.coupling, 0);
  const double omega0 = std::hypot(w * n.a_x, system.omega_L + w * n.a_z);
  const double d = std::fmod(std::fmod(current - target, kTwoPi) + kTwoPi, kTwoPi);
  return d / omega0;
}

double modulus_fidelity(const QuantumState& state, const Vec& target) {
  double f = 0.0;
  for (Eigen::Index i = 0; i < target.size(); ++i) {
    const double t = std::abs(target(i));
    if (t == 0.0) continue;
    f += t * std::sqrt(std::max(0.0, state.rho(i, i).real()));
  }
  return std::min(f, 1.0);
}

StorageResult run_storage(cplx a, cplx b, NuclearBasis nuclear_init, const SpinSystem& system,
                          const ProtocolSpec& spec, const SweepSchedule& schedule, int nucleus, int j,
                          const StorageOptions& options) {
  require_pulsepol(spec);
  validate(schedule);
  if (std::abs(std::norm(a) + std::norm(b) - 1.0) > 1e-12)
    throw DomainError("run_storage: |a|^2 + |b|^2 must be 1");
  if (nucleus < 0 || nucleus >= system.n_nuclei()) throw DomainError("run_storage: bad nucleus index");

  StorageResult res;
  res.tau_resonance = resonance_tau(spec, system, nucleus, j);
  const auto c = protocol_constants(spec);
  const double lw = lz::linewidth(system.nuclei[nucleus].a_x, res.tau_resonance, c.beta);
  const double lo = std::min(schedule.tau_ini, schedule.tau(schedule.n_steps()));
  const double hi = std::max(schedule.tau_ini, schedule.tau(schedule.n_steps()));
  if (res.tau_resonance - 2 * lw < lo || res.tau_resonance + 2 * lw > hi)
    throw DomainError("run_storage: sweep [" + std::to_string(lo * 1e6) + ", " + std::to_string(hi * 1e6) +
                      "] us does not bracket the crossing pair at " +
                      std::to_string(res.tau_resonance * 1e6) + " us");

  const int n = system.n_nuclei();
  std::vector<Eigen::Vector2cd> kets(n, kDown);
  if (nuclear_init == NuclearBasis::up) kets[nucleus] = kUp;
  const QuantumState init = pure_state(product_ket(Eigen::Vector2cd(a, b), kets), n);

  SweepOptions so = options.sweep;
  so.record_steps = false;
  SweepSchedule single = schedule;
  single.repetitions = 1;
  QuantumState state = run_sweep(init, system, spec, single, so).final_state;

  const Eigen::Index h = state.rho.rows() / 2;
  res.electron_excited = state.rho.bottomRightCorner(h, h).trace().real();
  res.electron_branch = nuclear_init == NuclearBasis::up ? ElectronBranch::ket1_reinit_needed
                                                         : ElectronBranch::ket0;
  if (res.electron_branch == ElectronBranch::ket1_reinit_needed)
    state = reinitialize_electron(state, Eigen::Vector2cd(1.0, 0.0));

  const int i_dn = basis_index(n, nucleus, 0, false);
  const int i_up = basis_index(n, nucleus, 0, true);
  const cplx coh = state.rho(i_up, i_dn);
  res.larmor_phase = std::abs(coh) > 1e-14 ? std::arg(coh) : 0.0;
  if (options.larmor_correction && std::abs(a) > 0.0 && std::abs(b) > 0.0 && std::abs(coh) > 1e-14) {
    res.larmor_wait = larmor_wait_for_phase(system, nucleus, res.larmor_phase, std::arg(b * std::conj(a)));
    state = larmor_z_correction(state, system, res.larmor_wait);
  }

  Vec target = Vec::Zero(system.dim());
  target(i_dn) = a;
  target(i_up) = b;
  res.fidelity = modulus_fidelity(state, target);
  res.strict_fidelity = std::sqrt(std::max(0.0, (target.adjoint() * state.rho * target)(0, 0).real()));
  res.final_state = std::move(state);
  return res;
}

double readout_fidelity(const StorageResult& stored, cplx a, cplx b, const SpinSystem& system,
                        const ProtocolSpec& spec, const SweepSchedule& schedule, int nucleus,
                        const StorageOptions& options) {
  require_pulsepol(spec);
  SweepOptions so = options.sweep;
  so.record_steps = false;
  SweepSchedule back = reversed(schedule);
  back.repetitions = 1;
  const QuantumState out = run_sweep(stored.final_state, system, spec, back, so).final_state;
  const int n = system.n_nuclei();
  Vec target = Vec::Zero(system.dim());
  target(basis_index(n, nucleus, 0, false)) = a;
  target(basis_index(n, nucleus, 1, false)) = b;
  return modulus_fidelity(out, target);
}

CrossingPairMap crossing_pair_map(const SpinSystem& system, const ProtocolSpec& spec, int nucleus, int j,
                                  const CrossingPairOptions& options) {
  require_pulsepol(spec);
  if (nucleus < 0 || nucleus >= system.n_nuclei()) throw DomainError("crossing_pair_map: bad nucleus index");
  CrossingPairMap out;
  const double tr = resonance_tau(spec, system, nucleus, j);
  const double beta = protocol_constants(spec).beta;
  const double lw = lz::linewidth(system.nuclei[nucleus].a_x, tr, beta);
  const double half = options.half_width_linewidths * lw;

  // Crossing pair of the isolated target spin.
  const SpinSystem one = subsystem(system, {nucleus});
  const auto spectrum = scan_spectrum(one, spec, linear_grid(tr - 3 * lw, tr + 3 * lw, options.scan_points));
  AnticrossingOptions ao;
  ao.threshold = 0.5;
  ao.include_true_crossings = true;
  double best_true = 1e300;
  for (const auto& ac : locate_anticrossings(spectrum, ao)) {
    if (ac.true_crossing) {
      if (std::abs(ac.tau_center - tr) < std::abs(best_true - tr)) best_true = ac.tau_center;
    } else if (ac.gap > out.gap) {
      out.gap = ac.gap;
      out.tau_avoided = ac.tau_center;
    }
  }
  if (out.gap == 0.0) throw InvariantError("crossing_pair_map: no avoided crossing near the resonance");
  if (best_true < 1e300) out.tau_true = best_true;

  // Other spins whose resonance falls in the sweep window.
  for (int m = 0; m < system.n_nuclei(); ++m) {
    if (m == nucleus) continue;
    const double tm = resonance_tau(spec, system, m, j);
    const double lwm = lz::linewidth(system.nuclei[m].a_x, tm, beta);
    if (std::abs(tm - out.tau_avoided) < half + 2 * lwm) {
      out.unresolved = true;
      out.overlapping.push_back(system.nuclei[m].label);
    }
  }

  out.schedule = make_schedule(out.tau_avoided - half, out.tau_avoided + half, options.delta_tau);
  const int n = system.n_nuclei();
  const char* names[4] = {"0dn", "0up", "1dn", "1up"};
  int idx[4];
  for (int s = 0; s < 4; ++s) idx[s] = basis_index(n, nucleus, s / 2, s % 2 == 1);
  for (int s = 0; s < 4; ++s) {
    const QuantumState init = pure_state(basis_vector(system.dim(), idx[s]), n);
    SweepOptions so;
    so.record_steps = false;
    const QuantumState fin = run_sweep(init, system, spec, out.schedule, so).final_state;
    int best = 0;
    for (int t = 1; t < 4; ++t)
      if (fin.rho(idx[t], idx[t]).real() > fin.rho(idx[best], idx[best]).real()) best = t;
    out.rules.push_back({names[s], names[best], fin.rho(idx[best], idx[best]).real(), best != s});
  }
  return out;
}

}  // namespace adpulse
