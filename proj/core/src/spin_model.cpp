#include "adpulse/spin_model.hpp"

#include <cmath>
#include <set>

#include "adpulse/errors.hpp"

namespace adpulse {

int SpinSystem::index_of(const std::string& label) const {
  for (int n = 0; n < n_nuclei(); ++n)
    if (nuclei[n].label == label) return n;
  return -1;
}

double larmor_from_field(double b_tesla, double gamma_hz_per_tesla) {
  return kTwoPi * gamma_hz_per_tesla * b_tesla;
}

void validate(const SpinSystem& system) {
  if (system.nuclei.empty()) throw DomainError("spin system needs at least one nucleus");
  if (system.n_nuclei() > kMaxNuclei)
    throw DomainError("spin system has " + std::to_string(system.n_nuclei()) +
                      " nuclei; the dense-matrix cap is " + std::to_string(kMaxNuclei));
  if (!(system.omega_L > 0.0)) throw DomainError("omega_L must be positive");
  std::set<std::string> seen;
  for (const auto& n : system.nuclei) {
    if (n.label.empty()) throw DomainError("nuclear label must not be empty");
    if (!seen.insert(n.label).second) throw DomainError("duplicate nuclear label '" + n.label + "'");
    if (!(n.a_x >= 0.0)) throw DomainError("nucleus '" + n.label + "': a_x must be >= 0");
    if (!std::isfinite(n.a_z)) throw DomainError("nucleus '" + n.label + "': a_z not finite");
  }
}

SpinSystem make_system(double omega_L, std::vector<NuclearSpec> nuclei, ElectronCoupling coupling) {
  SpinSystem s;
  s.omega_L = omega_L;
  s.nuclei = std::move(nuclei);
  s.coupling = coupling;
  validate(s);
  return s;
}

SpinSystem make_system_from_field(double b_tesla, std::vector<NuclearSpec> nuclei,
                                  double gamma_hz_per_tesla, ElectronCoupling coupling) {
  SpinSystem s = make_system(larmor_from_field(b_tesla, gamma_hz_per_tesla), std::move(nuclei),
                             coupling);
  s.b_field = b_tesla;
  return s;
}

SpinSystem subsystem(const SpinSystem& system, const std::vector<int>& nuclei) {
  SpinSystem s = system;
  s.nuclei.clear();
  for (int n : nuclei) {
    if (n < 0 || n >= system.n_nuclei()) throw DomainError("subsystem: nucleus index out of range");
    s.nuclei.push_back(system.nuclei[n]);
  }
  validate(s);
  return s;
}

Eigen::Matrix2cd pauli_half(Axis axis) {
  Eigen::Matrix2cd m;
  switch (axis) {
    case Axis::x:
    case Axis::minus_x:
      m << 0.0, 0.5, 0.5, 0.0;
      break;
    case Axis::y:
    case Axis::minus_y:
      m << 0.0, cplx(0, -0.5), cplx(0, 0.5), 0.0;
      break;
  }
  if (axis == Axis::minus_x || axis == Axis::minus_y) m = -m;
  return m;
}

Eigen::Matrix2cd sz_half() {
  Eigen::Matrix2cd m;
  m << 0.5, 0.0, 0.0, -0.5;
  return m;
}

Mat embed(const Eigen::Matrix2cd& op, int site, int n_sites) {
  // Kronecker product I_{2^site} (x) op (x) I_{2^(n-site-1)} written out directly.
  const int d = 1 << n_sites;
  const int stride = 1 << (n_sites - site - 1);
  Mat m = Mat::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    const int bi = (i / stride) & 1;
    for (int bj = 0; bj < 2; ++bj) {
      const cplx v = op(bi, bj);
      if (v == cplx(0.0)) continue;
      const int j = i + (bj - bi) * stride;
      m(i, j) = v;
    }
  }
  return m;
}

SpinOperators build_spin_operators(const SpinSystem& system) {
  if (system.n_nuclei() > kMaxNuclei)
    throw DomainError("build_spin_operators: dimension overflow (" +
                      std::to_string(system.n_nuclei()) + " nuclei)");
  const int sites = 1 + system.n_nuclei();
  SpinOperators ops;
  ops.Sx = embed(pauli_half(Axis::x), 0, sites);
  ops.Sy = embed(pauli_half(Axis::y), 0, sites);
  ops.Sz = embed(sz_half(), 0, sites);
  for (int n = 0; n < system.n_nuclei(); ++n) {
    ops.Ix.push_back(embed(pauli_half(Axis::x), n + 1, sites));
    ops.Iy.push_back(embed(pauli_half(Axis::y), n + 1, sites));
    ops.Iz.push_back(embed(sz_half(), n + 1, sites));
  }
  return ops;
}

double electron_weight(ElectronCoupling coupling, int s) {
  if (coupling == ElectronCoupling::nv) return s == 0 ? 0.0 : 1.0;
  return s == 0 ? 0.5 : -0.5;
}

double mean_nuclear_frequency(const SpinSystem& system, int nucleus) {
  const double w = 0.5 * (electron_weight(system.coupling, 0) + electron_weight(system.coupling, 1));
  return system.omega_L + w * system.nuclei.at(nucleus).a_z;
}

Mat free_hamiltonian(const SpinSystem& system) {
  validate(system);
  const int sites = 1 + system.n_nuclei();
  Eigen::Matrix2cd ce = Eigen::Matrix2cd::Zero();
  ce(0, 0) = electron_weight(system.coupling, 0);
  ce(1, 1) = electron_weight(system.coupling, 1);
  const Mat electron = embed(ce, 0, sites);
  const int d = system.dim();
  Mat h = Mat::Zero(d, d);
  for (int n = 0; n < system.n_nuclei(); ++n) {
    const auto& nuc = system.nuclei[n];
    const Mat iz = embed(sz_half(), n + 1, sites);
    const Mat ix = embed(pauli_half(Axis::x), n + 1, sites);
    h += system.omega_L * iz + electron * (nuc.a_x * ix + nuc.a_z * iz);
  }
  return h;
}

Mat drive_hamiltonian(const SpinSystem& system, double omega, Axis axis) {
  if (omega < 0.0) throw DomainError("drive_hamiltonian: omega must be >= 0");
  return omega * embed(pauli_half(axis), 0, 1 + system.n_nuclei());
}

double hermiticity_error(const Mat& h) { return (h - h.adjoint()).cwiseAbs().maxCoeff(); }

}  // namespace adpulse
