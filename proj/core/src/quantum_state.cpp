#include "adpulse/quantum_state.hpp"

#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

#include "adpulse/errors.hpp"

namespace adpulse {

Eigen::Vector2cd ElectronState::ket() const {
  const double r = 1.0 / std::sqrt(2.0);
  switch (kind) {
    case Kind::ket0: return {1.0, 0.0};
    case Kind::ket1: return {0.0, 1.0};
    case Kind::xplus: return {r, r};
    case Kind::xminus: return {r, -r};
    case Kind::custom: break;
  }
  const double norm = std::norm(a) + std::norm(b);
  if (std::abs(norm - 1.0) > 1e-12)
    throw DomainError("custom electron amplitudes must satisfy |a|^2 + |b|^2 = 1");
  return {a, b};
}

Vec product_ket(const Eigen::Vector2cd& electron, const std::vector<Eigen::Vector2cd>& nuclei) {
  Vec v = electron;
  for (const auto& k : nuclei) {
    Vec next(v.size() * 2);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      next(2 * i) = v(i) * k(0);
      next(2 * i + 1) = v(i) * k(1);
    }
    v = std::move(next);
  }
  return v;
}

QuantumState pure_state(const Vec& psi, int n_nuclei) {
  if (psi.size() != (Eigen::Index(1) << (1 + n_nuclei)))
    throw DomainError("pure_state: vector size does not match register");
  return {psi * psi.adjoint(), n_nuclei};
}

QuantumState make_initial_state(const SpinSystem& system, const ElectronState& electron,
                                const NuclearState& nuclear) {
  const int n = system.n_nuclei();
  const Eigen::Vector2cd e = electron.ket();
  const Mat rho_e = e * e.adjoint();
  Mat rho_n;
  switch (nuclear.kind) {
    case NuclearState::Kind::maximally_mixed: {
      const int dn = system.nuclear_dim();
      rho_n = Mat::Identity(dn, dn) / double(dn);
      break;
    }
    case NuclearState::Kind::all_down:
    case NuclearState::Kind::all_up:
    case NuclearState::Kind::custom_product: {
      std::vector<Eigen::Vector2cd> kets;
      if (nuclear.kind == NuclearState::Kind::custom_product) {
        if (static_cast<int>(nuclear.product.size()) != n)
          throw DomainError("custom nuclear product needs one ket per nucleus");
        for (const auto& k : nuclear.product) {
          if (std::abs(k.squaredNorm() - 1.0) > 1e-12)
            throw DomainError("custom nuclear ket not normalized");
          kets.push_back(k);
        }
      } else {
        kets.assign(n, nuclear.kind == NuclearState::Kind::all_up ? kUp : kDown);
      }
      Vec psi = product_ket(Eigen::Vector2cd(1.0, 0.0), kets).head(Eigen::Index(1) << n);
      rho_n = psi * psi.adjoint();
      break;
    }
  }
  QuantumState s;
  s.n_nuclei = n;
  s.rho = Eigen::kroneckerProduct(rho_e, rho_n).eval();
  return s;
}

Mat trace_out_electron(const QuantumState& state) {
  const Eigen::Index h = state.rho.rows() / 2;
  return state.rho.topLeftCorner(h, h) + state.rho.bottomRightCorner(h, h);
}

QuantumState reinitialize_electron(const QuantumState& state, const Eigen::Vector2cd& electron) {
  const Mat rho_n = trace_out_electron(state);
  const Mat rho_e = electron * electron.adjoint();
  return {Eigen::kroneckerProduct(rho_e, rho_n).eval(), state.n_nuclei};
}

double purity(const QuantumState& state) {
  // tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
  return state.rho.cwiseAbs2().sum();
}

StateCheck check_state(const QuantumState& state, bool check_positivity, const std::string& context,
                       double tol) {
  StateCheck c;
  c.trace_error = std::abs(state.rho.trace() - cplx(1.0));
  c.hermiticity_error = (state.rho - state.rho.adjoint()).cwiseAbs().maxCoeff();
  if (c.trace_error > tol)
    throw InvariantError(context + ": trace deviates from 1 by " + std::to_string(c.trace_error));
  if (c.hermiticity_error > tol)
    throw InvariantError(context + ": density matrix not Hermitian (" +
                         std::to_string(c.hermiticity_error) + ")");
  if (check_positivity) {
    const Mat herm = 0.5 * (state.rho + state.rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> es(herm, Eigen::EigenvaluesOnly);
    c.min_eigenvalue = es.eigenvalues().minCoeff();
    if (c.min_eigenvalue < -1e-9)
      throw InvariantError(context + ": density matrix not positive (min eigenvalue " +
                           std::to_string(c.min_eigenvalue) + ")");
  }
  return c;
}

}  // namespace adpulse
