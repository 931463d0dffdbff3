#pragma once

#include <vector>

#include "adpulse/spin_model.hpp"

namespace adpulse {

// Density matrix over electron (x) nuclei; site 0 = electron, then nuclei in list order.
struct QuantumState {
  Mat rho;
  int n_nuclei = 0;

  int dim() const { return static_cast<int>(rho.rows()); }
};

struct ElectronState {
  enum class Kind { ket0, ket1, xplus, xminus, custom };
  Kind kind = Kind::xplus;
  cplx a = 1.0, b = 0.0;  // custom: a|0> + b|1>

  static ElectronState custom(cplx a, cplx b) { return {Kind::custom, a, b}; }
  Eigen::Vector2cd ket() const;
};

struct NuclearState {
  enum class Kind { all_down, all_up, maximally_mixed, custom_product };
  Kind kind = Kind::maximally_mixed;
  std::vector<Eigen::Vector2cd> product;  // custom_product: one (up, down) ket per nucleus

  static NuclearState custom(std::vector<Eigen::Vector2cd> kets) {
    return {Kind::custom_product, std::move(kets)};
  }
};

inline const Eigen::Vector2cd kUp{1.0, 0.0};
inline const Eigen::Vector2cd kDown{0.0, 1.0};

QuantumState make_initial_state(const SpinSystem& system, const ElectronState& electron,
                                const NuclearState& nuclear);

QuantumState pure_state(const Vec& psi, int n_nuclei);

// Product ket electron (x) nucleus_1 (x) ... (x) nucleus_N.
Vec product_ket(const Eigen::Vector2cd& electron, const std::vector<Eigen::Vector2cd>& nuclei);

// Nuclear reduced density matrix (electron traced out).
Mat trace_out_electron(const QuantumState& state);

// Replace the electron by a pure state, keeping the nuclear reduced state.
QuantumState reinitialize_electron(const QuantumState& state, const Eigen::Vector2cd& electron);

struct StateCheck {
  double trace_error = 0.0;
  double hermiticity_error = 0.0;
  double min_eigenvalue = 0.0;  // only when positivity was checked
};

// Throws InvariantError with `context` if trace/hermiticity (and optionally positivity) fail.
StateCheck check_state(const QuantumState& state, bool check_positivity, const std::string& context,
                       double tol = 1e-10);

double purity(const QuantumState& state);

}  // namespace adpulse
