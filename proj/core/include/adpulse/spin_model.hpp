#pragma once

#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace adpulse {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// gamma/2pi of 13C in Hz per tesla.
inline constexpr double kGammaC13 = 10.7084e6;

inline constexpr int kMaxNuclei = 12;

// How the electron multiplies the hyperfine term A.I.
//   nv:        projector |1><1| (m_s in {0, 1}); the |0> branch precesses at bare omega_L.
//   symmetric: pseudo-spin S_z with eigenvalues +-1/2.
// The resonance condition tau_r = j pi / (omega_L + A_z/2) is the nv convention.
enum class ElectronCoupling { nv, symmetric };

enum class Axis { x, y, minus_x, minus_y };

struct NuclearSpec {
  std::string label;
  double a_x = 0.0;  // rad/s
  double a_z = 0.0;  // rad/s

  bool operator==(const NuclearSpec&) const = default;
};

struct SpinSystem {
  double omega_L = 0.0;  // rad/s
  std::vector<NuclearSpec> nuclei;
  std::optional<double> b_field;  // tesla, informational once omega_L is set
  ElectronCoupling coupling = ElectronCoupling::nv;

  int n_nuclei() const { return static_cast<int>(nuclei.size()); }
  int dim() const { return 1 << (1 + n_nuclei()); }
  int nuclear_dim() const { return 1 << n_nuclei(); }
  int index_of(const std::string& label) const;  // -1 if absent
};

double larmor_from_field(double b_tesla, double gamma_hz_per_tesla = kGammaC13);

// Throws DomainError on invariant violations.
void validate(const SpinSystem& system);

SpinSystem make_system(double omega_L, std::vector<NuclearSpec> nuclei,
                       ElectronCoupling coupling = ElectronCoupling::nv);
SpinSystem make_system_from_field(double b_tesla, std::vector<NuclearSpec> nuclei,
                                  double gamma_hz_per_tesla = kGammaC13,
                                  ElectronCoupling coupling = ElectronCoupling::nv);

// Sub-system holding only the listed nuclei (same field and coupling).
SpinSystem subsystem(const SpinSystem& system, const std::vector<int>& nuclei);

struct SpinOperators {
  Mat Sx, Sy, Sz;
  std::vector<Mat> Ix, Iy, Iz;
};

// Spin-1/2 matrices, basis order (|0>, |1>) for the electron and (up, down) for nuclei.
Eigen::Matrix2cd pauli_half(Axis axis);
Eigen::Matrix2cd sz_half();

// Embeds a single-site operator; site 0 is the most significant tensor factor.
Mat embed(const Eigen::Matrix2cd& op, int site, int n_sites);

SpinOperators build_spin_operators(const SpinSystem& system);

// Electron multiplier of the hyperfine term in electron basis state s (0 or 1).
double electron_weight(ElectronCoupling coupling, int s);

// Nuclear precession frequency averaged over the two electron branches
// (omega_L + A_z/2 in the nv convention).
double mean_nuclear_frequency(const SpinSystem& system, int nucleus);

Mat free_hamiltonian(const SpinSystem& system);
Mat drive_hamiltonian(const SpinSystem& system, double omega, Axis axis);

double hermiticity_error(const Mat& h);

}  // namespace adpulse
