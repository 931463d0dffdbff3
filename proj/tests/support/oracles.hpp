#pragma once

// Reference implementations used only by the tests. They share no code with the library
// beyond the plain Eigen containers: operators come from explicit Kronecker products,
// exponentials from a Taylor series with scaling and squaring, and pulse sequences are
// assembled here from their textbook description.

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

constexpr double kPi = 3.14159265358979323846;

Mat kron(const Mat& a, const Mat& b);
Mat identity(int dim);

// Spin-1/2 matrices (eigenvalues +-1/2). 'x', 'y', 'z'.
Mat spin(char axis);

// op acting on `site` of an n-site register, built as I (x) ... (x) op (x) ... (x) I.
Mat site_operator(const Mat& op, int site, int n_sites);

struct Spin {
  double a_x = 0.0;  // rad/s
  double a_z = 0.0;
};

// H_free with the electron coupling weight c(m): m = 0 -> w0, m = 1 -> w1.
// nv: (w0, w1) = (0, 1); symmetric: (+1/2, -1/2).
Mat free_hamiltonian(double omega_L, const std::vector<Spin>& spins, double w0 = 0.0, double w1 = 1.0);

// exp(a), any square matrix.
Mat expm(const Mat& a);

// exp(-i h t) as (exp(-i h t / m))^m.
Mat sliced_evolution(const Mat& h, double t, int slices);

enum class Protocol { cpmg, polcpmg, pulsepol };

// One period with instantaneous pulses. Free evolution is split into `slices` pieces.
Mat period_unitary(double omega_L, const std::vector<Spin>& spins, Protocol protocol, double delta_theta,
                   double tau, int slices = 1);

// Signed rotation angles of the pulses in one period, in time order.
std::vector<double> pulse_angles(Protocol protocol, double delta_theta);

// Pure-state ensemble sweep: each (weight, ket) is propagated through n_p periods per tau.
// Returns P = (2/N) sum <I_z> after every tau step.
std::vector<double> reference_sweep(double omega_L, const std::vector<Spin>& spins, Protocol protocol,
                                    double delta_theta, const std::vector<double>& taus, int n_p,
                                    const std::vector<std::pair<double, Vec>>& ensemble, int slices = 1);

// Eigenphases of a unitary from Eigen's general complex eigensolver, sorted ascending.
std::vector<double> eigenphases(const Mat& u);

// Local minima of the adjacent (sorted, cyclic) eigenphase gaps on a dense tau grid that
// stay above `floor`: candidate avoided-crossing positions.
struct GapMinimum {
  double tau;
  double gap;
};
std::vector<GapMinimum> dense_gap_minima(double omega_L, const std::vector<Spin>& spins, Protocol protocol,
                                         double delta_theta, double tau_lo, double tau_hi, int points,
                                         double floor, double ceiling);

}  // namespace oracle
