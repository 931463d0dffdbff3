#pragma once

#include <map>
#include <utility>

#include "adpulse/protocols.hpp"
#include "adpulse/quantum_state.hpp"

namespace adpulse {

// fast: per-branch, per-nucleus 2x2 rotations composed by tensor product (free segments)
//       and closed-form electron rotations (ideal pulses).
// dense: exp(-i H t) through a Hermitian eigendecomposition of the full Hamiltonian.
enum class ExpMethod { fast, dense };

struct Propagator {
  Mat matrix;
  double tau = 0.0;
  double period = 0.0;
};

// exp(-i h t) for Hermitian h.
Mat hermitian_expm(const Mat& h, double t);

Mat segment_unitary(const SpinSystem& system, const PulseSegment& segment,
                    ExpMethod method = ExpMethod::fast);

Propagator one_period_propagator(const SpinSystem& system, const PulseSequence& sequence,
                                 ExpMethod method = ExpMethod::fast);

// U^n by repeated squaring.
Mat matrix_power(const Mat& u, long long n);

QuantumState propagate_state(const QuantumState& state, const Propagator& propagator,
                             long long n_periods);

double unitarity_error(const Mat& u);

// Builds U(T) at many tau values for one (system, protocol) pair, reusing the
// Hamiltonian eigendecomposition and pulse unitaries.
class PeriodPropagator {
 public:
  PeriodPropagator(SpinSystem system, ProtocolSpec spec, ExpMethod method = ExpMethod::fast);

  Propagator operator()(double tau) const;

  const SpinSystem& system() const { return system_; }
  const ProtocolSpec& spec() const { return spec_; }

 private:
  void apply_free(Mat& u, double t) const;
  void apply_pulse(Mat& u, const PulseSegment& seg) const;

  SpinSystem system_;
  ProtocolSpec spec_;
  ExpMethod method_;
  Mat h_free_;
  Eigen::VectorXd h_vals_;
  Mat h_vecs_;
  std::map<std::pair<int, double>, Mat> finite_pulses_;  // (axis, angle) -> U, finite-pulse mode
};

}  // namespace adpulse
