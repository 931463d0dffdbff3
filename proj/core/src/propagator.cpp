#include "adpulse/propagator.hpp"

#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

#include "adpulse/errors.hpp"

namespace adpulse {

namespace {

Eigen::Matrix2cd rotation2(double nx, double ny, double nz, double angle) {
  // exp(-i angle n.sigma/2) for a unit vector n.
  const double c = std::cos(angle / 2), s = std::sin(angle / 2);
  Eigen::Matrix2cd r;
  r << cplx(c, -s * nz), cplx(-s * ny, -s * nx), cplx(s * ny, -s * nx), cplx(c, s * nz);
  return r;
}

Eigen::Matrix2cd electron_rotation(Axis axis, double angle) {
  switch (axis) {
    case Axis::x: return rotation2(1, 0, 0, angle);
    case Axis::y: return rotation2(0, 1, 0, angle);
    case Axis::minus_x: return rotation2(-1, 0, 0, angle);
    case Axis::minus_y: return rotation2(0, -1, 0, angle);
  }
  return Eigen::Matrix2cd::Identity();
}

// Free evolution inside electron branch s as a 2^N x 2^N tensor product.
Mat branch_block(const SpinSystem& system, int s, double t) {
  const double w = electron_weight(system.coupling, s);
  Mat block = Mat::Identity(1, 1);
  for (const auto& nuc : system.nuclei) {
    const double ox = w * nuc.a_x;
    const double oz = system.omega_L + w * nuc.a_z;
    const double om = std::hypot(ox, oz);
    Eigen::Matrix2cd r = Eigen::Matrix2cd::Identity();
    if (om > 0.0) r = rotation2(ox / om, 0.0, oz / om, om * t);
    block = Eigen::kroneckerProduct(block, r).eval();
  }
  return block;
}

// u <- (R (x) 1) u, done as a row mix of the two electron halves.
void mix_electron_rows(Mat& u, const Eigen::Matrix2cd& r) {
  const Eigen::Index h = u.rows() / 2;
  Mat top = u.topRows(h);
  Mat bottom = u.bottomRows(h);
  u.topRows(h) = r(0, 0) * top + r(0, 1) * bottom;
  u.bottomRows(h) = r(1, 0) * top + r(1, 1) * bottom;
}

int axis_key(Axis a) { return static_cast<int>(a); }

}  // namespace

Mat hermitian_expm(const Mat& h, double t) {
  if (hermiticity_error(h) > 1e-9 * std::max(1.0, h.cwiseAbs().maxCoeff()))
    throw InvariantError("hermitian_expm: input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  if (es.info() != Eigen::Success) throw InvariantError("hermitian_expm: eigensolver failed");
  const Eigen::VectorXcd phases =
      (es.eigenvalues().cast<cplx>() * cplx(0.0, -t)).array().exp().matrix();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Mat segment_unitary(const SpinSystem& system, const PulseSegment& segment, ExpMethod method) {
  const int d = system.dim();
  if (segment.duration < 0.0) throw DomainError("segment_unitary: negative duration");
  if (segment.kind == PulseSegment::Kind::pulse && segment.duration == 0.0) {
    Mat u = Mat::Identity(d, d);
    if (method == ExpMethod::fast) {
      mix_electron_rows(u, electron_rotation(segment.axis, segment.angle));
      return u;
    }
    return hermitian_expm(drive_hamiltonian(system, 1.0, segment.axis), segment.angle);
  }
  if (segment.kind == PulseSegment::Kind::pulse) {
    const double omega = segment.angle / segment.duration;
    return hermitian_expm(free_hamiltonian(system) + drive_hamiltonian(system, omega, segment.axis),
                          segment.duration);
  }
  if (method == ExpMethod::dense) return hermitian_expm(free_hamiltonian(system), segment.duration);
  const int h = d / 2;
  Mat u = Mat::Zero(d, d);
  u.topLeftCorner(h, h) = branch_block(system, 0, segment.duration);
  u.bottomRightCorner(h, h) = branch_block(system, 1, segment.duration);
  return u;
}

Propagator one_period_propagator(const SpinSystem& system, const PulseSequence& sequence,
                                 ExpMethod method) {
  const int d = system.dim();
  Mat u = Mat::Identity(d, d);
  for (const auto& seg : sequence.segments) u = segment_unitary(system, seg, method) * u;
  const double err = unitarity_error(u);
  if (err > 1e-10)
    throw InvariantError("one_period_propagator: unitarity lost (" + std::to_string(err) + ")");
  return {std::move(u), sequence.tau, sequence.period};
}

Mat matrix_power(const Mat& u, long long n) {
  if (n < 0) throw DomainError("matrix_power: negative exponent");
  Mat result = Mat::Identity(u.rows(), u.cols());
  Mat base = u;
  while (n > 0) {
    if (n & 1) result = (base * result).eval();
    n >>= 1;
    if (n > 0) base = (base * base).eval();
  }
  return result;
}

QuantumState propagate_state(const QuantumState& state, const Propagator& propagator,
                             long long n_periods) {
  if (state.rho.rows() != propagator.matrix.rows())
    throw DomainError("propagate_state: dimension mismatch");
  if (n_periods < 0) throw DomainError("propagate_state: negative period count");
  if (n_periods == 0) return state;
  const Mat un = n_periods == 1 ? propagator.matrix : matrix_power(propagator.matrix, n_periods);
  QuantumState out{un * state.rho * un.adjoint(), state.n_nuclei};
  return out;
}

double unitarity_error(const Mat& u) {
  return (u.adjoint() * u - Mat::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

PeriodPropagator::PeriodPropagator(SpinSystem system, ProtocolSpec spec, ExpMethod method)
    : system_(std::move(system)), spec_(spec), method_(method) {
  validate(system_);
  validate(spec_);
  if (method_ == ExpMethod::dense || spec_.t_pi > 0.0) {
    h_free_ = free_hamiltonian(system_);
    Eigen::SelfAdjointEigenSolver<Mat> es(h_free_);
    if (es.info() != Eigen::Success) throw InvariantError("free Hamiltonian eigensolver failed");
    h_vals_ = es.eigenvalues();
    h_vecs_ = es.eigenvectors();
  }
  if (spec_.t_pi > 0.0) {
    // Pulse set does not depend on tau; any admissible tau exposes it.
    const auto seq = build_sequence(spec_, 10.0 * spec_.t_pi);
    for (const auto& s : seq.segments) {
      if (s.kind != PulseSegment::Kind::pulse) continue;
      const auto key = std::make_pair(axis_key(s.axis), s.angle);
      if (finite_pulses_.count(key)) continue;
      finite_pulses_[key] = segment_unitary(system_, s, ExpMethod::dense);
    }
  }
}

void PeriodPropagator::apply_free(Mat& u, double t) const {
  if (t == 0.0) return;
  if (method_ == ExpMethod::dense) {
    const Eigen::VectorXcd ph = (h_vals_.cast<cplx>() * cplx(0.0, -t)).array().exp().matrix();
    u = (h_vecs_ * (ph.asDiagonal() * (h_vecs_.adjoint() * u))).eval();
    return;
  }
  const Eigen::Index h = u.rows() / 2;
  const Mat b0 = branch_block(system_, 0, t);
  const Mat b1 = branch_block(system_, 1, t);
  u.topRows(h) = (b0 * u.topRows(h)).eval();
  u.bottomRows(h) = (b1 * u.bottomRows(h)).eval();
}

void PeriodPropagator::apply_pulse(Mat& u, const PulseSegment& seg) const {
  if (seg.duration == 0.0) {
    if (method_ == ExpMethod::fast) {
      mix_electron_rows(u, electron_rotation(seg.axis, seg.angle));
    } else {
      u = (segment_unitary(system_, seg, ExpMethod::dense) * u).eval();
    }
    return;
  }
  const auto it = finite_pulses_.find(std::make_pair(axis_key(seg.axis), seg.angle));
  if (it == finite_pulses_.end()) throw InvariantError("finite pulse unitary missing from cache");
  u = (it->second * u).eval();
}

Propagator PeriodPropagator::operator()(double tau) const {
  const auto seq = build_sequence(spec_, tau);
  const int d = system_.dim();
  Mat u = Mat::Identity(d, d);
  for (const auto& seg : seq.segments) {
    if (seg.kind == PulseSegment::Kind::free)
      apply_free(u, seg.duration);
    else
      apply_pulse(u, seg);
  }
  const double err = unitarity_error(u);
  if (err > 1e-10)
    throw InvariantError("unitarity lost at tau = " + std::to_string(tau) + " s (" +
                         std::to_string(err) + ")");
  return {std::move(u), seq.tau, seq.period};
}

}  // namespace adpulse
