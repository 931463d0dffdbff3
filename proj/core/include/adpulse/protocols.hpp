#pragma once

#include <string>
#include <vector>

#include "adpulse/spin_model.hpp"

namespace adpulse {

enum class Family { cpmg, polcpmg, pulsepol };

// CPMG-family unit cell: symmetric tau/2-P-tau-P-tau/2, or tau-P-tau-P.
enum class CellLayout { symmetric, asymmetric };

struct ProtocolSpec {
  Family family = Family::cpmg;
  double delta_theta = 0.0;  // rad, PolCPMG over-rotation
  double t_pi = 0.0;         // s, 0 selects ideal instantaneous pulses
  CellLayout layout = CellLayout::symmetric;

  bool operator==(const ProtocolSpec&) const = default;
};

ProtocolSpec make_protocol(Family family, double delta_theta = 0.0, double t_pi = 0.0,
                           CellLayout layout = CellLayout::symmetric);
void validate(const ProtocolSpec& spec);

std::string to_string(Family family);
Family family_from_string(const std::string& name);  // throws ConfigError

struct PulseSegment {
  enum class Kind { free, pulse };
  Kind kind = Kind::free;
  double duration = 0.0;  // s
  Axis axis = Axis::x;    // pulse only
  double angle = 0.0;     // rad, pulse only

  static PulseSegment free_for(double duration) { return {Kind::free, duration, Axis::x, 0.0}; }
  static PulseSegment rotation(Axis axis, double angle, double duration = 0.0) {
    return {Kind::pulse, duration, axis, angle};
  }
};

struct PulseSequence {
  std::vector<PulseSegment> segments;  // time order
  double period = 0.0;
  double tau = 0.0;

  int pulse_count() const;
  double total_rotation() const;  // signed sum, -x and -y count negative
};

// Period factor T / tau: 2 for the CPMG family, 4 for PulsePol.
double period_factor(Family family);

PulseSequence build_sequence(const ProtocolSpec& spec, double tau);

// Resonant pulse spacing of harmonic j (odd) for one nucleus.
//   CPMG/PolCPMG: j pi / omega_I,  PulsePol: j pi / (2 omega_I),
// with omega_I the branch-averaged nuclear frequency (omega_L + A_z/2 in the nv convention).
double resonance_tau(const ProtocolSpec& spec, const SpinSystem& system, int nucleus, int j);

struct ProtocolConstants {
  double beta = 0.0;
  double T_r_factor = 0.0;
};

ProtocolConstants protocol_constants(const ProtocolSpec& spec);

}  // namespace adpulse
