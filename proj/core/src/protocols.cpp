#include "adpulse/protocols.hpp"

#include <algorithm>
#include <cmath>

#include "adpulse/errors.hpp"

namespace adpulse {

namespace {

enum class Align { start, center, end };

struct PulseEvent {
  double t;
  Axis axis;
  double angle;
  Align align;
};

std::vector<PulseEvent> pulse_events(const ProtocolSpec& spec, double tau) {
  std::vector<PulseEvent> ev;
  if (spec.family == Family::pulsepol) {
    // Time order B1 B2 B1 B2.
    //   B1 = (pi/2)_y  tau/2  (pi)_-x  tau/2  (pi/2)_y
    //   B2 = (pi/2)_-x tau/2  (pi)_y   tau/2  (pi/2)_-x
    const double h = kPi / 2;
    for (int b = 0; b < 4; ++b) {
      const double t0 = b * tau;
      const bool first = (b % 2 == 0);
      const Axis edge = first ? Axis::y : Axis::minus_x;
      const Axis mid = first ? Axis::minus_x : Axis::y;
      ev.push_back({t0, edge, h, Align::start});
      ev.push_back({t0 + tau / 2, mid, kPi, Align::center});
      ev.push_back({t0 + tau, edge, h, Align::end});
    }
    return ev;
  }
  const double theta = kPi + spec.delta_theta;
  if (spec.layout == CellLayout::symmetric) {
    ev.push_back({tau / 2, Axis::x, theta, Align::center});
    ev.push_back({1.5 * tau, Axis::x, theta, Align::center});
  } else {
    ev.push_back({tau, Axis::x, theta, Align::center});
    ev.push_back({2 * tau, Axis::x, theta, Align::end});
  }
  return ev;
}

}  // namespace

void validate(const ProtocolSpec& spec) {
  if (!(std::abs(spec.delta_theta) < kPi / 2)) throw DomainError("|delta_theta| must be < pi/2");
  if (spec.family == Family::cpmg && spec.delta_theta != 0.0)
    throw DomainError("CPMG requires delta_theta = 0 (use PolCPMG for over-rotation)");
  if (spec.family == Family::pulsepol && spec.delta_theta != 0.0)
    throw DomainError("PulsePol does not take delta_theta");
  if (!(spec.t_pi >= 0.0)) throw DomainError("t_pi must be >= 0");
}

ProtocolSpec make_protocol(Family family, double delta_theta, double t_pi, CellLayout layout) {
  ProtocolSpec spec{family, delta_theta, t_pi, layout};
  validate(spec);
  return spec;
}

std::string to_string(Family family) {
  switch (family) {
    case Family::cpmg: return "cpmg";
    case Family::polcpmg: return "polcpmg";
    case Family::pulsepol: return "pulsepol";
  }
  return "?";
}

Family family_from_string(const std::string& name) {
  if (name == "cpmg") return Family::cpmg;
  if (name == "polcpmg") return Family::polcpmg;
  if (name == "pulsepol") return Family::pulsepol;
  throw ConfigError("unknown protocol '" + name + "' (expected cpmg|polcpmg|pulsepol)");
}

int PulseSequence::pulse_count() const {
  return static_cast<int>(std::count_if(segments.begin(), segments.end(), [](const auto& s) {
    return s.kind == PulseSegment::Kind::pulse;
  }));
}

double PulseSequence::total_rotation() const {
  double sum = 0.0;
  for (const auto& s : segments) {
    if (s.kind != PulseSegment::Kind::pulse) continue;
    const bool neg = s.axis == Axis::minus_x || s.axis == Axis::minus_y;
    sum += neg ? -s.angle : s.angle;
  }
  return sum;
}

double period_factor(Family family) { return family == Family::pulsepol ? 4.0 : 2.0; }

PulseSequence build_sequence(const ProtocolSpec& spec, double tau) {
  validate(spec);
  if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("build_sequence: tau must be > 0");
  PulseSequence seq;
  seq.tau = tau;
  seq.period = period_factor(spec.family) * tau;

  // Occupied interval of every pulse within [0, period].
  struct Slot {
    double a, b;
    PulseEvent ev;
  };
  std::vector<Slot> slots;
  const double tp = spec.t_pi;
  for (const auto& ev : pulse_events(spec, tau)) {
    double a = ev.t, b = ev.t;
    if (tp > 0.0) {
      switch (ev.align) {
        case Align::start: b = ev.t + tp; break;
        case Align::center: a = ev.t - tp / 2; b = ev.t + tp / 2; break;
        case Align::end: a = ev.t - tp; break;
      }
    }
    slots.push_back({a, b, ev});
  }
  const double eps = 1e-15 * seq.period;
  double cursor = 0.0;
  for (const auto& s : slots) {
    if (s.a < cursor - eps || s.b > seq.period + eps)
      throw DomainError("build_sequence: pulses overlap (t_pi too long for tau)");
    const double gap = std::max(0.0, s.a - cursor);
    if (gap > 0.0) seq.segments.push_back(PulseSegment::free_for(gap));
    seq.segments.push_back(PulseSegment::rotation(s.ev.axis, s.ev.angle, s.b - s.a));
    cursor = std::max(cursor, s.b);
  }
  if (seq.period - cursor > 0.0) seq.segments.push_back(PulseSegment::free_for(seq.period - cursor));
  return seq;
}

double resonance_tau(const ProtocolSpec& spec, const SpinSystem& system, int nucleus, int j) {
  if (j < 1 || j % 2 == 0) throw DomainError("resonance_tau: harmonic j must be odd and >= 1");
  if (nucleus < 0 || nucleus >= system.n_nuclei())
    throw DomainError("resonance_tau: nucleus index out of range");
  const double w = mean_nuclear_frequency(system, nucleus);
  const double t = j * kPi / w;
  return spec.family == Family::pulsepol ? t / 2 : t;
}

ProtocolConstants protocol_constants(const ProtocolSpec& spec) {
  if (spec.family == Family::pulsepol) return {6 * kPi / (2 + std::sqrt(2.0)), 4.0};
  return {kPi + spec.delta_theta, 2.0};
}

}  // namespace adpulse
