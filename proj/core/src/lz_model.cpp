#include "adpulse/lz_model.hpp"

#include <algorithm>
#include <cmath>

#include "adpulse/errors.hpp"

namespace adpulse::lz {

void validate(const LZParams& p) {
  if (!(p.a_x >= 0.0)) throw DomainError("LZ: a_x must be >= 0");
  if (!(p.tau_r > 0.0) || !(p.T_r > 0.0) || !(p.beta > 0.0) || !(p.tau_ini > 0.0))
    throw DomainError("LZ: tau_r, T_r, beta and tau_ini must be > 0");
  if (p.delta_tau == 0.0) throw DomainError("LZ: delta_tau must be nonzero");
  if (p.reading == PeriodReading::resonance && !(p.T_period > 0.0))
    throw DomainError("LZ: T_period must be > 0");
}

LZParams make_params(double a_x, double tau_r, const ProtocolSpec& spec, double delta_tau,
                     double tau_ini, PeriodReading reading) {
  const auto c = protocol_constants(spec);
  LZParams p;
  p.a_x = a_x;
  p.tau_r = tau_r;
  p.T_r = c.T_r_factor * tau_r;
  p.beta = c.beta;
  p.delta_tau = delta_tau;
  p.tau_ini = tau_ini;
  p.T_period = p.T_r;
  p.reading = reading;
  p.period_factor = period_factor(spec.family);
  validate(p);
  return p;
}

double phi(double tau, const LZParams& p) {
  const double T = p.reading == PeriodReading::resonance ? p.T_period : p.period_factor * tau;
  return 4.0 * kPi * (tau - p.tau_r) / tau * std::sqrt(T / std::abs(p.delta_tau));
}

double sweep_fraction(double tau, const LZParams& p) {
  const double f = (std::atan(phi(tau, p)) - std::atan(phi(p.tau_ini, p))) / kPi;
  return p.delta_tau > 0.0 ? f : -f;
}

double gamma0(const LZParams& p) {
  return 2.0 * p.a_x * p.a_x * p.tau_r * p.tau_r * p.T_r / (p.beta * p.beta * std::abs(p.delta_tau));
}

double gamma_lz(double tau, const LZParams& p) { return gamma0(p) * sweep_fraction(tau, p); }

double lz_polarization(double tau, const LZParams& p, int sign) {
  return (sign >= 0 ? 1.0 : -1.0) * (1.0 - std::exp(-gamma_lz(tau, p)));
}

double linewidth(double a_x, double tau_r, double beta) { return a_x * tau_r * tau_r / (kPi * beta); }

double delta_tau_for_gamma0(double a_x, double tau_r, double T_r, double beta, double g0) {
  if (!(g0 > 0.0)) throw DomainError("LZ: Gamma_0 must be > 0");
  return 2.0 * a_x * a_x * tau_r * tau_r * T_r / (beta * beta * g0);
}

AdditiveResult additive_multi_spin(const std::vector<LZParams>& params, const std::vector<int>& signs,
                                   double tau) {
  if (params.size() != signs.size()) throw DomainError("additive_multi_spin: size mismatch");
  AdditiveResult r;
  if (params.empty()) return r;
  double sum = 0.0;
  for (size_t n = 0; n < params.size(); ++n) {
    sum += lz_polarization(tau, params[n], signs[n]);
    if (gamma0(params[n]) > 1.0) r.regime_warning = true;
  }
  r.P = std::clamp(sum / double(params.size()), -1.0, 1.0);
  if (r.regime_warning) r.note = "Gamma_0 > 1 for some spin: additive estimate not valid in the adiabatic regime";
  return r;
}

FitMetrics fit_comparison(const Trajectory& trajectory, const LZParams& params, int sign, int rep) {
  FitMetrics m;
  double ss = 0.0;
  for (const auto& row : trajectory.rows) {
    if (row.rep != rep) continue;
    const double plz = lz_polarization(row.tau, params, sign);
    const double dev = std::abs(row.obs.P - plz);
    m.tau.push_back(row.tau);
    m.p_sim.push_back(row.obs.P);
    m.p_lz.push_back(plz);
    m.max_abs_dev = std::max(m.max_abs_dev, dev);
    ss += dev * dev;
    m.final_dev = dev;
  }
  if (m.tau.empty()) throw DomainError("fit_comparison: trajectory has no rows for that repetition");
  m.rms_dev = std::sqrt(ss / m.tau.size());
  return m;
}

}  // namespace adpulse::lz
