#pragma once

#include <string>
#include <vector>

#include "adpulse/protocols.hpp"
#include "adpulse/sweep.hpp"

namespace adpulse::lz {

// Which period enters Phi_tau = 4 pi (tau - tau_r) / tau * sqrt(T / delta_tau).
enum class PeriodReading { resonance, instantaneous };

struct LZParams {
  double a_x = 0.0;        // rad/s
  double tau_r = 0.0;      // s
  double T_r = 0.0;        // s
  double beta = 0.0;
  double delta_tau = 0.0;  // s (magnitude is used)
  double tau_ini = 0.0;    // s
  double T_period = 0.0;   // s, T in Phi_tau for the resonance reading
  PeriodReading reading = PeriodReading::resonance;
  double period_factor = 2.0;  // T / tau, used by the instantaneous reading
};

void validate(const LZParams& p);

LZParams make_params(double a_x, double tau_r, const ProtocolSpec& spec, double delta_tau,
                     double tau_ini, PeriodReading reading = PeriodReading::resonance);

double phi(double tau, const LZParams& p);
double sweep_fraction(double tau, const LZParams& p);  // F(tau_ini, tau)
double gamma0(const LZParams& p);
double gamma_lz(double tau, const LZParams& p);

// sign (1 - exp(-Gamma_LZ)) in the [-1, 1] polarization convention
// (the spin-unit value +-(1 - e^-Gamma)/2 times 2).
double lz_polarization(double tau, const LZParams& p, int sign);

// Anticrossing width in tau: a_x tau_r^2 / (pi beta).
double linewidth(double a_x, double tau_r, double beta);

// delta_tau giving a requested Gamma_0.
double delta_tau_for_gamma0(double a_x, double tau_r, double T_r, double beta, double g0);

struct AdditiveResult {
  double P = 0.0;
  bool regime_warning = false;  // some Gamma_0 > 1: additive picture unreliable
  std::string note;
};

// Register-average of per-spin predictions, clamped to [-1, 1].
AdditiveResult additive_multi_spin(const std::vector<LZParams>& params, const std::vector<int>& signs,
                                   double tau);

struct FitMetrics {
  double max_abs_dev = 0.0;
  double rms_dev = 0.0;
  double final_dev = 0.0;
  std::vector<double> tau, p_sim, p_lz;
};

// Compares the repetition `rep` of a single-spin trajectory with lz_polarization.
FitMetrics fit_comparison(const Trajectory& trajectory, const LZParams& params, int sign, int rep = 1);

}  // namespace adpulse::lz
