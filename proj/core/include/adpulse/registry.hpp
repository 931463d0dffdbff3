#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "adpulse/spin_model.hpp"

namespace adpulse {

inline double khz_to_angular(double khz) { return kTwoPi * khz * 1e3; }
inline double angular_to_khz(double w) { return w / (kTwoPi * 1e3); }

struct RegistryEntry {
  std::string label;
  double a_x_khz = 0.0;  // per 2 pi
  double a_z_khz = 0.0;
  bool a_x_measured = false;  // false: placeholder value
};

// Example 13C register C1..C7.
const std::vector<RegistryEntry>& bundled_registry();

NuclearSpec registry_nucleus(const std::string& label);  // throws ConfigError if unknown
std::vector<NuclearSpec> registry_nuclei(const std::vector<std::string>& labels);

// n spins labelled R1..Rn with a_x uniform in [ax_lo, ax_hi] kHz and a_z uniform in [az_lo, az_hi] kHz.
std::vector<NuclearSpec> random_register(int n, std::uint64_t seed, double ax_lo_khz = 20.0,
                                         double ax_hi_khz = 60.0, double az_lo_khz = -40.0,
                                         double az_hi_khz = 40.0);

}  // namespace adpulse
