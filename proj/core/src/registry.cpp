#include "adpulse/registry.hpp"

#include <random>

#include "adpulse/errors.hpp"

namespace adpulse {

const std::vector<RegistryEntry>& bundled_registry() {
  // C1 a_x (26.6 kHz) is the measured transverse coupling of that site.
  // Every other number here is a placeholder: a_x drawn from the 20-60 kHz band typical of
  // strongly coupled 13C, a_z chosen by hand to give distinct resonances.
  static const std::vector<RegistryEntry> reg = {
      {"C1", 26.6, -36.3, true},  {"C2", 41.5, -20.6, false}, {"C3", 59.2, -11.3, false},
      {"C4", 33.0, 8.0, false},   {"C5", 24.8, 24.4, false},  {"C6", 48.0, 15.0, false},
      {"C7", 21.0, -45.0, false},
  };
  return reg;
}

NuclearSpec registry_nucleus(const std::string& label) {
  for (const auto& e : bundled_registry())
    if (e.label == label) return {e.label, khz_to_angular(e.a_x_khz), khz_to_angular(e.a_z_khz)};
  throw ConfigError("unknown registry spin '" + label + "' (bundled: C1..C7)");
}

std::vector<NuclearSpec> registry_nuclei(const std::vector<std::string>& labels) {
  std::vector<NuclearSpec> out;
  for (const auto& l : labels) out.push_back(registry_nucleus(l));
  return out;
}

std::vector<NuclearSpec> random_register(int n, std::uint64_t seed, double ax_lo_khz, double ax_hi_khz,
                                         double az_lo_khz, double az_hi_khz) {
  if (n < 1 || n > kMaxNuclei) throw DomainError("random_register: bad size");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ax(ax_lo_khz, ax_hi_khz), az(az_lo_khz, az_hi_khz);
  std::vector<NuclearSpec> out;
  for (int k = 1; k <= n; ++k) {
    const double x = ax(rng);
    const double z = az(rng);
    out.push_back({"R" + std::to_string(k), khz_to_angular(x), khz_to_angular(z)});
  }
  return out;
}

}  // namespace adpulse
