#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "adpulse/floquet.hpp"
#include "adpulse/lz_model.hpp"
#include "adpulse/storage.hpp"
#include "adpulse/sweep.hpp"

namespace adpulse::io {

// Plain comma-separated table; fields never contain commas or quotes.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 if absent
  bool has(const std::string& name) const { return column(name) >= 0; }
  void add_row(std::vector<std::string> row);
};

std::string format_number(double v);  // shortest round-trip form
double parse_field(const std::string& field);

std::string to_csv_text(const CsvTable& table);
CsvTable parse_csv_text(const std::string& text);  // throws ConfigError
void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);

// tau_s, branch_id, eigenphase_rad, label, gap_to_nearest_rad
CsvTable spectrum_table(const FloquetSpectrum& spectrum, FoldWindow fold);
// tau_center_s, gap_rad, true_crossing, branch_pairs, labels
CsvTable anticrossing_table(const FloquetSpectrum& spectrum, const std::vector<Anticrossing>& crossings);
// step, rep, tau_s, t_cum_s, L, P, Mz, Iz_<label>..., purity
CsvTable trajectory_table(const Trajectory& trajectory, const SpinSystem& system);
// rep, P, gain, Mz, L
CsvTable repetitions_table(const RepeatedPolarization& result);
// tau_s, P_sim, P_lz, deviation
CsvTable lzcompare_table(const lz::FitMetrics& metrics);
// from, to, probability, swap, tau_avoided_s, tau_true_s, gap_rad, unresolved, overlapping
CsvTable selection_rules_table(const CrossingPairMap& map);

}  // namespace adpulse::io
