#pragma once

#include <filesystem>
#include <string>

#include "adpulse/io/csv.hpp"

namespace adpulse::io {

enum class PlotKind { spectrum, trajectory, fidelity };

std::string to_string(PlotKind k);
PlotKind plot_kind_from_string(const std::string& name);

// Static SVG line plot. Every series is one <path class="series"> element:
//   spectrum:   one per branch_id (eigenphase vs tau)
//   trajectory: P_sim and P_lz when both exist, otherwise P and L
//   fidelity:   one per value of the `series` column (fidelity vs window width)
// Throws ConfigError when required columns are missing. A table without rows gives axes only.
std::string render_svg(const CsvTable& table, PlotKind kind, const std::string& title = "");

void emit_plot(const std::filesystem::path& csv, PlotKind kind, const std::filesystem::path& svg);

}  // namespace adpulse::io
