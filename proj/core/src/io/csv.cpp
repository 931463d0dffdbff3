#include "adpulse/io/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "adpulse/errors.hpp"

namespace adpulse::io {

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return int(i);
  return -1;
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header.size())
    throw InvariantError("csv row has " + std::to_string(row.size()) + " fields, header has " +
                         std::to_string(header.size()));
  rows.push_back(std::move(row));
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

double parse_field(const std::string& field) {
  if (field == "nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc() || p != field.data() + field.size())
    throw ConfigError("csv: '" + field + "' is not a number");
  return v;
}

std::string to_csv_text(const CsvTable& t) {
  std::string out;
  auto line = [&](const std::vector<std::string>& f) {
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (i) out += ',';
      out += f[i];
    }
    out += '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
  return out;
}

CsvTable parse_csv_text(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  auto fields = [](const std::string& l) {
    std::vector<std::string> f;
    std::string item;
    std::istringstream ls(l);
    while (std::getline(ls, item, ',')) f.push_back(item);
    if (!l.empty() && l.back() == ',') f.emplace_back();
    return f;
  };
  bool first = true;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      t.header = fields(line);
      first = false;
      continue;
    }
    auto f = fields(line);
    if (f.size() != t.header.size())
      throw ConfigError("csv line " + std::to_string(lineno) + ": " + std::to_string(f.size()) +
                        " fields, header has " + std::to_string(t.header.size()));
    t.rows.push_back(std::move(f));
  }
  if (first) throw ConfigError("csv: missing header");
  return t;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << to_csv_text(table);
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv_text(ss.str());
}

CsvTable spectrum_table(const FloquetSpectrum& spectrum, FoldWindow fold) {
  CsvTable t;
  t.header = {"tau_s", "branch_id", "eigenphase_rad", "label", "gap_to_nearest_rad"};
  const int nb = spectrum.n_branches();
  for (const auto& pt : spectrum.points) {
    const Eigen::VectorXd ph = fold_eigenphases(pt, fold);
    for (int b = 0; b < nb; ++b) {
      double gap = nb > 1 ? kPi : 0.0;
      for (int c = 0; c < nb; ++c)
        if (c != b) gap = std::min(gap, phase_distance(pt.eigenphases(b), pt.eigenphases(c)));
      t.add_row({format_number(pt.tau), std::to_string(b), format_number(ph(b)), spectrum.tags[b].text,
                 format_number(gap)});
    }
  }
  return t;
}

CsvTable anticrossing_table(const FloquetSpectrum& spectrum, const std::vector<Anticrossing>& crossings) {
  CsvTable t;
  t.header = {"tau_center_s", "gap_rad", "true_crossing", "branch_pairs", "labels"};
  for (const auto& ac : crossings) {
    std::string pairs, labels;
    for (const auto& [a, b] : ac.branch_pairs) {
      if (!pairs.empty()) {
        pairs += ';';
        labels += ';';
      }
      pairs += std::to_string(a) + "-" + std::to_string(b);
      labels += spectrum.tags[a].text + "~" + spectrum.tags[b].text;
    }
    t.add_row({format_number(ac.tau_center), format_number(ac.gap), ac.true_crossing ? "1" : "0", pairs, labels});
  }
  return t;
}

CsvTable trajectory_table(const Trajectory& traj, const SpinSystem& system) {
  CsvTable t;
  t.header = {"step", "rep", "tau_s", "t_cum_s", "L", "P", "Mz"};
  for (const auto& n : system.nuclei) t.header.push_back("Iz_" + n.label);
  t.header.push_back("purity");
  for (const auto& r : traj.rows) {
    std::vector<std::string> row = {std::to_string(r.step), std::to_string(r.rep), format_number(r.tau),
                                    format_number(r.t_cum), format_number(r.obs.L), format_number(r.obs.P),
                                    format_number(r.obs.Mz)};
    for (double iz : r.obs.iz) row.push_back(format_number(iz));
    row.push_back(format_number(r.obs.purity));
    t.add_row(std::move(row));
  }
  return t;
}

CsvTable repetitions_table(const RepeatedPolarization& res) {
  CsvTable t;
  t.header = {"rep", "P", "gain", "Mz", "L"};
  for (std::size_t r = 0; r < res.P.size(); ++r) {
    const auto& o = res.trajectory.rep_end.at(r);
    t.add_row({std::to_string(r + 1), format_number(res.P[r]), format_number(res.gains[r]), format_number(o.Mz),
               format_number(o.L)});
  }
  return t;
}

CsvTable lzcompare_table(const lz::FitMetrics& m) {
  CsvTable t;
  t.header = {"tau_s", "P_sim", "P_lz", "deviation"};
  for (std::size_t i = 0; i < m.tau.size(); ++i)
    t.add_row({format_number(m.tau[i]), format_number(m.p_sim[i]), format_number(m.p_lz[i]),
               format_number(m.p_sim[i] - m.p_lz[i])});
  return t;
}

CsvTable selection_rules_table(const CrossingPairMap& map) {
  CsvTable t;
  t.header = {"from", "to", "probability", "swap", "tau_avoided_s", "tau_true_s", "gap_rad", "unresolved",
              "overlapping"};
  std::string overlapping;
  for (const auto& l : map.overlapping) overlapping += (overlapping.empty() ? "" : ";") + l;
  for (const auto& r : map.rules)
    t.add_row({r.from, r.to, format_number(r.probability), r.swap ? "1" : "0", format_number(map.tau_avoided),
               format_number(map.tau_true), format_number(map.gap), map.unresolved ? "1" : "0", overlapping});
  return t;
}

}  // namespace adpulse::io
