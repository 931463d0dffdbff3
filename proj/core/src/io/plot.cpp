#include "adpulse/io/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "adpulse/errors.hpp"

namespace adpulse::io {

std::string to_string(PlotKind k) {
  switch (k) {
    case PlotKind::spectrum: return "spectrum";
    case PlotKind::trajectory: return "trajectory";
    case PlotKind::fidelity: return "fidelity";
  }
  return "?";
}

PlotKind plot_kind_from_string(const std::string& name) {
  if (name == "spectrum") return PlotKind::spectrum;
  if (name == "trajectory") return PlotKind::trajectory;
  if (name == "fidelity") return PlotKind::fidelity;
  throw ConfigError("unknown plot kind '" + name + "' (expected spectrum|trajectory|fidelity)");
}

namespace {

constexpr double kW = 760, kH = 460, kLeft = 70, kRight = 20, kTop = 36, kBottom = 52;
const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                         "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

struct Series {
  std::string name;
  std::vector<double> x, y;
  bool break_on_wrap = false;  // spectrum: do not join points across a 2 pi fold
};

std::string fmt(double v, int prec = 4) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '<') o += "&lt;";
    else if (c == '>') o += "&gt;";
    else if (c == '&') o += "&amp;";
    else if (c == '"') o += "&quot;";
    else o += c;
  }
  return o;
}

void require(const CsvTable& t, std::initializer_list<const char*> cols, PlotKind kind) {
  for (const char* c : cols)
    if (!t.has(c)) throw ConfigError("plot " + to_string(kind) + ": csv has no column '" + c + "'");
}

std::string render(const std::vector<Series>& series, const std::string& title, const std::string& xlabel,
                   const std::string& ylabel) {
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  if (x0 > x1) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 - x0 < 1e-300) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 < 1e-300) y0 -= 0.5, y1 += 0.5;
  const double pad = 0.04 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  const double pw = kW - kLeft - kRight, ph = kH - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return kTop + (y1 - y) / (y1 - y0) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\" viewBox=\"0 0 "
    << kW << " " << kH << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty())
    o << "<text x=\"" << kW / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
      << "</text>\n";
  o << "<g class=\"axes\" stroke=\"black\" fill=\"none\">\n<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\""
    << pw << "\" height=\"" << ph << "\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double fx = x0 + (x1 - x0) * i / 5.0, fy = y0 + (y1 - y0) * i / 5.0;
    o << "<line x1=\"" << fmt(sx(fx), 6) << "\" y1=\"" << kTop + ph << "\" x2=\"" << fmt(sx(fx), 6) << "\" y2=\""
      << kTop + ph + 5 << "\"/>\n";
    o << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << fmt(sy(fy), 6) << "\" x2=\"" << kLeft << "\" y2=\""
      << fmt(sy(fy), 6) << "\"/>\n";
  }
  o << "</g>\n<g class=\"ticks\" fill=\"black\">\n";
  for (int i = 0; i <= 5; ++i) {
    const double fx = x0 + (x1 - x0) * i / 5.0, fy = y0 + (y1 - y0) * i / 5.0;
    o << "<text x=\"" << fmt(sx(fx), 6) << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">" << fmt(fx)
      << "</text>\n";
    o << "<text x=\"" << kLeft - 8 << "\" y=\"" << fmt(sy(fy) + 4, 6) << "\" text-anchor=\"end\">" << fmt(fy)
      << "</text>\n";
  }
  o << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kH - 12 << "\" text-anchor=\"middle\">" << escape(xlabel)
    << "</text>\n";
  o << "<text transform=\"translate(16," << kTop + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
    << escape(ylabel) << "</text>\n</g>\n";

  const bool legend = series.size() <= 10;
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    std::string d;
    bool pen = false;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
        pen = false;
        continue;
      }
      if (pen && s.break_on_wrap && std::abs(s.y[i] - s.y[i - 1]) > 0.5 * (y1 - y0)) pen = false;
      d += (pen ? " L" : (d.empty() ? "M" : " M")) + fmt(sx(s.x[i]), 6) + "," + fmt(sy(s.y[i]), 6);
      pen = true;
    }
    o << "<path class=\"series\" data-name=\"" << escape(s.name) << "\" fill=\"none\" stroke=\""
      << kColors[k % 10] << "\" stroke-width=\"1.2\" d=\"" << d << "\"/>\n";
    if (legend) {
      const double ly = kTop + 14 + 16 * k;
      o << "<line x1=\"" << kW - kRight - 150 << "\" y1=\"" << ly << "\" x2=\"" << kW - kRight - 130 << "\" y2=\""
        << ly << "\" stroke=\"" << kColors[k % 10] << "\" stroke-width=\"2\"/>\n";
      o << "<text x=\"" << kW - kRight - 125 << "\" y=\"" << ly + 4 << "\">" << escape(s.name) << "</text>\n";
    }
  }
  o << "</svg>\n";
  return o.str();
}

std::vector<double> numbers(const CsvTable& t, const std::string& col) {
  const int c = t.column(col);
  std::vector<double> v;
  v.reserve(t.rows.size());
  for (const auto& r : t.rows) v.push_back(parse_field(r[c]));
  return v;
}

}  // namespace

std::string render_svg(const CsvTable& t, PlotKind kind, const std::string& title) {
  std::vector<Series> series;
  switch (kind) {
    case PlotKind::spectrum: {
      require(t, {"tau_s", "branch_id", "eigenphase_rad"}, kind);
      const int cb = t.column("branch_id"), cl = t.column("label");
      const auto tau = numbers(t, "tau_s"), ph = numbers(t, "eigenphase_rad");
      std::map<int, std::size_t> index;
      for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const int b = static_cast<int>(parse_field(t.rows[i][cb]));
        auto [it, fresh] = index.try_emplace(b, series.size());
        if (fresh) series.push_back({cl >= 0 ? t.rows[i][cl] : "branch " + std::to_string(b), {}, {}, true});
        series[it->second].x.push_back(tau[i] * 1e6);
        series[it->second].y.push_back(ph[i]);
      }
      return render(series, title, "tau (us)", "eigenphase (rad)");
    }
    case PlotKind::trajectory: {
      require(t, {"tau_s"}, kind);
      std::vector<double> x = numbers(t, "tau_s");
      std::string xlabel = "tau (us)";
      for (double& v : x) v *= 1e6;
      if (t.has("rep") && t.has("t_cum_s")) {
        const auto rep = numbers(t, "rep");
        if (!rep.empty() && *std::max_element(rep.begin(), rep.end()) > 1) {
          x = numbers(t, "t_cum_s");
          for (double& v : x) v *= 1e3;
          xlabel = "t (ms)";
        }
      }
      std::vector<std::string> cols;
      if (t.has("P_sim") && t.has("P_lz")) cols = {"P_sim", "P_lz"};
      else if (t.has("P")) {
        cols = {"P"};
        if (t.has("L")) cols.push_back("L");
      } else {
        throw ConfigError("plot trajectory: csv needs P or P_sim/P_lz columns");
      }
      for (const auto& c : cols) series.push_back({c, x, numbers(t, c)});
      return render(series, title, xlabel, "polarization");
    }
    case PlotKind::fidelity: {
      require(t, {"window_width_s", "fidelity"}, kind);
      const int cs = t.column("series");
      const auto w = numbers(t, "window_width_s"), f = numbers(t, "fidelity");
      std::map<std::string, std::size_t> index;
      for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const std::string name = cs >= 0 ? t.rows[i][cs] : "fidelity";
        auto [it, fresh] = index.try_emplace(name, series.size());
        if (fresh) series.push_back({name, {}, {}});
        series[it->second].x.push_back(w[i] * 1e6);
        series[it->second].y.push_back(f[i]);
      }
      for (auto& s : series) {
        std::vector<std::size_t> order(s.x.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return s.x[a] < s.x[b]; });
        Series sorted{s.name, {}, {}};
        for (auto i : order) {
          sorted.x.push_back(s.x[i]);
          sorted.y.push_back(s.y[i]);
        }
        s = std::move(sorted);
      }
      return render(series, title, "window width (us)", "fidelity");
    }
  }
  return {};
}

void emit_plot(const std::filesystem::path& csv, PlotKind kind, const std::filesystem::path& svg) {
  const CsvTable t = read_csv(csv);
  const std::string text = render_svg(t, kind, csv.stem().string());
  std::ofstream out(svg, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + svg.string() + "'");
  out << text;
}

}  // namespace adpulse::io
