#include "adpulse/io/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "adpulse/errors.hpp"
#include "adpulse/registry.hpp"

namespace adpulse::io {

namespace pt = boost::property_tree;

std::string to_string(Action a) {
  switch (a) {
    case Action::spectrum: return "spectrum";
    case Action::sweep: return "sweep";
    case Action::polarize: return "polarize";
    case Action::storage: return "storage";
    case Action::lzcompare: return "lzcompare";
  }
  return "?";
}

Action action_from_string(const std::string& name) {
  if (name == "spectrum") return Action::spectrum;
  if (name == "sweep") return Action::sweep;
  if (name == "polarize") return Action::polarize;
  if (name == "storage") return Action::storage;
  if (name == "lzcompare") return Action::lzcompare;
  throw ConfigError("unknown action '" + name + "' (expected spectrum|sweep|polarize|storage|lzcompare)");
}

namespace {

const std::vector<std::string> kUnitSuffixes = {"_khz", "_mhz", "_ghz", "_hz",   "_us",       "_ns",
                                                "_ms",  "_s",   "_tesla", "_gauss", "_pi_units", "_rad",
                                                "_deg"};

std::string stem_of(const std::string& key) {
  for (const auto& s : kUnitSuffixes)
    if (key.size() > s.size() && key.compare(key.size() - s.size(), s.size(), s) == 0)
      return key.substr(0, key.size() - s.size());
  return key;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text, const std::string& path) {
  const std::string t = trim(text);
  double v = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (!t.empty() && *first == '+') ++first;
  const auto [p, ec] = std::from_chars(first, last, v);
  if (t.empty() || ec != std::errc() || p != last || !std::isfinite(v))
    throw ConfigError("key '" + path + "': expected a number, got '" + text + "'");
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// One INI section. Keys are consumed as they are read; finish() rejects leftovers.
class Section {
 public:
  Section(std::string path, const pt::ptree* node) : path_(std::move(path)), node_(node) {}

  std::optional<std::string> raw(const std::string& key) {
    known_.insert(key);
    if (!node_) return std::nullopt;
    const auto it = node_->find(key);
    if (it == node_->not_found()) return std::nullopt;
    return trim(it->second.data());
  }

  std::string key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  std::string text(const std::string& key, const std::string& def) { return raw(key).value_or(def); }

  std::string choice(const std::string& key, const std::string& def, const std::vector<std::string>& allowed) {
    const std::string v = text(key, def);
    if (std::find(allowed.begin(), allowed.end(), v) == allowed.end()) {
      std::string list;
      for (const auto& a : allowed) list += (list.empty() ? "" : "|") + a;
      throw ConfigError("key '" + key_path(key) + "': '" + v + "' is not one of " + list);
    }
    return v;
  }

  double number(const std::string& key, double def) {
    const auto r = raw(key);
    return r ? parse_number(*r, key_path(key)) : def;
  }

  std::optional<double> maybe_number(const std::string& key) {
    const auto r = raw(key);
    if (!r) return std::nullopt;
    return parse_number(*r, key_path(key));
  }

  int integer(const std::string& key, int def) {
    const auto r = raw(key);
    if (!r) return def;
    const double v = parse_number(*r, key_path(key));
    if (v != std::floor(v) || std::abs(v) > 2e9)
      throw ConfigError("key '" + key_path(key) + "': expected an integer, got '" + *r + "'");
    return static_cast<int>(v);
  }

  bool boolean(const std::string& key, bool def) {
    const auto r = raw(key);
    if (!r) return def;
    if (*r == "true" || *r == "yes" || *r == "1") return true;
    if (*r == "false" || *r == "no" || *r == "0") return false;
    throw ConfigError("key '" + key_path(key) + "': expected true|false, got '" + *r + "'");
  }

  std::vector<double> list(const std::string& key, const std::vector<double>& def) {
    const auto r = raw(key);
    if (!r) return def;
    std::vector<double> out;
    for (const auto& item : split(*r, ',')) out.push_back(parse_number(item, key_path(key)));
    return out;
  }

  void finish() const {
    if (!node_) return;
    for (const auto& [key, child] : *node_) {
      if (known_.count(key)) continue;
      const std::string stem = stem_of(key);
      for (const auto& k : known_)
        if (stem_of(k) == stem && k != stem)
          throw ConfigError("key '" + key_path(key) + "': unit suffix mismatch, expected '" + k + "'");
      throw ConfigError("unknown key '" + key_path(key) + "'");
    }
  }

 private:
  std::string path_;
  const pt::ptree* node_;
  std::set<std::string> known_;
};

void check_positive(double v, const std::string& path) {
  if (!(v > 0.0)) throw ConfigError("key '" + path + "' must be > 0");
}

int nucleus_index(const Scenario& s, const std::string& label, const std::string& path) {
  for (std::size_t i = 0; i < s.system.nuclei.size(); ++i)
    if (s.system.nuclei[i].label == label) return int(i);
  throw ConfigError("key '" + path + "': no nucleus labelled '" + label + "'");
}

Scenario resolve(const pt::ptree& tree, const ParseOptions& opts) {
  Scenario s;
  pt::ptree root_keys;
  std::map<std::string, const pt::ptree*> sections;
  std::vector<std::pair<std::string, const pt::ptree*>> nucleus_sections;
  for (const auto& [key, child] : tree) {
    static const std::set<std::string> root_names = {"name", "action", "seed", "output_dir", "threads"};
    const bool is_section = !child.empty() || (child.data().empty() && !root_names.count(key));
    if (!is_section) {
      root_keys.push_back({key, child});
      continue;
    }
    if (key.rfind("nucleus ", 0) == 0) {
      const std::string label = trim(key.substr(8));
      if (label.empty()) throw ConfigError("section '[" + key + "]' needs a label");
      nucleus_sections.emplace_back(label, &child);
      continue;
    }
    static const std::set<std::string> names = {"system", "protocol", "sweep", "spectrum", "storage", "lzcompare"};
    if (!names.count(key)) throw ConfigError("unknown section '[" + key + "]'");
    sections[key] = &child;
  }
  auto section = [&](const std::string& name) {
    const auto it = sections.find(name);
    return Section(name, it == sections.end() ? nullptr : it->second);
  };

  Section root("", &root_keys);
  s.name = root.text("name", "scenario");
  s.action = action_from_string(root.text("action", "sweep"));
  {
    const auto seed = root.raw("seed");
    if (seed) {
      std::uint64_t v = 0;
      const auto [p, ec] = std::from_chars(seed->data(), seed->data() + seed->size(), v);
      if (seed->empty() || ec != std::errc() || p != seed->data() + seed->size())
        throw ConfigError("key 'seed': expected a non-negative integer, got '" + *seed + "'");
      s.seed = v;
    }
    if (opts.seed) s.seed = *opts.seed;
  }
  s.output_dir = root.text("output_dir", "out/" + s.name);
  s.threads = root.integer("threads", 1);
  if (s.threads < 1) throw ConfigError("key 'threads' must be >= 1");
  root.finish();

  // [system]
  Section sys = section("system");
  const auto larmor = sys.maybe_number("larmor_khz");
  s.system.b_field_tesla = sys.maybe_number("b_field_tesla");
  if (larmor) {
    check_positive(*larmor, "system.larmor_khz");
    s.system.larmor_khz = *larmor;
  }
  if (s.system.b_field_tesla) {
    check_positive(*s.system.b_field_tesla, "system.b_field_tesla");
    const double from_field = kGammaC13 * *s.system.b_field_tesla / 1e3;
    if (!larmor) s.system.larmor_khz = from_field;
    else if (std::abs(*larmor - from_field) > 1e-6 * from_field)
      throw ConfigError("keys 'system.larmor_khz' and 'system.b_field_tesla' disagree (" +
                        std::to_string(*larmor) + " vs " + std::to_string(from_field) + " kHz)");
  }
  if (!larmor && !s.system.b_field_tesla) throw ConfigError("section [system] needs larmor_khz or b_field_tesla");
  s.system.coupling = sys.choice("coupling", "nv", {"nv", "symmetric"});
  if (const auto reg = sys.raw("registry")) {
    if (reg->rfind("random:", 0) == 0) {
      const double n = parse_number(reg->substr(7), "system.registry");
      if (n < 1 || n > kMaxNuclei || n != std::floor(n))
        throw ConfigError("key 'system.registry': random register size must be 1.." + std::to_string(kMaxNuclei));
      for (const auto& nuc : random_register(int(n), s.seed))
        s.system.nuclei.push_back({nuc.label, angular_to_khz(nuc.a_x), angular_to_khz(nuc.a_z)});
    } else {
      for (const auto& label : split(*reg, ',')) {
        const auto& reg_all = bundled_registry();
        const auto it = std::find_if(reg_all.begin(), reg_all.end(), [&](const auto& e) { return e.label == label; });
        if (it == reg_all.end())
          throw ConfigError("key 'system.registry': unknown spin '" + label + "' (bundled: C1..C7, or random:N)");
        s.system.nuclei.push_back({it->label, it->a_x_khz, it->a_z_khz});
      }
    }
  }
  sys.finish();
  for (const auto& [label, node] : nucleus_sections) {
    Section ns("nucleus " + label, node);
    NucleusConfig nc{label, 0.0, 0.0};
    const auto& reg_all = bundled_registry();
    const auto it = std::find_if(reg_all.begin(), reg_all.end(), [&](const auto& e) { return e.label == label; });
    const auto ax = ns.maybe_number("a_x_khz");
    const auto az = ns.maybe_number("a_z_khz");
    if ((!ax || !az) && it == reg_all.end())
      throw ConfigError("section [nucleus " + label + "] needs a_x_khz and a_z_khz");
    nc.a_x_khz = ax ? *ax : it->a_x_khz;
    nc.a_z_khz = az ? *az : it->a_z_khz;
    ns.finish();
    s.system.nuclei.push_back(nc);
  }
  if (s.system.nuclei.empty()) throw ConfigError("no nuclei: set system.registry or add [nucleus <label>] sections");

  // [protocol]
  Section pr = section("protocol");
  s.protocol.family = pr.choice("family", "cpmg", {"cpmg", "polcpmg", "pulsepol"});
  s.protocol.delta_theta_pi_units = pr.number("delta_theta_pi_units", 0.0);
  s.protocol.t_pi_ns = pr.number("t_pi_ns", 0.0);
  s.protocol.layout = pr.choice("layout", "symmetric", {"symmetric", "asymmetric"});
  pr.finish();

  // [sweep]
  Section sw = section("sweep");
  s.sweep.tau_ini_us = sw.number("tau_ini_us", 0.0);
  s.sweep.tau_fin_us = sw.number("tau_fin_us", 0.0);
  s.sweep.delta_tau_ns = std::abs(sw.number("delta_tau_ns", 1.0));
  s.sweep.n_p = sw.integer("n_p", 1);
  s.sweep.repetitions = sw.integer("repetitions", 1);
  s.sweep.reinit = sw.choice("reinit", "none", {"none", "to_ket0", "to_Xplus", "to_Xminus"});
  s.sweep.electron = sw.choice("electron", "xplus", {"ket0", "ket1", "xplus", "xminus"});
  s.sweep.nuclear = sw.choice("nuclear", "all_down", {"all_down", "all_up", "mixed"});
  s.sweep.t2_budget_us = sw.maybe_number("t2_budget_us");
  s.sweep.method = sw.choice("method", "fast", {"fast", "dense"});
  s.sweep.saturation_tol = sw.number("saturation_tol", 1e-3);
  sw.finish();
  check_positive(s.sweep.delta_tau_ns, "sweep.delta_tau_ns");
  if (s.sweep.n_p < 1) throw ConfigError("key 'sweep.n_p' must be >= 1");
  if (s.sweep.repetitions < 1) throw ConfigError("key 'sweep.repetitions' must be >= 1");

  // [spectrum]
  Section sp = section("spectrum");
  s.spectrum.tau_min_us = sp.number("tau_min_us", 0.0);
  s.spectrum.tau_max_us = sp.number("tau_max_us", 0.0);
  if (s.spectrum.tau_min_us == 0.0 && s.spectrum.tau_max_us == 0.0) {
    s.spectrum.tau_min_us = std::min(s.sweep.tau_ini_us, s.sweep.tau_fin_us);
    s.spectrum.tau_max_us = std::max(s.sweep.tau_ini_us, s.sweep.tau_fin_us);
  }
  s.spectrum.points = sp.integer("points", 400);
  s.spectrum.assignment = sp.choice("assignment", "greedy", {"greedy", "optimal"});
  s.spectrum.overlap_floor = sp.number("overlap_floor", 0.5);
  s.spectrum.fold = sp.choice("fold", "full", {"full", "half"});
  s.spectrum.threshold_factor = sp.number("threshold_factor", 0.2);
  sp.finish();
  if (s.spectrum.points < 3) throw ConfigError("key 'spectrum.points' must be >= 3");

  // [storage]
  Section st = section("storage");
  s.storage.target = st.text("target", s.system.nuclei.front().label);
  nucleus_index(s, s.storage.target, "storage.target");
  s.storage.harmonic = st.integer("harmonic", 3);
  s.storage.amplitude_a = st.number("amplitude_a", 1.0);
  s.storage.amplitude_b = st.number("amplitude_b", 0.0);
  s.storage.renormalize = st.boolean("renormalize", false);
  if (s.storage.renormalize) {
    const double n = std::hypot(s.storage.amplitude_a, s.storage.amplitude_b);
    if (!(n > 0.0)) throw ConfigError("storage amplitudes are both zero");
    s.storage.amplitude_a /= n;
    s.storage.amplitude_b /= n;
    s.storage.renormalize = false;  // resolved amplitudes are normalized
  }
  s.storage.nuclear_init = st.choice("nuclear_init", "down", {"down", "up"});
  s.storage.tau_ini_us = st.number("tau_ini_us", s.sweep.tau_ini_us);
  s.storage.tau_fin_us = st.number("tau_fin_us", s.sweep.tau_fin_us);
  s.storage.delta_tau_ns = std::abs(st.number("delta_tau_ns", 0.5));
  s.storage.larmor_correction = st.boolean("larmor_correction", true);
  s.storage.readout = st.boolean("readout", true);
  s.storage.compare_isolated = st.boolean("compare_isolated", true);
  s.storage.scan_centers_us = st.list("scan_centers_us", {});
  s.storage.scan_widths_us = st.list("scan_widths_us", {});
  st.finish();
  if (s.storage.harmonic < 1 || s.storage.harmonic % 2 == 0) throw ConfigError("key 'storage.harmonic' must be odd and >= 1");
  check_positive(s.storage.delta_tau_ns, "storage.delta_tau_ns");

  // [lzcompare]
  Section lz = section("lzcompare");
  s.lzcompare.target = lz.text("target", s.system.nuclei.front().label);
  nucleus_index(s, s.lzcompare.target, "lzcompare.target");
  s.lzcompare.harmonic = lz.integer("harmonic", 1);
  s.lzcompare.resonance = lz.choice("resonance", "tau_minus", {"tau_minus", "tau_plus", "nominal"});
  {
    std::string sign = lz.choice("polarization_sign", "auto", {"auto", "+1", "1", "-1"});
    s.lzcompare.polarization_sign = sign == "1" ? "+1" : sign;
  }
  s.lzcompare.gamma0 = lz.list("gamma0", {0.3, 1.0, 3.0, 10.0});
  s.lzcompare.window_linewidths = lz.number("window_linewidths", 25.0);
  s.lzcompare.reading = lz.choice("reading", "resonance", {"resonance", "instantaneous"});
  s.lzcompare.scaling_a_x_khz = lz.list("scaling_a_x_khz", {});
  s.lzcompare.scaling_gamma0 = lz.number("scaling_gamma0", 10.0);
  s.lzcompare.scaling_window_linewidths = lz.number("scaling_window_linewidths", 5.0);
  lz.finish();
  if (s.lzcompare.harmonic < 1 || s.lzcompare.harmonic % 2 == 0)
    throw ConfigError("key 'lzcompare.harmonic' must be odd and >= 1");
  for (double g : s.lzcompare.gamma0) check_positive(g, "lzcompare.gamma0");
  for (double a : s.lzcompare.scaling_a_x_khz) check_positive(a, "lzcompare.scaling_a_x_khz");
  check_positive(s.lzcompare.window_linewidths, "lzcompare.window_linewidths");
  check_positive(s.lzcompare.scaling_gamma0, "lzcompare.scaling_gamma0");
  check_positive(s.lzcompare.scaling_window_linewidths, "lzcompare.scaling_window_linewidths");
  if (s.lzcompare.resonance == "nominal" && s.lzcompare.polarization_sign == "auto")
    throw ConfigError("key 'lzcompare.polarization_sign' must be +1 or -1 when resonance = nominal");

  // Physical validation of the pieces that do not depend on the action.
  try {
    make_system(s);
    make_protocol(s);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return s;
}

std::string num(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string num_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + num(v[i]);
  return out;
}

const char* yes_no(bool b) { return b ? "true" : "false"; }

}  // namespace

Scenario parse_scenario_text(const std::string& text, const ParseOptions& options) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(options.source + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  try {
    return resolve(tree, options);
  } catch (const ConfigError& e) {
    throw ConfigError(options.source + ": " + e.what());
  }
}

Scenario parse_scenario(const std::filesystem::path& path, ParseOptions options) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read scenario file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (options.source == "<string>") options.source = path.string();
  return parse_scenario_text(ss.str(), options);
}

std::string emit_scenario(const Scenario& s) {
  std::ostringstream o;
  o << "name = " << s.name << "\n"
    << "action = " << to_string(s.action) << "\n"
    << "seed = " << s.seed << "\n"
    << "output_dir = " << s.output_dir << "\n"
    << "threads = " << s.threads << "\n\n";
  o << "[system]\nlarmor_khz = " << num(s.system.larmor_khz) << "\n";
  if (s.system.b_field_tesla) o << "b_field_tesla = " << num(*s.system.b_field_tesla) << "\n";
  o << "coupling = " << s.system.coupling << "\n\n";
  for (const auto& n : s.system.nuclei)
    o << "[nucleus " << n.label << "]\na_x_khz = " << num(n.a_x_khz) << "\na_z_khz = " << num(n.a_z_khz)
      << "\n\n";
  const auto& p = s.protocol;
  o << "[protocol]\nfamily = " << p.family << "\ndelta_theta_pi_units = " << num(p.delta_theta_pi_units)
    << "\nt_pi_ns = " << num(p.t_pi_ns) << "\nlayout = " << p.layout << "\n\n";
  const auto& w = s.sweep;
  o << "[sweep]\ntau_ini_us = " << num(w.tau_ini_us) << "\ntau_fin_us = " << num(w.tau_fin_us)
    << "\ndelta_tau_ns = " << num(w.delta_tau_ns) << "\nn_p = " << w.n_p << "\nrepetitions = " << w.repetitions
    << "\nreinit = " << w.reinit << "\nelectron = " << w.electron << "\nnuclear = " << w.nuclear << "\n";
  if (w.t2_budget_us) o << "t2_budget_us = " << num(*w.t2_budget_us) << "\n";
  o << "method = " << w.method << "\nsaturation_tol = " << num(w.saturation_tol) << "\n\n";
  const auto& sp = s.spectrum;
  o << "[spectrum]\ntau_min_us = " << num(sp.tau_min_us) << "\ntau_max_us = " << num(sp.tau_max_us)
    << "\npoints = " << sp.points << "\nassignment = " << sp.assignment
    << "\noverlap_floor = " << num(sp.overlap_floor) << "\nfold = " << sp.fold
    << "\nthreshold_factor = " << num(sp.threshold_factor) << "\n\n";
  const auto& st = s.storage;
  o << "[storage]\ntarget = " << st.target << "\nharmonic = " << st.harmonic
    << "\namplitude_a = " << num(st.amplitude_a) << "\namplitude_b = " << num(st.amplitude_b)
    << "\nrenormalize = " << yes_no(st.renormalize) << "\nnuclear_init = " << st.nuclear_init
    << "\ntau_ini_us = " << num(st.tau_ini_us) << "\ntau_fin_us = " << num(st.tau_fin_us)
    << "\ndelta_tau_ns = " << num(st.delta_tau_ns) << "\nlarmor_correction = " << yes_no(st.larmor_correction)
    << "\nreadout = " << yes_no(st.readout) << "\ncompare_isolated = " << yes_no(st.compare_isolated)
    << "\nscan_centers_us = " << num_list(st.scan_centers_us) << "\nscan_widths_us = " << num_list(st.scan_widths_us)
    << "\n\n";
  const auto& lz = s.lzcompare;
  o << "[lzcompare]\ntarget = " << lz.target << "\nharmonic = " << lz.harmonic << "\nresonance = " << lz.resonance
    << "\npolarization_sign = " << lz.polarization_sign << "\ngamma0 = " << num_list(lz.gamma0)
    << "\nwindow_linewidths = " << num(lz.window_linewidths) << "\nreading = " << lz.reading
    << "\nscaling_a_x_khz = " << num_list(lz.scaling_a_x_khz) << "\nscaling_gamma0 = " << num(lz.scaling_gamma0)
    << "\nscaling_window_linewidths = " << num(lz.scaling_window_linewidths) << "\n";
  return o.str();
}

SpinSystem make_system(const Scenario& s) {
  std::vector<NuclearSpec> nuclei;
  for (const auto& n : s.system.nuclei) nuclei.push_back({n.label, khz_to_angular(n.a_x_khz), khz_to_angular(n.a_z_khz)});
  const auto coupling = s.system.coupling == "symmetric" ? ElectronCoupling::symmetric : ElectronCoupling::nv;
  SpinSystem sys = adpulse::make_system(khz_to_angular(s.system.larmor_khz), std::move(nuclei), coupling);
  sys.b_field = s.system.b_field_tesla;
  return sys;
}

ProtocolSpec make_protocol(const Scenario& s) {
  return adpulse::make_protocol(family_from_string(s.protocol.family), kPi * s.protocol.delta_theta_pi_units,
                                s.protocol.t_pi_ns * 1e-9,
                                s.protocol.layout == "asymmetric" ? CellLayout::asymmetric : CellLayout::symmetric);
}

SweepSchedule make_schedule(const Scenario& s) {
  const auto& w = s.sweep;
  const double dir = w.tau_fin_us < w.tau_ini_us ? -1.0 : 1.0;
  try {
    return adpulse::make_schedule(w.tau_ini_us * 1e-6, w.tau_fin_us * 1e-6, dir * w.delta_tau_ns * 1e-9, w.n_p,
                                  w.repetitions, reinit_from_string(w.reinit));
  } catch (const DomainError& e) {
    throw ConfigError(std::string("[sweep]: ") + e.what());
  }
}

SweepOptions make_sweep_options(const Scenario& s) {
  SweepOptions o;
  o.threads = s.threads;
  o.method = s.sweep.method == "dense" ? ExpMethod::dense : ExpMethod::fast;
  if (s.sweep.t2_budget_us) o.t2_budget = *s.sweep.t2_budget_us * 1e-6;
  return o;
}

QuantumState make_initial_state(const Scenario& s, const SpinSystem& system) {
  ElectronState e;
  const auto& el = s.sweep.electron;
  e.kind = el == "ket0" ? ElectronState::Kind::ket0
           : el == "ket1" ? ElectronState::Kind::ket1
           : el == "xminus" ? ElectronState::Kind::xminus
                            : ElectronState::Kind::xplus;
  NuclearState n;
  n.kind = s.sweep.nuclear == "all_up"   ? NuclearState::Kind::all_up
           : s.sweep.nuclear == "mixed" ? NuclearState::Kind::maximally_mixed
                                        : NuclearState::Kind::all_down;
  return adpulse::make_initial_state(system, e, n);
}

ScanOptions make_scan_options(const Scenario& s) {
  ScanOptions o;
  o.overlap_floor = s.spectrum.overlap_floor;
  o.assignment = s.spectrum.assignment == "optimal" ? Assignment::optimal : Assignment::greedy;
  o.threads = s.threads;
  o.method = s.sweep.method == "dense" ? ExpMethod::dense : ExpMethod::fast;
  return o;
}

FoldWindow fold_window(const Scenario& s) { return s.spectrum.fold == "half" ? FoldWindow::half : FoldWindow::full; }

}  // namespace adpulse::io
