#include "adpulse/io/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "adpulse/errors.hpp"
#include "adpulse/floquet.hpp"
#include "adpulse/io/csv.hpp"
#include "adpulse/io/plot.hpp"
#include "adpulse/lz_model.hpp"
#include "adpulse/parallel.hpp"
#include "adpulse/registry.hpp"
#include "adpulse/storage.hpp"
#include "adpulse/version.hpp"

namespace adpulse::io {

namespace fs = std::filesystem;

const std::string* RunReport::find(const std::string& key) const {
  for (const auto& [k, v] : summary)
    if (k == key) return &v;
  return nullptr;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

std::string g(double v, int prec = 6) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

class Writer {
 public:
  Writer(fs::path dir, RunReport& report, bool plots) : dir_(std::move(dir)), report_(report), plots_(plots) {}

  void csv(const std::string& name, const CsvTable& t) {
    write_csv(dir_ / name, t);
    report_.artifacts.push_back(name);
  }

  // Plot errors are reported as warnings; the CSVs are already on disk.
  void plot(const std::string& name, const CsvTable& t, PlotKind kind, const std::string& title) {
    if (!plots_) return;
    try {
      std::ofstream out(dir_ / name, std::ios::binary);
      if (!out) throw ConfigError("cannot write '" + (dir_ / name).string() + "'");
      out << render_svg(t, kind, title);
      report_.artifacts.push_back(name);
    } catch (const std::exception& e) {
      report_.warnings.push_back("plot " + name + ": " + e.what());
    }
  }

  void text(const std::string& name, const std::string& body) {
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + (dir_ / name).string() + "'");
    out << body;
    report_.artifacts.push_back(name);
  }

 private:
  fs::path dir_;
  RunReport& report_;
  bool plots_;
};

int nucleus_of(const SpinSystem& sys, const std::string& label) {
  const int i = sys.index_of(label);
  if (i < 0) throw ConfigError("no nucleus labelled '" + label + "'");
  return i;
}

void run_spectrum(const Scenario& s, Writer& w, RunReport& r) {
  const SpinSystem sys = make_system(s);
  const ProtocolSpec spec = make_protocol(s);
  if (!(s.spectrum.tau_min_us > 0.0) || !(s.spectrum.tau_max_us > s.spectrum.tau_min_us))
    throw ConfigError("[spectrum] needs 0 < tau_min_us < tau_max_us (or a [sweep] window)");
  const auto grid = linear_grid(s.spectrum.tau_min_us * 1e-6, s.spectrum.tau_max_us * 1e-6, s.spectrum.points);
  const FloquetSpectrum spectrum = scan_spectrum(sys, spec, grid, make_scan_options(s));
  AnticrossingOptions ao;
  ao.threshold_factor = s.spectrum.threshold_factor;
  ao.include_true_crossings = true;
  ao.threads = s.threads;
  const auto crossings = locate_anticrossings(spectrum, ao);
  const CsvTable st = spectrum_table(spectrum, fold_window(s));
  w.csv("spectrum.csv", st);
  w.csv("anticrossings.csv", anticrossing_table(spectrum, crossings));
  w.plot("spectrum.svg", st, PlotKind::spectrum, s.name + ": Floquet eigenphases");

  double mz_max = 0.0;
  for (const auto& t : spectrum.tags) mz_max = std::max(mz_max, std::abs(t.mz));
  std::string extremal;
  for (const auto& t : spectrum.tags)
    if (std::abs(std::abs(t.mz) - mz_max) < 1e-9) extremal += (extremal.empty() ? "" : ";") + t.text;
  int avoided = 0;
  for (const auto& c : crossings) avoided += c.true_crossing ? 0 : 1;
  r.summary.push_back({"branches", std::to_string(spectrum.n_branches())});
  r.summary.push_back({"grid_points", std::to_string(grid.size())});
  r.summary.push_back({"avoided_crossings", std::to_string(avoided)});
  r.summary.push_back({"true_crossings", std::to_string(crossings.size() - avoided)});
  r.summary.push_back({"ambiguous_assignments", std::to_string(spectrum.flags.size())});
  r.summary.push_back({"extremal_labels", extremal});
}

void run_sweep_action(const Scenario& s, Writer& w, RunReport& r) {
  const SpinSystem sys = make_system(s);
  const ProtocolSpec spec = make_protocol(s);
  const SweepSchedule sch = make_schedule(s);
  const QuantumState init = make_initial_state(s, sys);
  const Observables o0 = observables(init, sys);
  const Trajectory traj = run_sweep(init, sys, spec, sch, make_sweep_options(s));
  const CsvTable t = trajectory_table(traj, sys);
  w.csv("trajectory.csv", t);
  w.plot("trajectory.svg", t, PlotKind::trajectory, s.name + ": sweep");
  const auto& fin = traj.rep_end.back();
  r.summary.push_back({"steps", std::to_string(sch.n_steps())});
  r.summary.push_back({"P_initial", g(o0.P)});
  r.summary.push_back({"P_final", g(fin.P)});
  r.summary.push_back({"L_initial", g(o0.L)});
  r.summary.push_back({"L_final", g(fin.L)});
  r.summary.push_back({"t_total_s", g(traj.t_total)});
  for (const auto& msg : traj.warnings) r.warnings.push_back(msg);
}

void run_polarize(const Scenario& s, Writer& w, RunReport& r) {
  const SpinSystem sys = make_system(s);
  const ProtocolSpec spec = make_protocol(s);
  const SweepSchedule sch = make_schedule(s);
  const QuantumState init = make_initial_state(s, sys);
  const auto res = run_repeated_polarization(init, sys, spec, sch, make_sweep_options(s), s.sweep.saturation_tol);
  w.csv("repetitions.csv", repetitions_table(res));
  const CsvTable t = trajectory_table(res.trajectory, sys);
  w.csv("trajectory.csv", t);
  w.plot("trajectory.svg", t, PlotKind::trajectory, s.name + ": repeated sweeps");
  r.summary.push_back({"repetitions", std::to_string(res.P.size())});
  r.summary.push_back({"P_final", g(res.P.back())});
  r.summary.push_back({"saturated_at", res.saturated_at ? std::to_string(*res.saturated_at) : "none"});
  r.summary.push_back({"t_total_s", g(res.trajectory.t_total)});
  for (const auto& msg : res.trajectory.warnings) r.warnings.push_back(msg);
}

struct StorageJob {
  std::string reg;
  const SpinSystem* sys = nullptr;
  int nucleus = 0;
  double lo = 0.0, hi = 0.0;
  std::string series;
  bool main = false;
  // filled by the run
  bool ok = false;
  std::string error;
  StorageResult res;
  double readout = std::nan("");
};

void run_storage_action(const Scenario& s, Writer& w, RunReport& r) {
  const SpinSystem sys = make_system(s);
  const ProtocolSpec spec = make_protocol(s);
  if (spec.family != Family::pulsepol) throw ConfigError("storage needs [protocol] family = pulsepol");
  const auto& st = s.storage;
  const int target = nucleus_of(sys, st.target);
  const int j = st.harmonic;

  const CrossingPairMap map = crossing_pair_map(sys, spec, target, j);
  w.csv("selection_rules.csv", selection_rules_table(map));

  const SpinSystem alone = subsystem(sys, {target});
  std::vector<std::pair<std::string, const SpinSystem*>> regs;
  if (sys.n_nuclei() == 1) {
    regs.push_back({"isolated", &sys});
  } else {
    if (st.compare_isolated) regs.push_back({"isolated", &alone});
    regs.push_back({"register", &sys});
  }

  std::vector<StorageJob> jobs;
  for (const auto& [name, p] : regs) {
    StorageJob job;
    job.reg = name;
    job.sys = p;
    job.nucleus = p == &alone ? 0 : target;
    job.lo = st.tau_ini_us * 1e-6;
    job.hi = st.tau_fin_us * 1e-6;
    job.main = true;
    jobs.push_back(job);
    for (double c : st.scan_centers_us)
      for (double wd : st.scan_widths_us) {
        StorageJob sj = job;
        sj.main = false;
        sj.lo = (c - wd / 2) * 1e-6;
        sj.hi = (c + wd / 2) * 1e-6;
        sj.series = name + " c=" + g(c, 4) + "us";
        jobs.push_back(sj);
      }
  }

  const cplx a(st.amplitude_a), b(st.amplitude_b);
  StorageOptions so;
  so.larmor_correction = st.larmor_correction;
  so.sweep.method = s.sweep.method == "dense" ? ExpMethod::dense : ExpMethod::fast;
  const NuclearBasis init = st.nuclear_init == "up" ? NuclearBasis::up : NuclearBasis::down;
  parallel_for(static_cast<int>(jobs.size()), s.threads, [&](int i) {
    auto& job = jobs[i];
    try {
      const SweepSchedule sch = adpulse::make_schedule(job.lo, job.hi, st.delta_tau_ns * 1e-9);
      job.res = run_storage(a, b, init, *job.sys, spec, sch, job.nucleus, j, so);
      if (job.main && st.readout) job.readout = readout_fidelity(job.res, a, b, *job.sys, spec, sch, job.nucleus, so);
      job.ok = true;
    } catch (const DomainError& e) {
      if (job.main) throw;
      job.error = e.what();
    }
  });

  CsvTable main_t, scan_t;
  main_t.header = {"register", "tau_ini_s", "tau_fin_s", "delta_tau_s", "fidelity", "strict_fidelity",
                   "readout_fidelity", "larmor_wait_s", "electron_excited", "electron_branch"};
  scan_t.header = {"series", "register", "window_center_s", "window_width_s", "fidelity", "strict_fidelity"};
  for (const auto& job : jobs) {
    if (!job.ok) {
      r.warnings.push_back("storage window [" + g(job.lo * 1e6) + ", " + g(job.hi * 1e6) + "] us skipped: " +
                           job.error);
      continue;
    }
    if (job.main) {
      main_t.add_row({job.reg, format_number(job.lo), format_number(job.hi), format_number(st.delta_tau_ns * 1e-9),
                      format_number(job.res.fidelity), format_number(job.res.strict_fidelity),
                      format_number(job.readout), format_number(job.res.larmor_wait),
                      format_number(job.res.electron_excited),
                      job.res.electron_branch == ElectronBranch::ket0 ? "ket0" : "ket1_reinit_needed"});
      r.summary.push_back({"fidelity_" + job.reg, g(job.res.fidelity)});
      if (st.readout) r.summary.push_back({"readout_" + job.reg, g(job.readout)});
    } else {
      scan_t.add_row({job.series, job.reg, format_number(0.5 * (job.lo + job.hi)), format_number(job.hi - job.lo),
                      format_number(job.res.fidelity), format_number(job.res.strict_fidelity)});
    }
  }
  w.csv("storage.csv", main_t);
  w.csv("storage_fidelity.csv", scan_t);
  w.plot("storage_fidelity.svg", scan_t, PlotKind::fidelity, s.name + ": storage fidelity");

  for (const auto& rule : map.rules)
    r.summary.push_back({"rule_" + rule.from, rule.to + " (" + g(rule.probability, 4) + ")"});
  r.summary.push_back({"tau_avoided_s", g(map.tau_avoided)});
  if (map.unresolved) {
    std::string l;
    for (const auto& x : map.overlapping) l += (l.empty() ? "" : ",") + x;
    r.warnings.push_back("crossing pair of " + st.target + " overlaps resonances of " + l);
  }
}

struct LZSetup {
  SpinSystem one;
  ProtocolSpec spec;
  double tau_r = 0.0;
  double lw = 0.0;
  int sign = 1;
};

LZSetup lz_setup(const Scenario& s, const SpinSystem& one) {
  LZSetup L{one, make_protocol(s)};
  const auto& c = s.lzcompare;
  if (c.resonance == "nominal") {
    L.tau_r = resonance_tau(L.spec, one, 0, c.harmonic);
  } else {
    if (L.spec.family != Family::polcpmg || L.spec.delta_theta == 0.0)
      throw ConfigError("lzcompare.resonance = " + c.resonance + " needs polcpmg with delta_theta != 0");
    const auto sp = locate_split_resonances(one, L.spec, 0, c.harmonic);
    L.tau_r = c.resonance == "tau_minus" ? sp.tau_minus : sp.tau_plus;
  }
  if (c.polarization_sign == "auto") L.sign = c.resonance == "tau_minus" ? -1 : 1;
  else L.sign = c.polarization_sign == "-1" ? -1 : 1;
  L.lw = lz::linewidth(one.nuclei[0].a_x, L.tau_r, protocol_constants(L.spec).beta);
  return L;
}

struct LZRun {
  SweepSchedule schedule;
  double delta_tau = 0.0;  // per-period increment in the closed form
  Trajectory traj;
  lz::FitMetrics metrics;
};

LZRun lz_run(const Scenario& s, const LZSetup& L, double g0, double window_lw) {
  const auto c = protocol_constants(L.spec);
  const double ax = L.one.nuclei[0].a_x;
  const int np = s.sweep.n_p;
  LZRun out;
  out.delta_tau = lz::delta_tau_for_gamma0(ax, L.tau_r, c.T_r_factor * L.tau_r, c.beta, g0);
  const double half = window_lw * L.lw;
  if (!(L.tau_r - half > 0.0)) throw ConfigError("lzcompare window reaches tau <= 0; reduce window_linewidths");
  out.schedule = adpulse::make_schedule(L.tau_r - half, L.tau_r + half, out.delta_tau * np, np);
  const auto reading =
      s.lzcompare.reading == "instantaneous" ? lz::PeriodReading::instantaneous : lz::PeriodReading::resonance;
  const auto params = lz::make_params(ax, L.tau_r, L.spec, out.delta_tau, L.tau_r - half, reading);
  SweepOptions so = make_sweep_options(s);
  so.threads = 1;
  out.traj = run_sweep(make_initial_state(s, L.one), L.one, L.spec, out.schedule, so);
  out.metrics = lz::fit_comparison(out.traj, params, L.sign);
  return out;
}

void run_lzcompare(const Scenario& s, Writer& w, RunReport& r) {
  const SpinSystem sys = make_system(s);
  const int target = nucleus_of(sys, s.lzcompare.target);
  const SpinSystem one = subsystem(sys, {target});
  const LZSetup L = lz_setup(s, one);
  const auto& gs = s.lzcompare.gamma0;

  std::vector<LZRun> runs(gs.size());
  parallel_for(static_cast<int>(gs.size()), s.threads,
               [&](int i) { runs[i] = lz_run(s, L, gs[i], s.lzcompare.window_linewidths); });

  CsvTable sum;
  sum.header = {"gamma0", "delta_tau_s", "n_p", "n_steps", "tau_r_s", "linewidth_s", "P_sim_final", "P_lz_final",
                "final_dev", "max_abs_dev", "rms_dev", "t_total_s"};
  for (std::size_t i = 0; i < gs.size(); ++i) {
    const auto& run = runs[i];
    const CsvTable t = lzcompare_table(run.metrics);
    const std::string stem = "lzcompare_g" + format_number(gs[i]);
    w.csv(stem + ".csv", t);
    w.plot(stem + ".svg", t, PlotKind::trajectory, s.name + ": Gamma0 = " + format_number(gs[i]));
    sum.add_row({format_number(gs[i]), format_number(run.delta_tau), std::to_string(s.sweep.n_p),
                 std::to_string(run.schedule.n_steps()), format_number(L.tau_r), format_number(L.lw),
                 format_number(run.metrics.p_sim.back()), format_number(run.metrics.p_lz.back()),
                 format_number(run.metrics.final_dev), format_number(run.metrics.max_abs_dev),
                 format_number(run.metrics.rms_dev), format_number(run.traj.t_total)});
    r.summary.push_back({"final_dev_g" + format_number(gs[i]), g(run.metrics.final_dev)});
  }
  w.csv("lzcompare_summary.csv", sum);
  r.summary.push_back({"tau_r_s", g(L.tau_r, 8)});
  r.summary.push_back({"linewidth_s", g(L.lw)});

  if (s.lzcompare.scaling_a_x_khz.empty()) return;
  const auto& ax_list = s.lzcompare.scaling_a_x_khz;
  std::vector<LZRun> sruns(ax_list.size());
  std::vector<LZSetup> setups;
  for (double ax : ax_list) {
    SpinSystem v = one;
    v.nuclei[0].a_x = khz_to_angular(ax);
    setups.push_back(lz_setup(s, v));
  }
  parallel_for(static_cast<int>(ax_list.size()), s.threads, [&](int i) {
    sruns[i] = lz_run(s, setups[i], s.lzcompare.scaling_gamma0, s.lzcompare.scaling_window_linewidths);
  });
  CsvTable sc;
  sc.header = {"a_x_khz", "tau_r_s", "linewidth_s", "delta_tau_s", "n_steps", "t_total_s", "t_total_times_a_x",
               "P_final"};
  for (std::size_t i = 0; i < ax_list.size(); ++i) {
    const double t_tot = sweep_time(sruns[i].schedule, setups[i].spec.family);
    sc.add_row({format_number(ax_list[i]), format_number(setups[i].tau_r), format_number(setups[i].lw),
                format_number(sruns[i].delta_tau), std::to_string(sruns[i].schedule.n_steps()), format_number(t_tot),
                format_number(t_tot * ax_list[i] * 1e3), format_number(sruns[i].traj.rep_end.back().P)});
  }
  w.csv("lz_scaling.csv", sc);
}

template <class F>
void with_context(const std::string& ctx, F&& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    throw ConfigError(ctx + e.what());
  } catch (const DomainError& e) {
    throw DomainError(ctx + e.what());
  } catch (const InvariantError& e) {
    throw InvariantError(ctx + e.what());
  }
}

}  // namespace

RunReport run_scenario(const Scenario& s, Action action, const RunOptions& options) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  RunReport report;
  report.out_dir = options.out_dir ? *options.out_dir : fs::path(s.output_dir);
  std::error_code ec;
  fs::create_directories(report.out_dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + report.out_dir.string() + "': " + ec.message());

  Writer w(report.out_dir, report, options.plots);
  Scenario resolved = s;
  resolved.action = action;
  const std::string cfg = emit_scenario(resolved);
  w.text("resolved.cfg", cfg);

  const std::string ctx = "scenario '" + s.name + "' (" + to_string(action) + "): ";
  with_context(ctx, [&] {
    switch (action) {
      case Action::spectrum: run_spectrum(s, w, report); break;
      case Action::sweep: run_sweep_action(s, w, report); break;
      case Action::polarize: run_polarize(s, w, report); break;
      case Action::storage: run_storage_action(s, w, report); break;
      case Action::lzcompare: run_lzcompare(s, w, report); break;
    }
  });
  const double elapsed = std::chrono::duration<double>(clock::now() - t0).count();

  nlohmann::ordered_json m;
  char hash[20];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a64(cfg)));
  m["name"] = s.name;
  m["action"] = to_string(action);
  m["version"] = std::string(kVersion);
  m["seed"] = s.seed;
  m["threads"] = s.threads;
  m["inputs_hash"] = std::string("fnv1a64:") + hash;
  m["elapsed_s"] = elapsed;
  m["artifacts"] = report.artifacts;
  m["warnings"] = report.warnings;
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.summary) summary[k] = v;
  m["summary"] = summary;
  w.text("manifest.json", m.dump(2) + "\n");
  return report;
}

}  // namespace adpulse::io
