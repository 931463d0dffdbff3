// adpulse: scenario runner for adiabatic dynamical-decoupling sweeps.
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "adpulse/errors.hpp"
#include "adpulse/io/plot.hpp"
#include "adpulse/io/runner.hpp"
#include "adpulse/io/scenario.hpp"
#include "adpulse/version.hpp"

namespace {

enum Exit { kOk = 0, kFailure = 1, kConfig = 2, kInvariant = 3 };

struct RunArgs {
  std::string scenario;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  bool no_plots = false;
};

void add_run_flags(CLI::App* sub, RunArgs& a) {
  sub->add_option("--scenario", a.scenario, "scenario file (INI)")->required()->check(CLI::ExistingFile);
  sub->add_option("--out", a.out, "output directory (default: scenario output_dir)");
  sub->add_option("--seed", a.seed, "seed for randomized registers");
  sub->add_option("--threads", a.threads, "worker threads")->check(CLI::PositiveNumber);
  sub->add_flag("--no-plots", a.no_plots, "skip SVG output");
}

int run(adpulse::io::Action action, const RunArgs& a) {
  using namespace adpulse::io;
  ParseOptions po;
  po.seed = a.seed;
  Scenario s = parse_scenario(a.scenario, po);
  if (a.threads) s.threads = *a.threads;
  RunOptions ro;
  if (!a.out.empty()) ro.out_dir = a.out;
  ro.plots = !a.no_plots;
  const RunReport r = run_scenario(s, action, ro);
  std::cout << s.name << " [" << to_string(action) << "] -> " << r.out_dir.string() << "\n";
  for (const auto& [k, v] : r.summary) std::cout << "  " << k << " = " << v << "\n";
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adpulse: Floquet spectra, adiabatic sweeps and storage gates for NV nuclear registers"};
  app.set_version_flag("--version", std::string(adpulse::kVersion));
  app.require_subcommand(1);

  using adpulse::io::Action;
  const std::pair<const char*, Action> actions[] = {
      {"spectrum", Action::spectrum}, {"sweep", Action::sweep},         {"polarize", Action::polarize},
      {"storage", Action::storage},   {"lzcompare", Action::lzcompare},
  };
  const char* help[] = {"Floquet eigenphase spectrum and anticrossings", "single adiabatic sweep trajectory",
                        "repeated sweeps with electron reinitialization", "electron-to-nucleus storage gate",
                        "exact sweeps vs the Landau-Zener closed form"};
  RunArgs args;
  std::optional<Action> chosen;
  for (int i = 0; i < 5; ++i) {
    auto* sub = app.add_subcommand(actions[i].first, help[i]);
    add_run_flags(sub, args);
    const Action act = actions[i].second;
    sub->callback([&chosen, act] { chosen = act; });
  }

  std::string csv, kind, svg;
  auto* plot = app.add_subcommand("plot", "render a CSV produced by adpulse as SVG");
  plot->add_option("--csv", csv, "input CSV")->required()->check(CLI::ExistingFile);
  plot->add_option("--kind", kind, "spectrum | trajectory | fidelity")->required();
  plot->add_option("--out", svg, "output SVG (default: CSV path with .svg)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (chosen) return run(*chosen, args);
    std::filesystem::path out = svg.empty() ? std::filesystem::path(csv).replace_extension(".svg") : std::filesystem::path(svg);
    adpulse::io::emit_plot(csv, adpulse::io::plot_kind_from_string(kind), out);
    std::cout << out.string() << "\n";
    return kOk;
  } catch (const adpulse::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const adpulse::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const adpulse::InvariantError& e) {
    std::cerr << "numerical invariant violated: " << e.what() << "\n";
    return kInvariant;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
}
