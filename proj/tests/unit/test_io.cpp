#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "adpulse/errors.hpp"
#include "adpulse/io/csv.hpp"
#include "adpulse/io/plot.hpp"
#include "adpulse/io/runner.hpp"
#include "adpulse/io/scenario.hpp"

using namespace adpulse;
using namespace adpulse::io;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"(name = minimal
action = spectrum

[system]
larmor_khz = 431.5

[nucleus C1]
a_x_khz = 26.6
a_z_khz = 0

[protocol]
family = cpmg

[sweep]
tau_ini_us = 1.0
tau_fin_us = 1.3
)";

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("adpulse_unit_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  if (pos != std::string::npos) s.replace(pos, from.size(), to);
  return s;
}

std::string config_error(const std::string& text) {
  try {
    parse_scenario_text(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

int count(const std::string& s, const std::string& needle) {
  int n = 0;
  for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++n;
  return n;
}

Scenario preset(const std::string& name) {
  return parse_scenario(fs::path(ADPULSE_SCENARIO_DIR) / (name + ".cfg"));
}

}  // namespace

TEST(Scenario, MinimalResolvesDefaults) {
  const auto s = parse_scenario_text(kMinimal);
  EXPECT_EQ(s.name, "minimal");
  EXPECT_EQ(s.action, Action::spectrum);
  EXPECT_EQ(s.sweep.n_p, 1);
  EXPECT_EQ(s.sweep.repetitions, 1);
  EXPECT_EQ(s.output_dir, "out/minimal");
  ASSERT_EQ(s.system.nuclei.size(), 1u);
  const auto sys = make_system(s);
  EXPECT_NEAR(sys.omega_L, kTwoPi * 431.5e3, 1e-6);
  EXPECT_NEAR(sys.nuclei[0].a_x, kTwoPi * 26.6e3, 1e-9);
  const auto sched = make_schedule(s);
  EXPECT_NEAR(sched.delta_tau, 1e-9, 1e-24);
  EXPECT_EQ(sched.n_steps(), 301);
}

TEST(Scenario, DeltaThetaInPiUnits) {
  auto text = replace(kMinimal, "family = cpmg", "family = polcpmg\ndelta_theta_pi_units = 0.25");
  const auto s = parse_scenario_text(text);
  EXPECT_NEAR(make_protocol(s).delta_theta, 0.25 * kPi, 1e-15);
}

TEST(Scenario, WrongUnitSuffixNamesTheKey) {
  const auto msg = config_error(replace(kMinimal, "a_x_khz = 26.6", "a_x_mhz = 0.0266"));
  EXPECT_NE(msg.find("a_x_mhz"), std::string::npos) << msg;
  EXPECT_NE(msg.find("a_x_khz"), std::string::npos) << msg;
}

TEST(Scenario, UnknownKeysAndSectionsRejected) {
  EXPECT_NE(config_error(replace(kMinimal, "family = cpmg", "family = cpmg\nflavour = x")).find("flavour"),
            std::string::npos);
  EXPECT_NE(config_error(std::string(kMinimal) + "\n[extras]\nx = 1\n").find("extras"), std::string::npos);
  EXPECT_FALSE(config_error(replace(kMinimal, "family = cpmg", "family = xy8")).empty());
  EXPECT_FALSE(config_error(replace(kMinimal, "tau_fin_us = 1.3", "tau_fin_us = abc")).empty());
  EXPECT_FALSE(config_error(replace(kMinimal, "larmor_khz = 431.5", "larmor_khz = 431.5\nb_field_tesla = 1.0")).empty());
  EXPECT_THROW(parse_scenario("/nonexistent/scenario.cfg"), ConfigError);
}

TEST(Scenario, RegistryAndRandomRegisters) {
  auto reg = replace(kMinimal, "[nucleus C1]\na_x_khz = 26.6\na_z_khz = 0\n", "");
  reg = replace(reg, "larmor_khz = 431.5", "larmor_khz = 431.5\nregistry = C1,C3");
  const auto s = parse_scenario_text(reg);
  ASSERT_EQ(s.system.nuclei.size(), 2u);
  EXPECT_EQ(s.system.nuclei[1].label, "C3");

  const auto rnd = replace(reg, "registry = C1,C3", "registry = random:4");
  ParseOptions a, b;
  a.seed = 7;
  b.seed = 8;
  const auto s7 = parse_scenario_text(rnd, a), s7b = parse_scenario_text(rnd, a), s8 = parse_scenario_text(rnd, b);
  EXPECT_EQ(s7.system.nuclei.size(), 4u);
  EXPECT_EQ(s7, s7b);
  EXPECT_NE(s7.system, s8.system);
  for (const auto& n : s7.system.nuclei) {
    EXPECT_GE(n.a_x_khz, 20.0);
    EXPECT_LE(n.a_x_khz, 60.0);
  }
}

TEST(Scenario, RoundTripOfResolvedForm) {
  for (const char* name : {"fig1_whole_bath_flip", "fig2a_single_spin_polcpmg", "fig2b_cluster_repeats",
                           "fig3_storage", "lz_scaling"}) {
    const auto s = preset(name);
    const auto again = parse_scenario_text(emit_scenario(s));
    EXPECT_EQ(again, s) << name;
    EXPECT_EQ(emit_scenario(again), emit_scenario(s)) << name;
  }
}

TEST(Csv, WriteReadRoundTrip) {
  CsvTable t;
  t.header = {"tau_s", "label", "P"};
  t.add_row({format_number(1.1587e-6), "Mz=+5/2|e=0", format_number(-0.1)});
  t.add_row({format_number(0.1 + 0.2), "x", format_number(std::nan(""))});
  EXPECT_THROW(t.add_row({"1"}), InvariantError);
  const auto dir = scratch("csv");
  fs::create_directories(dir);
  write_csv(dir / "t.csv", t);
  const auto back = read_csv(dir / "t.csv");
  EXPECT_EQ(back.header, t.header);
  EXPECT_EQ(back.rows, t.rows);
  EXPECT_EQ(parse_field(back.rows[1][0]), 0.1 + 0.2);
  EXPECT_TRUE(std::isnan(parse_field(back.rows[1][2])));
  EXPECT_EQ(back.column("P"), 2);
  EXPECT_FALSE(back.has("Q"));
  EXPECT_THROW(parse_csv_text("a,b\n1,2,3\n"), ConfigError);
}

TEST(Plot, EmptyTableGivesAxesOnly) {
  CsvTable t;
  t.header = {"tau_s", "branch_id", "eigenphase_rad", "label", "gap_to_nearest_rad"};
  const auto svg = render_svg(t, PlotKind::spectrum);
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_NE(svg.find("class=\"axes\""), std::string::npos);
  EXPECT_EQ(count(svg, "class=\"series\""), 0);
}

TEST(Plot, OnePathPerBranch) {
  CsvTable t;
  t.header = {"tau_s", "branch_id", "eigenphase_rad", "label", "gap_to_nearest_rad"};
  for (int b = 0; b < 4; ++b)
    for (int k = 0; k < 5; ++k)
      t.add_row({format_number(1e-6 + k * 1e-8), std::to_string(b), format_number(0.1 * b + 0.01 * k), "x", "0.1"});
  EXPECT_EQ(count(render_svg(t, PlotKind::spectrum), "class=\"series\""), 4);
}

TEST(Plot, TrajectoryOverlay) {
  CsvTable both;
  both.header = {"tau_s", "P_sim", "P_lz", "deviation"};
  both.add_row({"1e-6", "0", "0", "0"});
  both.add_row({"2e-6", "-0.5", "-0.6", "0.1"});
  const auto svg = render_svg(both, PlotKind::trajectory);
  EXPECT_EQ(count(svg, "class=\"series\""), 2);
  EXPECT_NE(svg.find("data-name=\"P_sim\""), std::string::npos);
  EXPECT_NE(svg.find("data-name=\"P_lz\""), std::string::npos);

  CsvTable bad;
  bad.header = {"tau_s", "nothing"};
  EXPECT_THROW(render_svg(bad, PlotKind::trajectory), ConfigError);
  EXPECT_THROW(plot_kind_from_string("histogram"), ConfigError);
}

TEST(Runner, SpectrumOnFig1HasExtremalLabels) {
  auto s = preset("fig1_whole_bath_flip");
  s.spectrum.points = 120;
  RunOptions o;
  o.out_dir = scratch("fig1_spectrum");
  const auto r = run_scenario(s, Action::spectrum, o);
  const auto t = read_csv(r.out_dir / "spectrum.csv");
  const int lab = t.column("label");
  ASSERT_GE(lab, 0);
  bool plus = false, minus = false;
  for (const auto& row : t.rows) {
    plus = plus || row[lab].rfind("Mz=+5/2", 0) == 0;
    minus = minus || row[lab].rfind("Mz=-5/2", 0) == 0;
  }
  EXPECT_TRUE(plus);
  EXPECT_TRUE(minus);
  EXPECT_TRUE(fs::exists(r.out_dir / "spectrum.svg"));
  EXPECT_TRUE(fs::exists(r.out_dir / "anticrossings.csv"));
  EXPECT_EQ(parse_scenario(r.out_dir / "resolved.cfg").spectrum.points, 120);
}

TEST(Runner, PolarizeFig2bReachesFullPolarization) {
  const auto s = preset("fig2b_cluster_repeats");
  RunOptions o;
  o.out_dir = scratch("fig2b");
  o.plots = false;
  const auto r = run_scenario(s, o);
  const auto t = read_csv(r.out_dir / "repetitions.csv");
  ASSERT_EQ(t.rows.size(), 15u);
  EXPECT_GE(std::abs(parse_field(t.rows.back()[t.column("P")])), 0.995);
  EXPECT_FALSE(fs::exists(r.out_dir / "trajectory.svg"));
}

TEST(Runner, ManifestContents) {
  auto s = parse_scenario_text(replace(kMinimal, "action = spectrum", "action = sweep"));
  RunOptions o;
  o.out_dir = scratch("manifest");
  const auto r = run_scenario(s, o);
  const auto m = nlohmann::json::parse(slurp(r.out_dir / "manifest.json"));
  EXPECT_EQ(m["name"], "minimal");
  EXPECT_EQ(m["action"], "sweep");
  EXPECT_TRUE(m.contains("version"));
  EXPECT_TRUE(m.contains("elapsed_s"));
  char hex[32];
  std::snprintf(hex, sizeof hex, "%016llx", (unsigned long long)fnv1a64(slurp(r.out_dir / "resolved.cfg")));
  EXPECT_EQ(m["inputs_hash"], std::string("fnv1a64:") + hex);
  for (const auto& a : m["artifacts"]) EXPECT_TRUE(fs::exists(r.out_dir / a.get<std::string>())) << a;
  ASSERT_NE(r.find("P_final"), nullptr);
}

TEST(Runner, ErrorsCarryScenarioContext) {
  auto s = parse_scenario_text(kMinimal);
  RunOptions o;
  o.out_dir = scratch("context");
  try {
    run_scenario(s, Action::storage, o);
    FAIL() << "storage with CPMG should fail";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("minimal"), std::string::npos);
  }
}

TEST(Runner, RerunsAreByteIdentical) {
  for (const char* name : {"fig2a_single_spin_polcpmg", "fig3_storage"}) {
    auto s = preset(name);
    RunOptions a, b;
    a.out_dir = scratch(std::string(name) + "_a");
    b.out_dir = scratch(std::string(name) + "_b");
    s.threads = 1;
    const auto ra = run_scenario(s, a);
    s.threads = 4;
    const auto rb = run_scenario(s, b);
    ASSERT_EQ(ra.artifacts, rb.artifacts);
    int csvs = 0;
    for (const auto& f : ra.artifacts) {
      if (fs::path(f).extension() != ".csv") continue;
      ++csvs;
      EXPECT_EQ(slurp(ra.out_dir / f), slurp(rb.out_dir / f)) << name << "/" << f;
    }
    EXPECT_GT(csvs, 0);
  }
}
