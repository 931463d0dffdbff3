#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "adpulse/errors.hpp"
#include "adpulse/floquet.hpp"
#include "adpulse/registry.hpp"
#include "oracles.hpp"

using namespace adpulse;

namespace {

const double kWL = khz_to_angular(431.5);

Propagator wrap(const Mat& m) { return {m, 1e-6, 2e-6}; }

double wrap_diff(double a, double b) { return std::abs(std::remainder(a - b, kTwoPi)); }

}  // namespace

TEST(Floquet, IdentityHasZeroPhases) {
  const auto p = floquet_decompose(wrap(Mat::Identity(4, 4)));
  for (Eigen::Index i = 0; i < 4; ++i) EXPECT_NEAR(p.eigenphases(i), 0.0, 1e-15);
}

TEST(Floquet, ElectronPiRotation) {
  const Mat u = oracle::expm(cplx(0, -kPi) * oracle::spin('x'));
  auto ph = floquet_decompose(wrap(u)).eigenphases;
  std::sort(ph.data(), ph.data() + ph.size());
  EXPECT_NEAR(ph(0), -kPi / 2, 1e-14);
  EXPECT_NEAR(ph(1), kPi / 2, 1e-14);
}

TEST(Floquet, DecompositionReconstructsPropagator) {
  const auto sys = make_system(kWL, random_register(3, 17));
  for (auto fam : {Family::cpmg, Family::pulsepol}) {
    const auto prop = one_period_propagator(sys, build_sequence(make_protocol(fam), 0.93e-6));
    const auto p = floquet_decompose(prop);
    const Mat& v = p.eigenvectors;
    const Eigen::Index d = v.cols();
    EXPECT_LT((v.adjoint() * v - Mat::Identity(d, d)).cwiseAbs().maxCoeff(), 1e-8);
    Mat lam = Mat::Zero(d, d);
    for (Eigen::Index l = 0; l < d; ++l) lam(l, l) = std::polar(1.0, p.eigenphases(l));
    EXPECT_LT((v * lam * v.adjoint() - prop.matrix).cwiseAbs().maxCoeff(), 1e-10);
    for (Eigen::Index l = 0; l < d; ++l) {
      Eigen::Index imax;
      v.col(l).cwiseAbs().maxCoeff(&imax);
      EXPECT_NEAR(v(imax, l).imag(), 0.0, 1e-12);
      EXPECT_GT(v(imax, l).real(), 0.0);
      EXPECT_GT(p.eigenphases(l), -kPi);
      EXPECT_LE(p.eigenphases(l), kPi);
    }
  }
}

TEST(Floquet, PhasesMatchGeneralEigensolverOracle) {
  const auto sys = make_system(kWL, random_register(2, 5));
  const auto prop = one_period_propagator(sys, build_sequence(make_protocol(Family::polcpmg, 0.25 * kPi), 1.1e-6));
  auto ph = floquet_decompose(prop).eigenphases;
  std::vector<double> lib(ph.data(), ph.data() + ph.size());
  std::sort(lib.begin(), lib.end());
  const auto ref = oracle::eigenphases(prop.matrix);
  for (std::size_t i = 0; i < lib.size(); ++i) EXPECT_LT(wrap_diff(lib[i], ref[i]), 1e-10);
}

TEST(Floquet, PhaseSumEqualsArgDeterminant) {
  // Our phases are arg(lambda), so their sum is arg det U (mod 2 pi).
  const auto sys = make_system(kWL, random_register(3, 2));
  const PeriodPropagator pp(sys, make_protocol(Family::pulsepol));
  for (double tau : linear_grid(0.5e-6, 1.5e-6, 9)) {
    const auto prop = pp(tau);
    const double s = floquet_decompose(prop).eigenphases.sum();
    EXPECT_LT(wrap_diff(s, std::arg(prop.matrix.determinant())), 1e-8);
  }
}

TEST(Floquet, Folding) {
  EXPECT_NEAR(fold_phase(3 * kPi / 4, FoldWindow::half), -kPi / 4, 1e-15);
  EXPECT_EQ(fold_phase(0.0, FoldWindow::half), 0.0);
  EXPECT_EQ(fold_phase(0.0, FoldWindow::full), 0.0);
  for (double x : {-3.1, -1.0, 0.4, 2.9, kPi}) EXPECT_EQ(fold_phase(x, FoldWindow::full), x);
  EXPECT_NEAR(fold_phase(kPi / 2, FoldWindow::half), kPi / 2, 1e-15);
  EXPECT_NEAR(fold_phase(-kPi / 2, FoldWindow::half), kPi / 2, 1e-15);
  EXPECT_NEAR(phase_distance(3.1, -3.1), kTwoPi - 6.2, 1e-12);
}

TEST(Floquet, UncoupledBranchesAreStraightLines) {
  const auto sys = make_system(kWL, {{"A", 0.0, khz_to_angular(30)}, {"B", 0.0, khz_to_angular(-15)}});
  const auto grid = linear_grid(0.9e-6, 1.4e-6, 200);
  const auto sp = scan_spectrum(sys, make_protocol(Family::cpmg), grid);
  for (int b = 0; b < sp.n_branches(); ++b) {
    std::vector<double> y(grid.size());
    y[0] = sp.phase(0, b);
    for (std::size_t k = 1; k < grid.size(); ++k)
      y[k] = y[k - 1] + std::remainder(sp.phase(int(k), b) - sp.phase(int(k) - 1, b), kTwoPi);
    // least-squares line
    const double n = double(grid.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double x = (grid[k] - grid[0]) * 1e6;
      sx += x, sy += y[k], sxx += x * x, sxy += x * y[k];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx), icpt = (sy - slope * sx) / n;
    double resid = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k)
      resid = std::max(resid, std::abs(y[k] - icpt - slope * (grid[k] - grid[0]) * 1e6));
    EXPECT_LT(resid, 1e-8) << "branch " << b;
  }
  EXPECT_TRUE(locate_anticrossings(sp).empty());
}

TEST(Floquet, AssignmentStrategiesAgreeOnPhaseSets) {
  const auto sys = make_system(kWL, registry_nuclei({"C1", "C2"}));
  const auto grid = linear_grid(1.0e-6, 1.3e-6, 120);
  ScanOptions greedy, optimal;
  optimal.assignment = Assignment::optimal;
  const auto a = scan_spectrum(sys, make_protocol(Family::cpmg), grid, greedy);
  const auto b = scan_spectrum(sys, make_protocol(Family::cpmg), grid, optimal);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    std::vector<double> pa(a.points[k].eigenphases.data(), a.points[k].eigenphases.data() + 8);
    std::vector<double> pb(b.points[k].eigenphases.data(), b.points[k].eigenphases.data() + 8);
    std::sort(pa.begin(), pa.end());
    std::sort(pb.begin(), pb.end());
    for (int i = 0; i < 8; ++i) EXPECT_NEAR(pa[i], pb[i], 1e-12);
  }
  EXPECT_EQ(a.tags.size(), b.tags.size());
}

TEST(Floquet, BranchesFollowEigenvectorContinuity) {
  const auto sys = make_system(kWL, registry_nuclei({"C1", "C3"}));
  const auto sp = scan_spectrum(sys, make_protocol(Family::cpmg), linear_grid(1.0e-6, 1.3e-6, 300));
  for (std::size_t k = 1; k < sp.points.size(); ++k)
    for (int b = 0; b < sp.n_branches(); ++b) {
      const double o = std::abs(sp.points[k - 1].eigenvectors.col(b).dot(sp.points[k].eigenvectors.col(b)));
      EXPECT_GT(o, 0.5) << "step " << k << " branch " << b;
    }
}

TEST(Floquet, ExtremalManifoldLabelsForFiveSpins) {
  const auto sys = make_system(kWL, registry_nuclei({"C1", "C2", "C3", "C4", "C5"}));
  const auto sp = scan_spectrum(sys, make_protocol(Family::cpmg), linear_grid(0.8e-6, 1.55e-6, 300));
  std::multiset<std::string> extremal;
  for (const auto& t : sp.tags)
    if (std::abs(t.mz) == 2.5) extremal.insert(t.text);
  // One branch per electron level on each side.
  const std::multiset<std::string> expect = {"Mz=+5/2|e=0", "Mz=+5/2|e=1", "Mz=-5/2|e=0", "Mz=-5/2|e=1"};
  EXPECT_EQ(extremal, expect);
}

TEST(Floquet, SingleSpinAnticrossingAtResonance) {
  const auto sys = make_system(kWL, {{"A", khz_to_angular(10), 0.0}});
  const auto spec = make_protocol(Family::cpmg);
  const double tr = resonance_tau(spec, sys, 0, 1);
  const auto grid = linear_grid(tr - 0.15e-6, tr + 0.15e-6, 301);
  const auto ac = locate_anticrossings(scan_spectrum(sys, spec, grid));
  ASSERT_EQ(ac.size(), 1u);
  EXPECT_LT(std::abs(ac[0].tau_center - tr), grid[1] - grid[0]);
  EXPECT_GT(ac[0].gap, 1e-3);

  // Strong coupling: with four levels the gap is comparable to the median spacing, so the
  // relative threshold misses it; an absolute one finds it, pulled ~1 ns below tau_r.
  const auto strong = make_system(kWL, registry_nuclei({"C1"}));
  const double ts = resonance_tau(spec, strong, 0, 1);
  const auto sgrid = linear_grid(ts - 0.15e-6, ts + 0.15e-6, 301);
  const auto sp = scan_spectrum(strong, spec, sgrid);
  EXPECT_TRUE(locate_anticrossings(sp).empty());
  AnticrossingOptions abs_opt;
  abs_opt.threshold = 0.2;
  const auto ac2 = locate_anticrossings(sp, abs_opt);
  ASSERT_EQ(ac2.size(), 1u);
  EXPECT_LT(ac2[0].tau_center, ts);
  EXPECT_LT(std::abs(ac2[0].tau_center - ts), 2 * (sgrid[1] - sgrid[0]));
  EXPECT_GT(ac2[0].gap, 0.1);
}

TEST(Floquet, TwoSpinAnticrossingsMatchDenseGridOracle) {
  const std::vector<NuclearSpec> nuc = {{"A", khz_to_angular(8), khz_to_angular(20)},
                                        {"B", khz_to_angular(12), khz_to_angular(-25)}};
  const auto sys = make_system(kWL, nuc);
  const auto ac = locate_anticrossings(scan_spectrum(sys, make_protocol(Family::cpmg), linear_grid(0.9e-6, 1.4e-6, 1000)));

  const int points = 4000;
  const double h = 0.5e-6 / (points - 1);
  auto minima = oracle::dense_gap_minima(kWL, {{nuc[0].a_x, nuc[0].a_z}, {nuc[1].a_x, nuc[1].a_z}},
                                         oracle::Protocol::cpmg, 0.0, 0.9e-6, 1.4e-6, points, 1e-3, 1.0);
  // Partner pairs show the same minimum twice.
  std::vector<oracle::GapMinimum> unique;
  for (const auto& m : minima)
    if (unique.empty() || std::abs(unique.back().tau - m.tau) > 2 * h) unique.push_back(m);

  ASSERT_EQ(ac.size(), unique.size());
  for (std::size_t i = 0; i < ac.size(); ++i) {
    EXPECT_LT(std::abs(ac[i].tau_center - unique[i].tau), 2 * h);
    EXPECT_NEAR(ac[i].gap, unique[i].gap, 1e-3 * unique[i].gap + 1e-6);
  }
}

TEST(Floquet, PolCpmgSplitResonances) {
  const auto sys = make_system(kWL, registry_nuclei({"C1"}));
  const auto spec = make_protocol(Family::polcpmg, 0.25 * kPi);
  const auto sr = locate_split_resonances(sys, spec, 0, 1);
  const double tr = resonance_tau(spec, sys, 0, 1);
  EXPECT_LT(sr.tau_minus, tr);
  EXPECT_GT(sr.tau_plus, tr);
  EXPECT_GT(sr.gap_minus, 1e-3);
  EXPECT_GT(sr.gap_plus, 1e-3);

  const auto ac = locate_anticrossings(scan_spectrum(sys, spec, linear_grid(0.7e-6, 1.7e-6, 800)));
  int near_minus = 0, near_plus = 0;
  for (const auto& a : ac) {
    if (std::abs(a.tau_center - sr.tau_minus) < 5e-9) ++near_minus;
    if (std::abs(a.tau_center - sr.tau_plus) < 5e-9) ++near_plus;
  }
  EXPECT_GE(near_minus, 1);
  EXPECT_GE(near_plus, 1);
  EXPECT_THROW(locate_split_resonances(sys, make_protocol(Family::cpmg), 0, 1), DomainError);
}

TEST(Floquet, ScanValidation) {
  const auto sys = make_system(kWL, registry_nuclei({"C1"}));
  EXPECT_THROW(scan_spectrum(sys, make_protocol(Family::cpmg), {1e-6}), DomainError);
  EXPECT_THROW(scan_spectrum(sys, make_protocol(Family::cpmg), {1e-6, 0.9e-6}), DomainError);
}
