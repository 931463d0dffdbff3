#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "adpulse/errors.hpp"
#include "adpulse/registry.hpp"
#include "adpulse/spin_model.hpp"
#include "oracles.hpp"

using namespace adpulse;

namespace {

const double kWL = khz_to_angular(431.5);

std::vector<double> sorted_eigenvalues(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(v.begin(), v.end());
  return v;
}

SpinSystem random_system(int n, unsigned seed, bool zero_ax = false) {
  auto nuc = random_register(n, seed);
  if (zero_ax)
    for (auto& x : nuc) x.a_x = 0.0;
  return make_system(kWL, nuc);
}

double comm_norm(const Mat& a, const Mat& b) { return (a * b - b * a).cwiseAbs().maxCoeff(); }

}  // namespace

TEST(SpinModel, ElectronSzEmbeddingEigenvalues) {
  const auto ops = build_spin_operators(make_system(kWL, registry_nuclei({"C1"})));
  const auto ev = sorted_eigenvalues(ops.Sz);
  ASSERT_EQ(ev.size(), 4u);
  EXPECT_NEAR(ev[0], -0.5, 1e-15);
  EXPECT_NEAR(ev[1], -0.5, 1e-15);
  EXPECT_NEAR(ev[2], 0.5, 1e-15);
  EXPECT_NEAR(ev[3], 0.5, 1e-15);
}

TEST(SpinModel, SpinAlgebra) {
  const auto ops = build_spin_operators(random_system(2, 3));
  const cplx i(0, 1);
  EXPECT_LT((ops.Sx * ops.Sy - ops.Sy * ops.Sx - i * ops.Sz).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((ops.Ix[1] * ops.Iy[1] - ops.Iy[1] * ops.Ix[1] - i * ops.Iz[1]).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_EQ(comm_norm(ops.Iz[0], ops.Iz[1]), 0.0);
  EXPECT_EQ(comm_norm(ops.Ix[0], ops.Iy[1]), 0.0);
}

TEST(SpinModel, OperatorsMatchKroneckerOracle) {
  const auto ops = build_spin_operators(random_system(3, 5));
  EXPECT_LT((ops.Sx - oracle::site_operator(oracle::spin('x'), 0, 4)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((ops.Sz - oracle::site_operator(oracle::spin('z'), 0, 4)).cwiseAbs().maxCoeff(), 1e-15);
  for (int k = 0; k < 3; ++k) {
    EXPECT_LT((ops.Iy[k] - oracle::site_operator(oracle::spin('y'), k + 1, 4)).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((ops.Iz[k] - oracle::site_operator(oracle::spin('z'), k + 1, 4)).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(SpinModel, BareLarmorSpectrum) {
  const auto ev = sorted_eigenvalues(free_hamiltonian(make_system(kWL, {{"A", 0.0, 0.0}})));
  EXPECT_NEAR(ev[0], -kWL / 2, 1e-9);
  EXPECT_NEAR(ev[1], -kWL / 2, 1e-9);
  EXPECT_NEAR(ev[2], kWL / 2, 1e-9);
  EXPECT_NEAR(ev[3], kWL / 2, 1e-9);
}

TEST(SpinModel, FreeHamiltonianMatchesOracleInBothCouplings) {
  const auto nuc = random_register(3, 11);
  std::vector<oracle::Spin> spins;
  for (const auto& n : nuc) spins.push_back({n.a_x, n.a_z});
  const Mat nv = free_hamiltonian(make_system(kWL, nuc));
  const Mat sym = free_hamiltonian(make_system(kWL, nuc, ElectronCoupling::symmetric));
  EXPECT_LT((nv - oracle::free_hamiltonian(kWL, spins, 0.0, 1.0)).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_LT((sym - oracle::free_hamiltonian(kWL, spins, 0.5, -0.5)).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(SpinModel, ElectronBlockSymmetricCoupling) {
  // Electron S_z = +1/2 block (basis |0>): (w_L + A_z/2) I_z + (A_x/2) I_x.
  const double ax = khz_to_angular(26.6), az = khz_to_angular(60.0);
  const Mat h = free_hamiltonian(make_system(kWL, {{"C1", ax, az}}, ElectronCoupling::symmetric));
  const Mat up = h.topLeftCorner(2, 2);
  const Mat expect = (kWL + az / 2) * oracle::spin('z') + (ax / 2) * oracle::spin('x');
  EXPECT_LT((up - expect).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_EQ(h.topRightCorner(2, 2).cwiseAbs().maxCoeff(), 0.0);
}

TEST(SpinModel, ElectronBlockNvCoupling) {
  const double ax = khz_to_angular(26.6), az = khz_to_angular(60.0);
  const Mat h = free_hamiltonian(make_system(kWL, {{"C1", ax, az}}));
  EXPECT_LT((h.topLeftCorner(2, 2) - kWL * oracle::spin('z')).cwiseAbs().maxCoeff(), 1e-8);
  const Mat expect = (kWL + az) * oracle::spin('z') + ax * oracle::spin('x');
  EXPECT_LT((h.bottomRightCorner(2, 2) - expect).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(SpinModel, EnergyOfAllDownState) {
  const auto nuc = random_register(4, 2);
  for (auto coupling : {ElectronCoupling::nv, ElectronCoupling::symmetric}) {
    const auto sys = make_system(kWL, nuc, coupling);
    const Mat h = free_hamiltonian(sys);
    // |0> (x) |down...down>: last index of the electron-0 block.
    const int idx = sys.nuclear_dim() - 1;
    double expect = -0.5 * sys.n_nuclei() * kWL;
    if (coupling == ElectronCoupling::symmetric)
      for (const auto& n : nuc) expect += 0.5 * n.a_z * (-0.5);
    EXPECT_NEAR(h(idx, idx).real(), expect, 1e-6);
  }
}

TEST(SpinModel, DriveHamiltonian) {
  const auto sys = make_system(kWL, registry_nuclei({"C1", "C2"}));
  EXPECT_EQ(drive_hamiltonian(sys, 0.0, Axis::x).cwiseAbs().maxCoeff(), 0.0);
  const Mat h = free_hamiltonian(sys) + drive_hamiltonian(sys, 1e7, Axis::y);
  EXPECT_LT(hermiticity_error(h), 1e-12);
  EXPECT_THROW(drive_hamiltonian(sys, -1.0, Axis::x), DomainError);

  // exp(-i pi S_x): |0> -> -i |1>, nuclei untouched.
  const auto one = make_system(kWL, registry_nuclei({"C1"}));
  const Mat u = oracle::expm(cplx(0, -kPi) * drive_hamiltonian(one, 1.0, Axis::x));
  EXPECT_NEAR(std::abs(u(2, 0) - cplx(0, -1)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(u(3, 1) - cplx(0, -1)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(u(0, 0)), 0.0, 1e-12);
}

TEST(SpinModel, HermitianAndCommutesWithSz) {
  for (unsigned seed = 1; seed <= 4; ++seed) {
    const auto sys = random_system(3, seed);
    const Mat h = free_hamiltonian(sys);
    const auto ops = build_spin_operators(sys);
    EXPECT_LT(hermiticity_error(h), 1e-12);
    EXPECT_LT(comm_norm(h, ops.Sz), 1e-8);
  }
}

TEST(SpinModel, CommutesWithMzOnlyWithoutTransverseCoupling) {
  for (unsigned seed = 1; seed <= 4; ++seed) {
    for (bool zero : {true, false}) {
      const auto sys = random_system(3, seed, zero);
      const auto ops = build_spin_operators(sys);
      Mat mz = ops.Iz[0] + ops.Iz[1] + ops.Iz[2];
      const double c = comm_norm(free_hamiltonian(sys), mz);
      if (zero)
        EXPECT_LT(c, 1e-8);
      else
        EXPECT_GT(c, 1e3);
    }
  }
}

TEST(SpinModel, NuclearPermutationPreservesSpectrum) {
  auto nuc = random_register(3, 21);
  const auto a = sorted_eigenvalues(free_hamiltonian(make_system(kWL, nuc)));
  std::swap(nuc[0], nuc[2]);
  const auto b = sorted_eigenvalues(free_hamiltonian(make_system(kWL, nuc)));
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-10 * kWL);
}

TEST(SpinModel, Validation) {
  EXPECT_THROW(make_system(kWL, {}), DomainError);
  EXPECT_THROW(make_system(-1.0, {{"A", 1.0, 0.0}}), DomainError);
  EXPECT_THROW(make_system(kWL, {{"A", 1.0, 0.0}, {"A", 2.0, 0.0}}), DomainError);
  EXPECT_THROW(make_system(kWL, {{"A", -1.0, 0.0}}), DomainError);
  std::vector<NuclearSpec> many;
  for (int k = 0; k <= kMaxNuclei; ++k) many.push_back({"N" + std::to_string(k), 1.0, 0.0});
  EXPECT_THROW(make_system(kWL, many), DomainError);
}

TEST(SpinModel, FieldConversionAndSubsystem) {
  const auto sys = make_system_from_field(0.0403, registry_nuclei({"C1", "C2", "C3"}));
  EXPECT_NEAR(sys.omega_L, kTwoPi * kGammaC13 * 0.0403, 1e-6);
  const auto sub = subsystem(sys, {1});
  EXPECT_EQ(sub.n_nuclei(), 1);
  EXPECT_EQ(sub.nuclei[0].label, "C2");
  EXPECT_EQ(sys.index_of("C3"), 2);
  EXPECT_EQ(sys.index_of("C9"), -1);
  EXPECT_THROW(registry_nucleus("C9"), ConfigError);
}
