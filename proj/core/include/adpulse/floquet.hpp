#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "adpulse/propagator.hpp"

namespace adpulse {

struct FloquetPoint {
  double tau = 0.0;
  Eigen::VectorXd eigenphases;  // arg(lambda) in (-pi, pi]
  Mat eigenvectors;             // column l belongs to eigenphases(l)
  std::vector<std::string> labels;
};

// Eigenphases and orthonormal eigenvectors of a unitary U (complex Schur form of a normal matrix).
// Gauge: largest-magnitude component of every eigenvector real and positive.
FloquetPoint floquet_decompose(const Propagator& propagator);

enum class FoldWindow { full, half };  // (-pi, pi] or (-pi/2, pi/2]

double fold_phase(double phase, FoldWindow window);
Eigen::VectorXd fold_eigenphases(const FloquetPoint& point, FoldWindow window);

// Wrapped distance between two phases, in [0, pi].
double phase_distance(double a, double b);

struct BranchTag {
  double mz = 0.0;        // asymptotic total nuclear M_z (half-integer)
  std::string electron;   // "0", "1", "X+", "X-"
  std::string text;       // e.g. "Mz=+5/2|e=0"
};

enum class Assignment { greedy, optimal };

struct ScanOptions {
  double overlap_floor = 0.5;
  Assignment assignment = Assignment::greedy;  // optimal is always used as fallback below the floor
  int threads = 1;
  ExpMethod method = ExpMethod::fast;
  double degeneracy_tol = 1e-9;  // rad
};

struct CrossingFlag {
  int step = 0;    // grid index k+1 whose assignment was ambiguous
  int branch = 0;
  double overlap = 0.0;
  std::string alternative;  // label of the competing branch
};

// Points are stored in branch order: points[k].eigenvectors.col(b) is branch b at tau_k.
struct FloquetSpectrum {
  SpinSystem system;
  ProtocolSpec spec;
  ExpMethod method = ExpMethod::fast;
  std::vector<FloquetPoint> points;
  std::vector<std::vector<int>> branch_map;  // per step k -> k+1: raw eigen index taken by branch b
  std::vector<BranchTag> tags;               // per branch, from the grid start
  std::vector<CrossingFlag> flags;

  int n_branches() const { return points.empty() ? 0 : int(points.front().eigenphases.size()); }
  double phase(int k, int branch) const { return points[k].eigenphases(branch); }
};

FloquetSpectrum scan_spectrum(const SpinSystem& system, const ProtocolSpec& spec,
                              const std::vector<double>& tau_grid, const ScanOptions& options = {});

std::vector<double> linear_grid(double lo, double hi, int points);

// Asymptotic tag of a state vector (M_z rounded to a half-integer, electron character).
BranchTag tag_state(const Vec& v, const SpinSystem& system);

struct Anticrossing {
  double tau_center = 0.0;
  double gap = 0.0;  // rad
  std::vector<std::pair<int, int>> branch_pairs;
  bool true_crossing = false;  // gap below the numerical floor
};

struct AnticrossingOptions {
  double threshold_factor = 0.2;  // gap < factor * median nearest-neighbour spacing
  std::optional<double> threshold;  // absolute override (rad)
  double floor = 1e-6;             // refined gaps below this are true crossings
  bool include_true_crossings = false;
  double tau_min = 0.0, tau_max = 0.0;  // restrict results, 0/0 = whole grid
  int threads = 1;
};

std::vector<Anticrossing> locate_anticrossings(const FloquetSpectrum& spectrum,
                                               const AnticrossingOptions& options = {});

// Phase gap between the two eigen-clusters of U(tau) that best cover span{va, vb}.
double pair_gap(const PeriodPropagator& period, double tau, const Vec& va, const Vec& vb,
                double degeneracy_tol = 1e-9);

// Located PolCPMG split resonances tau- < tau+ around harmonic j of one nucleus
// (largest anticrossing on each side of the unsplit tau_r).
struct SplitResonances {
  double tau_minus = 0.0, tau_plus = 0.0;
  double gap_minus = 0.0, gap_plus = 0.0;
};

SplitResonances locate_split_resonances(const SpinSystem& system, const ProtocolSpec& spec,
                                        int nucleus, int j, int grid_points = 600);

}  // namespace adpulse
