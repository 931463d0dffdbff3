#include "adpulse/floquet.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "adpulse/errors.hpp"
#include "adpulse/parallel.hpp"

namespace adpulse {

namespace {

void fix_gauge(Mat& vectors) {
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    auto col = vectors.col(c);
    const double top = col.cwiseAbs().maxCoeff();
    Eigen::Index pick = 0;
    // First component within rounding of the maximum, so near-ties resolve by index.
    for (Eigen::Index i = 0; i < col.size(); ++i)
      if (std::abs(col(i)) >= top - 1e-12) {
        pick = i;
        break;
      }
    const cplx z = col(pick);
    col *= std::conj(z) / std::abs(z);
  }
}

// Groups eigenvalue indices whose phases lie within tol of each other.
std::vector<std::vector<int>> phase_clusters(const Eigen::VectorXd& phases, double tol) {
  const int n = static_cast<int>(phases.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (phase_distance(phases(i), phases(j)) < tol) parent[find(i)] = find(j);
  std::vector<std::vector<int>> out;
  std::vector<int> slot(n, -1);
  for (int i = 0; i < n; ++i) {
    const int r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(out.size());
      out.emplace_back();
    }
    out[slot[r]].push_back(i);
  }
  return out;
}

Mat gather(const Mat& v, const std::vector<int>& cols) {
  Mat out(v.rows(), static_cast<Eigen::Index>(cols.size()));
  for (size_t c = 0; c < cols.size(); ++c) out.col(c) = v.col(cols[c]);
  return out;
}

// Diagonal of a generic (electron, M_z) function, used to fix bases inside degenerate eigenspaces.
Eigen::VectorXd canonical_diagonal(const SpinSystem& system) {
  const int d = system.dim();
  const int n = system.n_nuclei();
  Eigen::VectorXd g(d);
  for (int i = 0; i < d; ++i) {
    double mz = 0.0;
    for (int k = 0; k < n; ++k) mz += ((i >> (n - 1 - k)) & 1) ? -0.5 : 0.5;
    const int e = (i >> n) & 1;
    g(i) = e + 0.1 * mz + 0.0137 * ((i & ((1 << n) - 1)) % 7);
  }
  return g;
}

// Min-cost perfect assignment (Hungarian algorithm, O(n^3)). Returns row -> column.
std::vector<int> hungarian(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

std::vector<int> greedy_assignment(const Eigen::MatrixXd& overlap) {
  const int n = static_cast<int>(overlap.rows());
  std::vector<std::tuple<double, int, int>> entries;
  entries.reserve(size_t(n) * n);
  for (int b = 0; b < n; ++b)
    for (int l = 0; l < n; ++l) entries.emplace_back(overlap(b, l), b, l);
  std::stable_sort(entries.begin(), entries.end(),
                   [](const auto& a, const auto& b) { return std::get<0>(a) > std::get<0>(b); });
  std::vector<int> row(n, -1);
  std::vector<char> col_used(n, 0);
  int assigned = 0;
  for (const auto& [o, b, l] : entries) {
    if (row[b] >= 0 || col_used[l]) continue;
    row[b] = l;
    col_used[l] = 1;
    if (++assigned == n) break;
  }
  return row;
}

std::string half_integer_text(double x) {
  const long k = std::lround(2.0 * x);
  const std::string sign = k > 0 ? "+" : (k < 0 ? "-" : "");
  const long a = std::labs(k);
  if (a % 2 == 0) return sign + std::to_string(a / 2);
  return sign + std::to_string(a) + "/2";
}

}  // namespace

double phase_distance(double a, double b) {
  double d = std::fmod(std::abs(a - b), kTwoPi);
  return d > kPi ? kTwoPi - d : d;
}

double fold_phase(double phase, FoldWindow window) {
  const double w = window == FoldWindow::full ? kTwoPi : kPi;
  const double hi = w / 2;
  // Unique x = phase + m w with x in (-w/2, w/2].
  double x = phase - w * std::floor((phase + hi) / w);
  if (x <= -hi) x += w;
  if (x > hi) x -= w;
  return x;
}

Eigen::VectorXd fold_eigenphases(const FloquetPoint& point, FoldWindow window) {
  Eigen::VectorXd out = point.eigenphases;
  for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = fold_phase(out(i), window);
  return out;
}

FloquetPoint floquet_decompose(const Propagator& propagator) {
  Eigen::ComplexSchur<Mat> schur(propagator.matrix, true);
  if (schur.info() != Eigen::Success)
    throw InvariantError("Floquet eigensolver did not converge at tau = " +
                         std::to_string(propagator.tau) + " s");
  FloquetPoint p;
  p.tau = propagator.tau;
  const auto& t = schur.matrixT();
  const Eigen::Index d = t.rows();
  p.eigenphases.resize(d);
  for (Eigen::Index l = 0; l < d; ++l) {
    const cplx lam = t(l, l);
    if (std::abs(std::abs(lam) - 1.0) > 1e-10)
      throw InvariantError("Floquet eigenvalue off the unit circle at tau = " +
                           std::to_string(propagator.tau) + " s");
    double ph = std::arg(lam);
    if (ph <= -kPi) ph = kPi;
    p.eigenphases(l) = ph;
  }
  p.eigenvectors = schur.matrixU();
  fix_gauge(p.eigenvectors);
  return p;
}

std::vector<double> linear_grid(double lo, double hi, int points) {
  if (points < 2) throw DomainError("linear_grid: need at least two points");
  std::vector<double> g(points);
  for (int k = 0; k < points; ++k) g[k] = lo + (hi - lo) * k / double(points - 1);
  return g;
}

BranchTag tag_state(const Vec& v, const SpinSystem& system) {
  const int n = system.n_nuclei();
  const Eigen::Index h = v.size() / 2;
  double mz = 0.0, p0 = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double w = std::norm(v(i));
    double m = 0.0;
    for (int k = 0; k < n; ++k) m += ((i >> (n - 1 - k)) & 1) ? -0.5 : 0.5;
    mz += w * m;
    if (i < h) p0 += w;
  }
  const double sx = 2.0 * (v.head(h).adjoint() * v.tail(h))(0, 0).real();
  BranchTag tag;
  tag.mz = std::lround(2.0 * mz) / 2.0;
  const double sz = 2.0 * p0 - 1.0;
  if (std::abs(sz) >= std::abs(sx))
    tag.electron = sz >= 0 ? "0" : "1";
  else
    tag.electron = sx >= 0 ? "X+" : "X-";
  tag.text = "Mz=" + half_integer_text(tag.mz) + "|e=" + tag.electron;
  return tag;
}

FloquetSpectrum scan_spectrum(const SpinSystem& system, const ProtocolSpec& spec,
                              const std::vector<double>& tau_grid, const ScanOptions& options) {
  if (tau_grid.size() < 2) throw DomainError("scan_spectrum: need at least two grid points");
  for (size_t k = 1; k < tau_grid.size(); ++k)
    if (!(tau_grid[k] > tau_grid[k - 1])) throw DomainError("scan_spectrum: tau grid not increasing");

  FloquetSpectrum spec_out;
  spec_out.system = system;
  spec_out.spec = spec;
  spec_out.method = options.method;
  const int K = static_cast<int>(tau_grid.size());
  std::vector<FloquetPoint> raw(K);
  const PeriodPropagator period(system, spec, options.method);
  parallel_for(K, options.threads, [&](int k) { raw[k] = floquet_decompose(period(tau_grid[k])); });

  const int D = system.dim();
  const Eigen::VectorXd canon = canonical_diagonal(system);

  // Grid start: resolve degenerate eigenspaces against the canonical operator.
  {
    FloquetPoint& p0 = raw[0];
    for (const auto& cl : phase_clusters(p0.eigenphases, options.degeneracy_tol)) {
      if (cl.size() < 2) continue;
      Mat vc = gather(p0.eigenvectors, cl);
      Mat g = vc.adjoint() * canon.cast<cplx>().asDiagonal() * vc;
      Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (g + g.adjoint()));
      vc = (vc * es.eigenvectors()).eval();
      for (size_t c = 0; c < cl.size(); ++c) p0.eigenvectors.col(cl[c]) = vc.col(c);
    }
    fix_gauge(p0.eigenvectors);
  }
  spec_out.points.reserve(K);
  spec_out.points.push_back(std::move(raw[0]));
  for (int b = 0; b < D; ++b)
    spec_out.tags.push_back(tag_state(spec_out.points[0].eigenvectors.col(b), system));

  for (int k = 0; k + 1 < K; ++k) {
    const Mat& prev = spec_out.points[k].eigenvectors;
    FloquetPoint next = std::move(raw[k + 1]);

    // Rotate each degenerate eigenspace onto the previous branch vectors (Loewdin alignment).
    for (const auto& cl : phase_clusters(next.eigenphases, options.degeneracy_tol)) {
      if (cl.size() < 2) continue;
      const int m = static_cast<int>(cl.size());
      Mat vc = gather(next.eigenvectors, cl);
      const Mat w = vc.adjoint() * prev;  // m x D
      std::vector<int> order(D);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](int a, int b) { return w.col(a).squaredNorm() > w.col(b).squaredNorm(); });
      Mat ws(m, m);
      for (int c = 0; c < m; ++c) ws.col(c) = w.col(order[c]);
      Eigen::JacobiSVD<Mat> svd(ws, Eigen::ComputeFullU | Eigen::ComputeFullV);
      vc = (vc * (svd.matrixU() * svd.matrixV().adjoint())).eval();
      for (int c = 0; c < m; ++c) next.eigenvectors.col(cl[c]) = vc.col(c);
    }
    fix_gauge(next.eigenvectors);

    const Eigen::MatrixXd overlap = (prev.adjoint() * next.eigenvectors).cwiseAbs();
    std::vector<int> assign;
    bool below = true;
    if (options.assignment == Assignment::greedy) {
      assign = greedy_assignment(overlap);
      below = false;
      for (int b = 0; b < D; ++b)
        if (overlap(b, assign[b]) < options.overlap_floor) below = true;
    }
    if (below) assign = hungarian(Eigen::MatrixXd::Ones(D, D) - overlap);

    FloquetPoint ordered;
    ordered.tau = next.tau;
    ordered.eigenphases.resize(D);
    ordered.eigenvectors.resize(D, D);
    for (int b = 0; b < D; ++b) {
      ordered.eigenphases(b) = next.eigenphases(assign[b]);
      ordered.eigenvectors.col(b) = next.eigenvectors.col(assign[b]);
      const double o = overlap(b, assign[b]);
      if (o < options.overlap_floor) {
        int alt = b;
        double best = -1.0;
        for (int c = 0; c < D; ++c)
          if (c != b && overlap(c, assign[b]) > best) {
            best = overlap(c, assign[b]);
            alt = c;
          }
        spec_out.flags.push_back({k + 1, b, o, spec_out.tags[alt].text});
      }
    }
    spec_out.branch_map.push_back(std::move(assign));
    spec_out.points.push_back(std::move(ordered));
  }
  for (auto& p : spec_out.points) {
    p.labels.resize(D);
    for (int b = 0; b < D; ++b) p.labels[b] = spec_out.tags[b].text;
  }
  for (const auto& f : spec_out.flags) {
    auto& lab = spec_out.points[f.step].labels[f.branch];
    lab += "/" + f.alternative;
  }
  return spec_out;
}

double pair_gap(const PeriodPropagator& period, double tau, const Vec& va, const Vec& vb,
                double degeneracy_tol) {
  const FloquetPoint p = floquet_decompose(period(tau));
  const auto clusters = phase_clusters(p.eigenphases, degeneracy_tol);
  std::vector<std::pair<double, int>> weight;
  for (size_t c = 0; c < clusters.size(); ++c) {
    double w = 0.0;
    for (int l : clusters[c]) {
      const auto u = p.eigenvectors.col(l);
      w += std::norm(va.dot(u)) + std::norm(vb.dot(u));
    }
    weight.emplace_back(w, static_cast<int>(c));
  }
  std::stable_sort(weight.begin(), weight.end(), [](auto a, auto b) { return a.first > b.first; });
  const auto& top = clusters[weight[0].second];
  if (weight[0].first > 1.5 || weight.size() < 2) {
    // Both vectors sit in one (numerically) degenerate cluster: report its spread.
    double spread = 0.0;
    for (int a : top)
      for (int b : top) spread = std::max(spread, phase_distance(p.eigenphases(a), p.eigenphases(b)));
    return spread;
  }
  const auto& second = clusters[weight[1].second];
  return phase_distance(p.eigenphases(top.front()), p.eigenphases(second.front()));
}

std::vector<Anticrossing> locate_anticrossings(const FloquetSpectrum& spectrum,
                                               const AnticrossingOptions& options) {
  std::vector<Anticrossing> found;
  const int K = static_cast<int>(spectrum.points.size());
  const int B = spectrum.n_branches();
  if (K < 3) return found;

  auto gap = [&](int k, int i, int j) { return phase_distance(spectrum.phase(k, i), spectrum.phase(k, j)); };
  auto in_range = [&](double t) {
    if (options.tau_min == 0.0 && options.tau_max == 0.0) return true;
    return t >= options.tau_min && t <= options.tau_max;
  };

  double threshold = 0.0;
  if (options.threshold) {
    threshold = *options.threshold;
  } else {
    std::vector<double> nn;
    for (int k = 0; k < K; ++k) {
      if (!in_range(spectrum.points[k].tau)) continue;
      for (int i = 0; i < B; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (int j = 0; j < B; ++j) {
          if (j == i) continue;
          const double g = gap(k, i, j);
          if (g > 1e-7) best = std::min(best, g);
        }
        if (std::isfinite(best)) nn.push_back(best);
      }
    }
    if (nn.empty()) return found;
    std::nth_element(nn.begin(), nn.begin() + nn.size() / 2, nn.end());
    threshold = options.threshold_factor * nn[nn.size() / 2];
  }

  struct Candidate {
    int k, i, j;
  };
  std::vector<Candidate> cands;
  for (int i = 0; i < B; ++i) {
    for (int j = i + 1; j < B; ++j) {
      double gmax = 0.0;
      for (int k = 0; k < K; ++k) gmax = std::max(gmax, gap(k, i, j));
      if (gmax < options.floor) continue;  // permanently degenerate partners
      for (int k = 1; k + 1 < K; ++k) {
        const double g = gap(k, i, j);
        if (!(g <= gap(k - 1, i, j) && g < gap(k + 1, i, j) && g < threshold)) continue;
        if (!in_range(spectrum.points[k].tau)) continue;
        cands.push_back({k, i, j});
      }
    }
  }

  // Near a two-level crossing g^2 is quadratic in tau, so successive parabolic interpolation on
  // g^2 converges in a few steps; golden-section steps take over when the model misbehaves.
  const PeriodPropagator period(spectrum.system, spectrum.spec, spectrum.method);
  const double step = (spectrum.points.back().tau - spectrum.points.front().tau) / (K - 1);
  std::vector<Anticrossing> refined(cands.size());
  parallel_for(int(cands.size()), options.threads, [&](int n) {
    const auto [k, i, j] = cands[n];
    const Vec va = spectrum.points[k].eigenvectors.col(i);
    const Vec vb = spectrum.points[k].eigenvectors.col(j);
    const double lo = spectrum.points[k - 1].tau, hi = spectrum.points[k + 1].tau;
    std::array<double, 3> t = {lo, spectrum.points[k].tau, hi};
    std::array<double, 3> f = {std::pow(gap(k - 1, i, j), 2), std::pow(gap(k, i, j), 2), std::pow(gap(k + 1, i, j), 2)};
    double best_t = t[1], best_g = gap(k, i, j);
    double a = lo, b = hi;  // bracket
    for (int it = 0; it < 40 && best_g >= options.floor && (b - a) > 1e-6 * step; ++it) {
      double x = std::numeric_limits<double>::quiet_NaN();
      const double d1 = (f[1] - f[0]) / (t[1] - t[0]), d2 = (f[2] - f[1]) / (t[2] - t[1]);
      const double curv = (d2 - d1) / (t[2] - t[0]);
      if (curv > 0.0) x = 0.5 * (t[0] + t[1]) - d1 / (2.0 * curv);
      const double shrink = 1e-3 * (b - a);
      if (!(x > a + shrink && x < b - shrink) || std::abs(x - best_t) < 1e-7 * step) {
        if (std::abs(x - best_t) < 1e-7 * step) break;  // converged
        x = best_t - a > b - best_t ? best_t - 0.382 * (best_t - a) : best_t + 0.382 * (b - best_t);
      }
      const double gx = pair_gap(period, x, va, vb);
      if (gx < best_g) {
        (x < best_t ? b : a) = best_t;
        best_t = x;
        best_g = gx;
      } else {
        (x < best_t ? a : b) = x;
      }
      // keep the three lowest points for the next fit
      std::array<std::pair<double, double>, 4> pts = {{{f[0], t[0]}, {f[1], t[1]}, {f[2], t[2]}, {gx * gx, x}}};
      std::sort(pts.begin(), pts.end());
      std::array<std::pair<double, double>, 3> keep = {pts[0], pts[1], pts[2]};
      std::sort(keep.begin(), keep.end(), [](auto p, auto q) { return p.second < q.second; });
      for (int m = 0; m < 3; ++m) f[m] = keep[m].first, t[m] = keep[m].second;
      if (t[1] - t[0] <= 0.0 || t[2] - t[1] <= 0.0) break;
    }
    Anticrossing ac;
    ac.tau_center = best_t;
    ac.gap = best_g;
    ac.true_crossing = ac.gap < options.floor;
    ac.branch_pairs.emplace_back(i, j);
    refined[n] = std::move(ac);
  });
  for (auto& ac : refined)
    if (!ac.true_crossing || options.include_true_crossings) found.push_back(std::move(ac));

  // Merge copies of one physical crossing (degenerate partner branches).
  std::stable_sort(found.begin(), found.end(),
                   [](const auto& a, const auto& b) { return a.tau_center < b.tau_center; });
  std::vector<Anticrossing> merged;
  for (auto& ac : found) {
    bool joined = false;
    for (auto& m : merged) {
      if (m.true_crossing == ac.true_crossing && std::abs(m.tau_center - ac.tau_center) <= step &&
          std::abs(m.gap - ac.gap) <= 1e-3 * std::max(m.gap, ac.gap) + 1e-9) {
        m.branch_pairs.insert(m.branch_pairs.end(), ac.branch_pairs.begin(), ac.branch_pairs.end());
        joined = true;
        break;
      }
    }
    if (!joined) merged.push_back(std::move(ac));
  }
  return merged;
}

SplitResonances locate_split_resonances(const SpinSystem& system, const ProtocolSpec& spec,
                                        int nucleus, int j, int grid_points) {
  if (spec.family == Family::pulsepol || spec.delta_theta == 0.0)
    throw DomainError("split resonances exist only for PolCPMG with delta_theta != 0");
  const SpinSystem one = subsystem(system, {nucleus});
  const double tr = resonance_tau(spec, one, 0, j);
  const double rel = std::abs(spec.delta_theta) / kPi;
  const auto grid = linear_grid(tr * (1.0 - 2.0 * rel), tr * (1.0 + 2.0 * rel), grid_points);
  const auto spectrum = scan_spectrum(one, spec, grid);
  AnticrossingOptions opt;
  opt.threshold = 0.5;
  const auto acs = locate_anticrossings(spectrum, opt);
  SplitResonances out;
  for (const auto& ac : acs) {
    const double expect = ac.tau_center < tr ? tr * (1.0 - rel) : tr * (1.0 + rel);
    if (std::abs(ac.tau_center - expect) > 0.15 * tr) continue;
    if (ac.tau_center < tr && ac.gap > out.gap_minus) {
      out.tau_minus = ac.tau_center;
      out.gap_minus = ac.gap;
    }
    if (ac.tau_center > tr && ac.gap > out.gap_plus) {
      out.tau_plus = ac.tau_center;
      out.gap_plus = ac.gap;
    }
  }
  if (out.gap_minus == 0.0 || out.gap_plus == 0.0)
    throw InvariantError("PolCPMG split resonances not found near harmonic " + std::to_string(j));
  return out;
}

}  // namespace adpulse
