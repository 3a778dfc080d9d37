#include "fredlab/index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fredlab/errors.hpp"

namespace fredlab::index {

namespace {

std::pair<std::vector<int>, std::vector<int>> split_by_sign(const Eigen::VectorXd& g) {
  std::vector<int> plus, minus;
  for (int i = 0; i < g.size(); ++i) (g[i] > 0 ? plus : minus).push_back(i);
  return {plus, minus};
}

}  // namespace

IndexResult graded_index(const linalg::Matrix& F, const Eigen::VectorXd& grading,
                         const IndexOptions& opts, const std::string& label) {
  if (F.rows() != F.cols() || F.rows() != grading.size())
    throw ConfigError("graded_index: shape mismatch between F and grading");
  auto [plus, minus] = split_by_sign(grading);
  linalg::Matrix Fp = linalg::submatrix(F, minus, plus);
  Eigen::VectorXd s = linalg::singular_values(Fp);  // nonincreasing
  s.reverseInPlace();                               // ascending, as scanned below
  int ns = static_cast<int>(s.size());

  double med = 0.0;
  if (ns > 0) med = (ns % 2) ? s[ns / 2] : 0.5 * (s[ns / 2 - 1] + s[ns / 2]);
  double cut = opts.cutoff_rel * med;

  constexpr double inf = std::numeric_limits<double>::infinity();
  int k = 0;
  double ratio = inf;
  std::vector<int> below;
  for (int i = 0; i < ns; ++i)
    if (s[i] <= cut) below.push_back(i);
  if (!below.empty()) {
    // split at the largest relative gap among the candidates
    int best = below.front();
    ratio = -1.0;
    for (int i : below) {
      double hi = (i + 1 < ns) ? s[i + 1] : inf;
      double r = (s[i] == 0.0) ? inf : hi / s[i];
      if (r >= ratio) {
        ratio = r;
        best = i;
      }
    }
    k = best + 1;
    if (ratio < opts.ratio_min)
      throw AmbiguousKernelError("ambiguous kernel of " + label + ": gap ratio " +
                                 std::to_string(ratio) + " < " +
                                 std::to_string(opts.ratio_min));
  }

  IndexResult r;
  r.kernel_plus = k + static_cast<int>(plus.size()) - ns;
  r.kernel_minus = k + static_cast<int>(minus.size()) - ns;
  r.index = r.kernel_plus - r.kernel_minus;
  r.spectral_gap = ratio;
  r.threshold_used = cut;
  r.bulk_min = (k < ns) ? s[k] : inf;
  return r;
}

IndexResult graded_index(const FredholmModule& x, const IndexOptions& opts,
                         const std::string& label) {
  if (!x.graded) throw ConfigError("graded_index needs a graded module");
  return graded_index(x.F, x.grading(), opts, label);
}

double mckean_singer(const linalg::Matrix& D, const Eigen::VectorXd& grading, double t) {
  if (t <= 0) throw ConfigError("heat parameter must be positive");
  linalg::Matrix G = grading.asDiagonal();
  if (linalg::operator_norm(G * D + D * G) > 1e-10)
    throw NumericalError("operator is not odd with respect to the grading");
  linalg::HermitianEig eig = linalg::hermitian_eig(D);
  // Tr(gamma V e^{-t L^2} V*) = sum_i e^{-t l_i^2} <v_i, gamma v_i>
  double acc = 0.0;
  for (int i = 0; i < eig.values.size(); ++i) {
    double w = std::exp(-t * eig.values[i] * eig.values[i]);
    std::complex<double> q = 0.0;
    for (int j = 0; j < grading.size(); ++j)
      q += std::conj(eig.vectors(j, i)) * grading[j] * eig.vectors(j, i);
    acc += w * q.real();
  }
  return acc;
}

std::vector<double> uniform_grid(int points) {
  if (points < 2) throw ConfigError("homotopy grid needs at least 2 points");
  std::vector<double> grid(points);
  constexpr double half_pi = std::numbers::pi / 2.0;
  for (int i = 0; i < points; ++i)
    grid[i] = half_pi * static_cast<double>(i) / static_cast<double>(points - 1);
  return grid;
}

std::vector<IndexResult> homotopy_index_trace(const surgery::SurgeryPair& p,
                                              const std::vector<double>& grid,
                                              const IndexOptions& opts) {
  if (!p.x.graded) throw ConfigError("homotopy_index_trace needs a graded pair");
  std::vector<IndexResult> out;
  out.reserve(grid.size());
  for (double t : grid) {
    surgery::HomotopySample smp = surgery::homotopy_operator(p, t);
    out.push_back(graded_index(smp.Ft, smp.grading, opts, "F_t at t=" + std::to_string(t)));
  }
  return out;
}

RelativeIndexReport relative_index_experiment(const surgery::SurgeryPair& p,
                                              const IndexOptions& opts, int grid_points) {
  RelativeIndexReport rep;
  rep.x = graded_index(p.x, opts, "F");
  rep.xt = graded_index(p.xt, opts, "F~");
  rep.dia = graded_index(diamond(p), opts, "F<>F~");
  rep.mirror = graded_index(diamond(p.swapped()), opts, "F~<>F");
  rep.residual = (rep.dia.index - rep.x.index) - (rep.xt.index - rep.mirror.index);
  rep.grid = uniform_grid(grid_points);
  rep.trace = homotopy_index_trace(p, rep.grid, opts);
  return rep;
}

}  // namespace fredlab::index
