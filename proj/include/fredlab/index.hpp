#pragma once

// Graded index computation with explicit spectral-gap bookkeeping, the
// McKean-Singer cross-check, and the relative-index experiment.

#include <string>
#include <vector>

#include "fredlab/surgery.hpp"

namespace fredlab::index {

struct IndexOptions {
  double cutoff_rel = 1e-3;  // kernel candidates: sigma <= cutoff_rel * median
  double ratio_min = 10.0;   // required bulk/kernel gap ratio
};

struct IndexResult {
  int index = 0;
  int kernel_plus = 0;
  int kernel_minus = 0;
  // bulk sigma_min / kernel sigma_max at the chosen split; infinity (no
  // kernel) is reported as -1 in serialized form
  double spectral_gap = 0.0;
  double threshold_used = 0.0;
  double bulk_min = 0.0;  // smallest singular value above the split
};

// Kernel counting on the H+ -> H- block of F: singular values are split at
// the largest relative gap below the cutoff; a split ratio under ratio_min
// raises AmbiguousKernelError naming the operator.
IndexResult graded_index(const linalg::Matrix& F, const Eigen::VectorXd& grading,
                         const IndexOptions& opts = {}, const std::string& label = "F");
IndexResult graded_index(const FredholmModule& x, const IndexOptions& opts = {},
                         const std::string& label = "F");

// supertrace Tr(gamma exp(-t D^2)); t-independent and integer in finite
// dimensions, equal to the graded index of the associated module
double mckean_singer(const linalg::Matrix& D, const Eigen::VectorXd& grading, double t);

std::vector<IndexResult> homotopy_index_trace(const surgery::SurgeryPair& p,
                                              const std::vector<double>& grid,
                                              const IndexOptions& opts = {});

struct RelativeIndexReport {
  IndexResult x, xt, dia, mirror;
  int residual = 0;  // (ind(x<>x~) - ind(x)) - (ind(x~) - ind(x~<>x))
  std::vector<double> grid;
  std::vector<IndexResult> trace;
};

RelativeIndexReport relative_index_experiment(const surgery::SurgeryPair& p,
                                              const IndexOptions& opts = {}, int grid_points = 11);

std::vector<double> uniform_grid(int points);  // 0 .. pi/2 inclusive

}  // namespace fredlab::index
