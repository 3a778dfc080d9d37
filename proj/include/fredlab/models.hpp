#pragma once

// Model generators: 1-D Wilson-Dirac domain-wall operators over a
// discretized interval (pairs agreeing on a middle region), and small exact
// toy pairs used to exercise the surgery plumbing with zero defects.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fredlab/index.hpp"
#include "fredlab/surgery.hpp"

namespace fredlab::models {

struct MassProfile {
  std::vector<double> breakpoints;  // strictly increasing, inside (-L, L)
  std::vector<double> values;       // one more than breakpoints

  double at(double x, double L) const;  // piecewise-constant, segments (prev, b]
  void validate(double L) const;
};

// three equal segments with breakpoints at +-3L/4; pattern like "-++"
MassProfile profile_from_pattern(const std::string& pattern, double L);

struct ModelThresholds {
  double kernel_cutoff_rel = 1e-3;
  double gap_ratio_min = 10.0;
  double bulk_floor = 0.5;  // health floor on the bulk singular spectrum
};

struct DomainWallConfig {
  double half_length = 10.0;
  int sites = 400;  // even, 16..2000 (dense eigensolves)
  MassProfile mass, mass_tilde;
  double wilson_r = 1.0;
  double middle_lo = -5.0, middle_hi = 5.0;  // region where mass = mass_tilde
  ModelThresholds thresholds;

  void validate() const;
  index::IndexOptions index_options() const {
    return {thresholds.kernel_cutoff_rel, thresholds.gap_ratio_min};
  }
};

struct DiracOperator {
  linalg::Matrix D;
  Eigen::VectorXd grading;
  std::vector<std::pair<int, int>> slot_sites;  // (site, channel): 0 = u(+), 1 = v(-)
  Eigen::VectorXd xs;  // site centers
  Eigen::VectorXd m;   // mass per site
  double h = 0.0;
  int N = 0;
  double L = 0.0;

  int dim() const { return static_cast<int>(slot_sites.size()); }
};

// D = sigma_1 (x) i*(central difference) + sigma_2 (x) (mass + Wilson term),
// Dirichlet ends, site-major channels (u_n, v_n), grading +1 on u, -1 on v.
// A boundary channel is trimmed when the local mass is negative, so that the
// clamped ends stay gapped and contribute no edge zero-modes.
DiracOperator build_wilson_dirac(const DomainWallConfig& cfg, bool tilde);

// F = D (1 + D^2)^(-1/2) via eigendecomposition; rep = site functions with
// one multiplicity copy per surviving channel; exactly Hermitian, exactly odd
FredholmModule module_from_dirac(const DiracOperator& d);

// raised-cosine site function, half-width in physical units
algebra::AlgebraElement bump_element(const DiracOperator& d, double center, double halfwidth);

// identity + five spread bumps + three seeded random site functions
TestElements standard_test_elements(const DiracOperator& d, uint64_t seed);

// independent kernel-count oracle: supertrace of the spectral projector of D
// onto |lambda| < cut
int oracle_kernel_index(const DiracOperator& d, double cut = 1e-2);

// wall-counting heuristic (sgn m(L) - sgn m(-L)) / 2
int wall_heuristic(const DiracOperator& d);

struct ModelBundle {
  surgery::SurgeryPair pair;
  std::optional<DiracOperator> dirac_x, dirac_xt;
  int oracle_x = 0, oracle_xt = 0;
  CompactnessProfile agreement;  // of c - c~ under the identification
  TestElements tests;
};

ModelBundle build_agreeing_pair(const DomainWallConfig& cfg, uint64_t seed);

// Exact pair on a 3-block algebra: F is a signed perfect matching of
// opposite-grading slots, so F = F*, F^2 = 1, gamma F = -F gamma hold exactly
// and the two modules share the middle block verbatim.  Test family is the
// identity element (the matchings cross blocks, so site locality is not
// claimed for these toys).
ModelBundle toy_exact_pair(int n1, int n0, int n2, int nt1, int nt2, uint64_t seed);

}  // namespace fredlab::models
