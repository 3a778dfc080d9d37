#pragma once

// Fredholm modules as data, defect measurements standing in for the
// modulo-compact relations, the 3x3 block decomposition, and the
// agreement-on-the-ideal check.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fredlab/algebra.hpp"
#include "fredlab/linalg.hpp"

namespace fredlab {

// Nonincreasing singular-value profile of a defect operator.  With no
// compact operators available at finite dimension, decay of this profile
// (in tail index at fixed model, and in N across a refinement family at
// fixed tail index) is the falsifiable stand-in for compactness.
struct CompactnessProfile {
  Eigen::VectorXd sv;  // sigma_1 >= sigma_2 >= ... >= 0

  static CompactnessProfile of(const linalg::Matrix& defect);
  double norm() const { return sv.size() ? sv[0] : 0.0; }
  double sigma(int k) const;  // 1-indexed; 0 beyond the profile
  // 1-indexed tail statistic sigma_ceil(frac * len)
  double tail(double frac = 0.05) const;
};

struct FredholmModule {
  algebra::AlgebraRep rep;
  linalg::Matrix F;
  bool graded = false;

  int dim() const { return rep.dim(); }
  const Eigen::VectorXd& grading() const;  // requires graded
  void validate() const;
};

struct DefectReport {
  double selfadjoint_defect = 0.0;                           // ||F - F*||
  CompactnessProfile square_profile;                         // of F^2 - 1
  std::vector<std::pair<std::string, double>> locality_defects;  // ||[F, rho(phi)]||
  // tail statistic of each commutator profile, same order; this is the
  // monitored decay quantity (the raw norm converges to a continuum value)
  std::vector<std::pair<std::string, double>> locality_tails;
  std::optional<double> odd_defect;                          // ||gamma F + F gamma||

  double max_defect() const;
};

using TestElements = std::vector<std::pair<std::string, algebra::AlgebraElement>>;

FredholmModule direct_sum(const FredholmModule& x, const FredholmModule& xt);

DefectReport defect_report(const FredholmModule& x, const TestElements& tests);

bool is_degenerate(const FredholmModule& x, const TestElements& tests, double tol);

struct BlockDecomposition {
  std::vector<int> idx1, idx0, idx2;  // slot indices of H1, H0, H2
  linalg::Matrix a, b, c, d, e;       // a=P1FP1 b=P1FP0 c=P0FP0 d=P0FP2 e=P2FP2
  CompactnessProfile corner_profile;  // of P1 F P2
  Eigen::VectorXd g1, g0, g2;         // gradings per summand (graded case)
  bool graded = false;

  int n1() const { return static_cast<int>(idx1.size()); }
  int n0() const { return static_cast<int>(idx0.size()); }
  int n2() const { return static_cast<int>(idx2.size()); }
};

// H0 = J.H, H1 = J1.H minus H0, H2 = J2.H minus H0 (J = J1 intersect J2);
// requires the cover J1 + J2 = A and a nondegenerate representation, so the
// three index sets partition the basis.
BlockDecomposition block_decompose(const FredholmModule& x, const algebra::Ideal& J1,
                                   const algebra::Ideal& J2);

// Profile of T P F P T* - P~ F~ P~ on the middle subspace; T defaults to the
// canonical slot identification (requires equal middle layouts).  A custom T
// must intertwine the representations on J.H and preserve grading.
CompactnessProfile agreement_defect(const FredholmModule& x, const FredholmModule& xt,
                                    const algebra::Ideal& J,
                                    const std::optional<linalg::Matrix>& T = std::nullopt);

}  // namespace fredlab
