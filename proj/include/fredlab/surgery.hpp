#pragma once

// The cut-and-paste ("diamond") construction, the interpolating operator
// family on H + H~, the pasting unitary, and the exact endpoint identity.

#include <vector>

#include "fredlab/fredholm.hpp"

namespace fredlab::surgery {

enum class CChoice { FromX, FromXtilde, Average };
CChoice c_choice_from_string(const std::string& name);
const char* c_choice_name(CChoice c);

struct SurgeryPair {
  FredholmModule x, xt;
  algebra::Ideal J1, J2;
  BlockDecomposition bx, bt;

  // Validates: common algebra, cover, nondegeneracy, matching gradedness,
  // and that the middle subspaces are canonically identified (equal slot
  // layouts and gradings).  The identification map is the identity in the
  // chosen bases throughout.
  static SurgeryPair build(FredholmModule x, FredholmModule xt, algebra::Ideal J1,
                           algebra::Ideal J2);
  SurgeryPair swapped() const;  // for the mirror construction x~ <> x
};

// (rho <> rho~, H1 + H0 + H~2, F <> F~): 3x3 assembly from the block
// decompositions, corners zeroed, middle block per c_choice.
FredholmModule diamond(const SurgeryPair& p, CChoice c_choice = CChoice::FromX);

struct HomotopySample {
  double t = 0.0;
  linalg::Matrix Ft;       // on H1+H0+H2+H~1+H0+H~2 (both H0 copies kept)
  Eigen::VectorXd grading; // per-slot signs (graded pairs)
  bool graded = false;
  std::vector<int> dims;   // the six summand dimensions
};

// The 6x6 interpolating operator; t in [0, pi/2].  Exactly Hermitian for
// Hermitian inputs, exactly odd for graded ones; t=0 gives the corner-free
// direct sum F + F~.
HomotopySample homotopy_operator(const SurgeryPair& p, double t);

// Signed permutation from the domain layout (H1,H0,H2,H~1,H~0,H~2) to
// (H <> H~) + (H~ <> H): interchanges the third and sixth summands and
// multiplies the new third component by -1.  U U* = U* U = 1 exactly.
linalg::Matrix pasting_unitary(const SurgeryPair& p);

// || F_{pi/2} - U* ((F<>F~) + (F~<>F)) U ||; an exact multilinear identity
// in the blocks, so the contract is <= 1e-12 for arbitrary inputs.
double endpoint_check(const SurgeryPair& p);

}  // namespace fredlab::surgery
