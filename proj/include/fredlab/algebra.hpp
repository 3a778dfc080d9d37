#pragma once

// Finite-dimensional model of the C*-algebra, its ideals, and nondegenerate
// representations.  The algebra is a finite direct sum of matrix blocks;
// ideals are exactly subsets of block indices, so every projection and
// decomposition below is exact linear algebra.

#include <optional>
#include <utility>
#include <vector>

#include "fredlab/linalg.hpp"

namespace fredlab::algebra {

struct BlockAlgebra {
  std::vector<int> block_dims;  // n_i >= 1; commutative models use all 1

  int size() const { return static_cast<int>(block_dims.size()); }
  void validate() const;
  friend bool operator==(const BlockAlgebra&, const BlockAlgebra&) = default;
};

struct AlgebraElement {
  std::vector<linalg::Matrix> blocks;  // one n_i x n_i matrix per algebra block

  static AlgebraElement zero(const BlockAlgebra& alg);
  static AlgebraElement identity(const BlockAlgebra& alg);
  // commutative case: one scalar per block
  static AlgebraElement diagonal(const BlockAlgebra& alg, const Eigen::VectorXd& values);
  void validate(const BlockAlgebra& alg) const;
};

// Subset of block indices (0-based, sorted, unique).
struct Ideal {
  std::vector<int> members;

  static Ideal of(std::vector<int> members, const BlockAlgebra& alg);
  bool contains(int block) const;
};

// true iff J1 + J2 = A, i.e. the index sets cover every block
bool ideal_cover_check(const Ideal& J1, const Ideal& J2, const BlockAlgebra& alg);

Ideal ideal_intersect(const Ideal& J1, const Ideal& J2);

// phi = phi1 + phi2 exactly, phi1 supported in J1, phi2 in J2; the overlap is
// split as lambda / (1 - lambda)
std::pair<AlgebraElement, AlgebraElement> ideal_decompose(const AlgebraElement& phi,
                                                          const Ideal& J1, const Ideal& J2,
                                                          const BlockAlgebra& alg,
                                                          double lambda = 0.5);

// One Hilbert-space basis vector: which block acts on it, which multiplicity
// copy it belongs to, and its row within the block fiber.
struct Slot {
  int block = 0;
  int copy = 0;
  int row = 0;
  friend bool operator==(const Slot&, const Slot&) = default;
};

struct AlgebraRep {
  BlockAlgebra alg;
  std::vector<Slot> slots;                  // basis order of H
  std::optional<Eigen::VectorXd> grading;   // +-1 per slot, if graded

  int dim() const { return static_cast<int>(slots.size()); }
  bool graded() const { return grading.has_value(); }
  std::vector<int> multiplicities() const;  // copies per block (0 if absent)
  bool nondegenerate() const;               // AH = H, i.e. every block acts
  // shapes, +-1 grading values, grading constant on each (block, copy) fiber
  void validate() const;
};

// block-diagonal action phi_i (x) 1_{m_i}; a *-homomorphism by construction
linalg::Matrix rep_apply(const AlgebraRep& rep, const AlgebraElement& phi);

// slot indices of J.H, in basis order
std::vector<int> ideal_slot_indices(const Ideal& J, const AlgebraRep& rep);

// orthogonal projection onto J.H; commutes exactly with the action and gamma
linalg::Matrix ideal_projection(const Ideal& J, const AlgebraRep& rep);

}  // namespace fredlab::algebra
