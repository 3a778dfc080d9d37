#include "fredlab/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fredlab/errors.hpp"

namespace fredlab::algebra {

void BlockAlgebra::validate() const {
  if (block_dims.empty()) throw ConfigError("algebra needs at least one block");
  for (int n : block_dims)
    if (n < 1) throw ConfigError("algebra block dimension must be >= 1");
}

AlgebraElement AlgebraElement::zero(const BlockAlgebra& alg) {
  AlgebraElement e;
  for (int n : alg.block_dims) e.blocks.push_back(linalg::Matrix::Zero(n, n));
  return e;
}

AlgebraElement AlgebraElement::identity(const BlockAlgebra& alg) {
  AlgebraElement e;
  for (int n : alg.block_dims) e.blocks.push_back(linalg::Matrix::Identity(n, n));
  return e;
}

AlgebraElement AlgebraElement::diagonal(const BlockAlgebra& alg, const Eigen::VectorXd& values) {
  if (values.size() != alg.size())
    throw ConfigError("diagonal element needs one value per block");
  AlgebraElement e;
  for (int i = 0; i < alg.size(); ++i)
    e.blocks.push_back(values[i] * linalg::Matrix::Identity(alg.block_dims[i], alg.block_dims[i]));
  return e;
}

void AlgebraElement::validate(const BlockAlgebra& alg) const {
  if (static_cast<int>(blocks.size()) != alg.size())
    throw ConfigError("element block count does not match algebra");
  for (int i = 0; i < alg.size(); ++i)
    if (blocks[i].rows() != alg.block_dims[i] || blocks[i].cols() != alg.block_dims[i])
      throw ConfigError("element block " + std::to_string(i) + " has wrong shape");
}

Ideal Ideal::of(std::vector<int> members, const BlockAlgebra& alg) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  for (int b : members)
    if (b < 0 || b >= alg.size())
      throw ConfigError("ideal references block " + std::to_string(b) + " outside the algebra");
  return Ideal{std::move(members)};
}

bool Ideal::contains(int block) const {
  return std::binary_search(members.begin(), members.end(), block);
}

bool ideal_cover_check(const Ideal& J1, const Ideal& J2, const BlockAlgebra& alg) {
  for (int b = 0; b < alg.size(); ++b)
    if (!J1.contains(b) && !J2.contains(b)) return false;
  return true;
}

Ideal ideal_intersect(const Ideal& J1, const Ideal& J2) {
  Ideal out;
  std::set_intersection(J1.members.begin(), J1.members.end(), J2.members.begin(),
                        J2.members.end(), std::back_inserter(out.members));
  return out;
}

std::pair<AlgebraElement, AlgebraElement> ideal_decompose(const AlgebraElement& phi,
                                                          const Ideal& J1, const Ideal& J2,
                                                          const BlockAlgebra& alg,
                                                          double lambda) {
  phi.validate(alg);
  if (lambda < 0.0 || lambda > 1.0) throw ConfigError("overlap split must lie in [0,1]");
  if (!ideal_cover_check(J1, J2, alg))
    throw ConfigError("ideals do not cover the algebra; no decomposition exists");
  AlgebraElement phi1 = AlgebraElement::zero(alg);
  AlgebraElement phi2 = AlgebraElement::zero(alg);
  for (int b = 0; b < alg.size(); ++b) {
    bool in1 = J1.contains(b), in2 = J2.contains(b);
    if (in1 && in2) {
      phi1.blocks[b] = lambda * phi.blocks[b];
      phi2.blocks[b] = (1.0 - lambda) * phi.blocks[b];
    } else if (in1) {
      phi1.blocks[b] = phi.blocks[b];
    } else {
      phi2.blocks[b] = phi.blocks[b];
    }
  }
  return {phi1, phi2};
}

std::vector<int> AlgebraRep::multiplicities() const {
  std::vector<int> m(alg.size(), 0);
  for (const Slot& s : slots) m[s.block] = std::max(m[s.block], s.copy + 1);
  return m;
}

bool AlgebraRep::nondegenerate() const {
  auto m = multiplicities();
  return std::all_of(m.begin(), m.end(), [](int v) { return v >= 1; });
}

void AlgebraRep::validate() const {
  alg.validate();
  for (const Slot& s : slots) {
    if (s.block < 0 || s.block >= alg.size())
      throw ConfigError("slot references block outside the algebra");
    if (s.copy < 0 || s.row < 0 || s.row >= alg.block_dims[s.block])
      throw ConfigError("slot row/copy out of range for its block");
  }
  if (grading) {
    if (grading->size() != dim()) throw ConfigError("grading length does not match dim H");
    for (int i = 0; i < dim(); ++i)
      if (std::abs(std::abs((*grading)[i]) - 1.0) > 0.0)
        throw ConfigError("grading entries must be exactly +-1");
    // gamma must commute with the action: sign constant along each
    // (block, copy) fiber that the block matrices mix
    for (int i = 0; i < dim(); ++i)
      for (int j = i + 1; j < dim(); ++j)
        if (slots[i].block == slots[j].block && slots[i].copy == slots[j].copy &&
            (*grading)[i] != (*grading)[j])
          throw ConfigError("grading is not constant on a representation fiber");
  }
}

linalg::Matrix rep_apply(const AlgebraRep& rep, const AlgebraElement& phi) {
  phi.validate(rep.alg);
  int n = rep.dim();
  linalg::Matrix out = linalg::Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Slot &si = rep.slots[i], &sj = rep.slots[j];
      if (si.block == sj.block && si.copy == sj.copy)
        out(i, j) = phi.blocks[si.block](si.row, sj.row);
    }
  return out;
}

std::vector<int> ideal_slot_indices(const Ideal& J, const AlgebraRep& rep) {
  std::vector<int> idx;
  for (int i = 0; i < rep.dim(); ++i)
    if (J.contains(rep.slots[i].block)) idx.push_back(i);
  return idx;
}

linalg::Matrix ideal_projection(const Ideal& J, const AlgebraRep& rep) {
  int n = rep.dim();
  linalg::Matrix P = linalg::Matrix::Zero(n, n);
  for (int i : ideal_slot_indices(J, rep)) P(i, i) = 1.0;
  return P;
}

}  // namespace fredlab::algebra
