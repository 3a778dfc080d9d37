#include "fredlab/fredholm.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>

#include "fredlab/errors.hpp"

namespace fredlab {

namespace {
constexpr double kExactTol = 1e-10;  // exact-structure assertions (projections, intertwiners)
}

CompactnessProfile CompactnessProfile::of(const linalg::Matrix& defect) {
  // For (anti-)Hermitian defects — squares, commutators, agreement — the
  // profile is |spectrum|, which an eigenvalues-only solve delivers much
  // faster than a dense SVD at identical accuracy.
  if (defect.rows() == defect.cols() && defect.rows() > 0) {
    const double scale = defect.cwiseAbs().maxCoeff();
    const double herm = (defect - defect.adjoint()).cwiseAbs().maxCoeff();
    const double anti = (defect + defect.adjoint()).cwiseAbs().maxCoeff();
    linalg::Matrix h;
    if (herm <= 1e-13 * scale || scale == 0.0)
      h = 0.5 * (defect + defect.adjoint());
    else if (anti <= 1e-13 * scale)
      h = std::complex<double>(0, -0.5) * (defect - defect.adjoint());
    else
      return {linalg::singular_values(defect)};
    Eigen::SelfAdjointEigenSolver<linalg::Matrix> es(h, Eigen::EigenvaluesOnly);
    Eigen::VectorXd sv = es.eigenvalues().cwiseAbs();
    std::sort(sv.data(), sv.data() + sv.size(), std::greater<double>());
    return {sv};
  }
  return {linalg::singular_values(defect)};
}

double CompactnessProfile::sigma(int k) const {
  if (k < 1 || k > sv.size()) return 0.0;
  return sv[k - 1];
}

double CompactnessProfile::tail(double frac) const {
  if (sv.size() == 0) return 0.0;
  int k = std::max(1, static_cast<int>(std::ceil(frac * static_cast<double>(sv.size()))));
  return sigma(k);
}

const Eigen::VectorXd& FredholmModule::grading() const {
  if (!graded || !rep.grading) throw ConfigError("module is not graded");
  return *rep.grading;
}

void FredholmModule::validate() const {
  rep.validate();
  if (F.rows() != F.cols() || F.rows() != rep.dim())
    throw ConfigError("F must be square of size dim H");
  if (graded && !rep.grading) throw ConfigError("graded module needs a grading on its rep");
}

FredholmModule direct_sum(const FredholmModule& x, const FredholmModule& xt) {
  if (!(x.rep.alg == xt.rep.alg)) throw ConfigError("direct sum needs a common algebra");
  if (x.graded != xt.graded) throw ConfigError("direct sum needs matching gradedness");
  FredholmModule out;
  out.rep.alg = x.rep.alg;
  out.rep.slots = x.rep.slots;
  out.rep.slots.insert(out.rep.slots.end(), xt.rep.slots.begin(), xt.rep.slots.end());
  // keep the two summands on disjoint multiplicity copies
  auto mx = x.rep.multiplicities();
  for (size_t i = x.rep.slots.size(); i < out.rep.slots.size(); ++i)
    out.rep.slots[i].copy += mx[out.rep.slots[i].block];
  int n = x.dim(), m = xt.dim();
  out.F = linalg::Matrix::Zero(n + m, n + m);
  out.F.topLeftCorner(n, n) = x.F;
  out.F.bottomRightCorner(m, m) = xt.F;
  out.graded = x.graded;
  if (x.graded) {
    Eigen::VectorXd g(n + m);
    g << x.grading(), xt.grading();
    out.rep.grading = g;
  }
  return out;
}

DefectReport defect_report(const FredholmModule& x, const TestElements& tests) {
  x.validate();
  DefectReport r;
  r.selfadjoint_defect = linalg::operator_norm(x.F - x.F.adjoint());
  int n = x.dim();
  r.square_profile = CompactnessProfile::of(x.F * x.F - linalg::Matrix::Identity(n, n));
  for (const auto& [id, phi] : tests) {
    linalg::Matrix R = rep_apply(x.rep, phi);
    CompactnessProfile comm = CompactnessProfile::of(x.F * R - R * x.F);
    r.locality_defects.emplace_back(id, comm.norm());
    r.locality_tails.emplace_back(id, comm.tail());
  }
  if (x.graded) {
    Eigen::VectorXd g = x.grading();
    linalg::Matrix GFG = g.asDiagonal() * x.F * g.asDiagonal();
    r.odd_defect = linalg::operator_norm(GFG + x.F);
  }
  return r;
}

double DefectReport::max_defect() const {
  double m = std::max(selfadjoint_defect, square_profile.norm());
  for (const auto& [id, v] : locality_defects) m = std::max(m, v);
  if (odd_defect) m = std::max(m, *odd_defect);
  return m;
}

bool is_degenerate(const FredholmModule& x, const TestElements& tests, double tol) {
  if (tol < 0) throw ConfigError("tolerance must be nonnegative");
  return defect_report(x, tests).max_defect() <= tol;
}

BlockDecomposition block_decompose(const FredholmModule& x, const algebra::Ideal& J1,
                                   const algebra::Ideal& J2) {
  x.validate();
  if (!ideal_cover_check(J1, J2, x.rep.alg))
    throw ConfigError("ideals do not cover the algebra");
  if (!x.rep.nondegenerate()) throw ConfigError("representation is degenerate");
  algebra::Ideal J = ideal_intersect(J1, J2);

  BlockDecomposition out;
  out.graded = x.graded;
  for (int i = 0; i < x.dim(); ++i) {
    int blk = x.rep.slots[i].block;
    if (J.contains(blk))
      out.idx0.push_back(i);
    else if (J1.contains(blk))
      out.idx1.push_back(i);
    else
      out.idx2.push_back(i);
  }
  out.a = linalg::submatrix(x.F, out.idx1, out.idx1);
  out.b = linalg::submatrix(x.F, out.idx1, out.idx0);
  out.c = linalg::submatrix(x.F, out.idx0, out.idx0);
  out.d = linalg::submatrix(x.F, out.idx0, out.idx2);
  out.e = linalg::submatrix(x.F, out.idx2, out.idx2);
  out.corner_profile = CompactnessProfile::of(linalg::submatrix(x.F, out.idx1, out.idx2));
  if (x.graded) {
    const Eigen::VectorXd& g = x.grading();
    auto pick = [&](const std::vector<int>& idx) {
      Eigen::VectorXd v(idx.size());
      for (size_t k = 0; k < idx.size(); ++k) v[k] = g[idx[k]];
      return v;
    };
    out.g1 = pick(out.idx1);
    out.g0 = pick(out.idx0);
    out.g2 = pick(out.idx2);
  }
  return out;
}

CompactnessProfile agreement_defect(const FredholmModule& x, const FredholmModule& xt,
                                    const algebra::Ideal& J,
                                    const std::optional<linalg::Matrix>& T) {
  x.validate();
  xt.validate();
  std::vector<int> mid = ideal_slot_indices(J, x.rep);
  std::vector<int> midt = ideal_slot_indices(J, xt.rep);
  linalg::Matrix PFP = linalg::submatrix(x.F, mid, mid);
  linalg::Matrix PFPt = linalg::submatrix(xt.F, midt, midt);

  if (!T) {
    // canonical identification: middle slot lists must agree entrywise
    if (mid.size() != midt.size())
      throw IntertwinerError("middle subspaces have different dimensions");
    for (size_t k = 0; k < mid.size(); ++k)
      if (!(x.rep.slots[mid[k]] == xt.rep.slots[midt[k]]))
        throw IntertwinerError("middle slot layouts differ; supply an explicit intertwiner");
    if (x.graded && xt.graded)
      for (size_t k = 0; k < mid.size(); ++k)
        if (x.grading()[mid[k]] != xt.grading()[midt[k]])
          throw IntertwinerError("canonical identification does not preserve the grading");
    return CompactnessProfile::of(PFP - PFPt);
  }

  if (T->rows() != static_cast<Eigen::Index>(midt.size()) ||
      T->cols() != static_cast<Eigen::Index>(mid.size()))
    throw IntertwinerError("intertwiner has the wrong shape");
  linalg::Matrix tt = T->adjoint() * *T;
  linalg::Matrix ttr = *T * T->adjoint();
  tt.diagonal().array() -= 1.0;
  ttr.diagonal().array() -= 1.0;
  if (linalg::operator_norm(tt) > kExactTol || linalg::operator_norm(ttr) > kExactTol)
    throw IntertwinerError("identification map is not unitary");
  // T must carry the restricted action of each middle block to its twin
  for (int blk : J.members) {
    algebra::AlgebraElement unit = algebra::AlgebraElement::zero(x.rep.alg);
    unit.blocks[blk] = linalg::Matrix::Identity(x.rep.alg.block_dims[blk],
                                                x.rep.alg.block_dims[blk]);
    linalg::Matrix lhs = *T * linalg::submatrix(rep_apply(x.rep, unit), mid, mid);
    linalg::Matrix rhs = linalg::submatrix(rep_apply(xt.rep, unit), midt, midt) * *T;
    if (linalg::operator_norm(lhs - rhs) > kExactTol)
      throw IntertwinerError("T does not intertwine the representations on the ideal");
  }
  if (x.graded && xt.graded) {
    Eigen::VectorXd gm(mid.size()), gmt(midt.size());
    for (size_t k = 0; k < mid.size(); ++k) gm[k] = x.grading()[mid[k]];
    for (size_t k = 0; k < midt.size(); ++k) gmt[k] = xt.grading()[midt[k]];
    if (linalg::operator_norm(*T * gm.asDiagonal() - gmt.asDiagonal() * *T) > kExactTol)
      throw IntertwinerError("T does not preserve the grading");
  }
  return CompactnessProfile::of(*T * PFP * T->adjoint() - PFPt);
}

}  // namespace fredlab
