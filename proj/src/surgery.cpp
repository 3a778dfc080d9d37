#include "fredlab/surgery.hpp"

#include <cmath>
#include <numbers>

#include "fredlab/errors.hpp"

namespace fredlab::surgery {

namespace {
constexpr double kHalfPi = std::numbers::pi / 2.0;
}

CChoice c_choice_from_string(const std::string& name) {
  if (name == "from_x") return CChoice::FromX;
  if (name == "from_x_tilde") return CChoice::FromXtilde;
  if (name == "average") return CChoice::Average;
  throw ConfigError("unknown c_choice: " + name);
}

const char* c_choice_name(CChoice c) {
  switch (c) {
    case CChoice::FromX: return "from_x";
    case CChoice::FromXtilde: return "from_x_tilde";
    case CChoice::Average: return "average";
  }
  return "?";
}

SurgeryPair SurgeryPair::build(FredholmModule x, FredholmModule xt, algebra::Ideal J1,
                               algebra::Ideal J2) {
  x.validate();
  xt.validate();
  if (!(x.rep.alg == xt.rep.alg)) throw ConfigError("surgery pair needs a common algebra");
  if (x.graded != xt.graded) throw ConfigError("surgery pair needs matching gradedness");
  if (!ideal_cover_check(J1, J2, x.rep.alg))
    throw ConfigError("ideals do not cover the algebra");
  if (!x.rep.nondegenerate() || !xt.rep.nondegenerate())
    throw ConfigError("surgery needs nondegenerate representations");

  SurgeryPair p;
  p.bx = block_decompose(x, J1, J2);
  p.bt = block_decompose(xt, J1, J2);
  if (p.bx.n0() != p.bt.n0())
    throw IntertwinerError("middle subspaces have different dimensions");
  for (int k = 0; k < p.bx.n0(); ++k)
    if (!(x.rep.slots[p.bx.idx0[k]] == xt.rep.slots[p.bt.idx0[k]]))
      throw IntertwinerError("middle slot layouts differ; cannot identify canonically");
  if (x.graded)
    for (int k = 0; k < p.bx.n0(); ++k)
      if (p.bx.g0[k] != p.bt.g0[k])
        throw IntertwinerError("middle gradings differ under the identification");
  p.x = std::move(x);
  p.xt = std::move(xt);
  p.J1 = std::move(J1);
  p.J2 = std::move(J2);
  return p;
}

SurgeryPair SurgeryPair::swapped() const { return build(xt, x, J1, J2); }

FredholmModule diamond(const SurgeryPair& p, CChoice c_choice) {
  const BlockDecomposition &B = p.bx, &Bt = p.bt;
  int n1 = B.n1(), n0 = B.n0(), m2 = Bt.n2();
  linalg::Matrix mid;
  switch (c_choice) {
    case CChoice::FromX: mid = B.c; break;
    case CChoice::FromXtilde: mid = Bt.c; break;
    case CChoice::Average: mid = 0.5 * (B.c + Bt.c); break;
  }
  linalg::Matrix F = linalg::Matrix::Zero(n1 + n0 + m2, n1 + n0 + m2);
  F.block(0, 0, n1, n1) = B.a;
  F.block(0, n1, n1, n0) = B.b;
  F.block(n1, 0, n0, n1) = B.b.adjoint();
  F.block(n1, n1, n0, n0) = mid;
  F.block(n1, n1 + n0, n0, m2) = Bt.d;
  F.block(n1 + n0, n1, m2, n0) = Bt.d.adjoint();
  F.block(n1 + n0, n1 + n0, m2, m2) = Bt.e;

  FredholmModule out;
  out.rep.alg = p.x.rep.alg;
  for (int i : B.idx1) out.rep.slots.push_back(p.x.rep.slots[i]);
  for (int i : B.idx0) out.rep.slots.push_back(p.x.rep.slots[i]);
  for (int i : Bt.idx2) out.rep.slots.push_back(p.xt.rep.slots[i]);
  out.F = std::move(F);
  out.graded = p.x.graded;
  if (out.graded) {
    Eigen::VectorXd g(n1 + n0 + m2);
    g << B.g1, B.g0, Bt.g2;
    out.rep.grading = g;
  }
  out.validate();
  return out;
}

HomotopySample homotopy_operator(const SurgeryPair& p, double t) {
  if (t < 0.0 || t > kHalfPi + 1e-12) throw ConfigError("homotopy parameter outside [0, pi/2]");
  const BlockDecomposition &B = p.bx, &Bt = p.bt;
  double co = std::cos(t), si = std::sin(t);

  HomotopySample out;
  out.t = t;
  out.graded = p.x.graded;
  out.dims = {B.n1(), B.n0(), B.n2(), Bt.n1(), Bt.n0(), Bt.n2()};
  std::vector<int> off(7, 0);
  for (int i = 0; i < 6; ++i) off[i + 1] = off[i] + out.dims[i];
  linalg::Matrix M = linalg::Matrix::Zero(off[6], off[6]);
  auto put = [&](int i, int j, const linalg::Matrix& blk) {
    M.block(off[i], off[j], out.dims[i], out.dims[j]) = blk;
  };
  put(0, 0, B.a);
  put(0, 1, B.b);
  put(1, 0, B.b.adjoint());
  put(1, 1, B.c);
  put(1, 2, co * B.d);
  put(1, 5, -si * Bt.d);
  put(2, 1, co * B.d.adjoint());
  put(2, 2, B.e);
  put(2, 4, si * B.d.adjoint());
  put(3, 3, Bt.a);
  put(3, 4, Bt.b);
  put(4, 2, si * B.d);
  put(4, 3, Bt.b.adjoint());
  put(4, 4, Bt.c);
  put(4, 5, co * Bt.d);
  put(5, 1, -si * Bt.d.adjoint());
  put(5, 4, co * Bt.d.adjoint());
  put(5, 5, Bt.e);
  out.Ft = std::move(M);
  if (out.graded) {
    Eigen::VectorXd g(off[6]);
    g << B.g1, B.g0, B.g2, Bt.g1, Bt.g0, Bt.g2;
    out.grading = std::move(g);
  }
  return out;
}

linalg::Matrix pasting_unitary(const SurgeryPair& p) {
  const BlockDecomposition &B = p.bx, &Bt = p.bt;
  std::vector<int> dims = {B.n1(), B.n0(), B.n2(), Bt.n1(), Bt.n0(), Bt.n2()};
  static const int sigma[6] = {0, 1, 5, 3, 4, 2};
  static const int sign[6] = {1, 1, -1, 1, 1, 1};
  std::vector<int> off(7, 0), off2(7, 0);
  for (int i = 0; i < 6; ++i) off[i + 1] = off[i] + dims[i];
  for (int i = 0; i < 6; ++i) off2[i + 1] = off2[i] + dims[sigma[i]];
  linalg::Matrix U = linalg::Matrix::Zero(off[6], off[6]);
  for (int i = 0; i < 6; ++i)
    U.block(off2[i], off[sigma[i]], dims[sigma[i]], dims[sigma[i]]) =
        static_cast<double>(sign[i]) * linalg::Matrix::Identity(dims[sigma[i]], dims[sigma[i]]);
  return U;
}

double endpoint_check(const SurgeryPair& p) {
  linalg::Matrix M = homotopy_operator(p, kHalfPi).Ft;
  linalg::Matrix U = pasting_unitary(p);
  linalg::Matrix Fd = diamond(p, CChoice::FromX).F;
  linalg::Matrix Fr = diamond(p.swapped(), CChoice::FromX).F;
  linalg::Matrix tgt = linalg::Matrix::Zero(M.rows(), M.cols());
  tgt.topLeftCorner(Fd.rows(), Fd.cols()) = Fd;
  tgt.bottomRightCorner(Fr.rows(), Fr.cols()) = Fr;
  return linalg::operator_norm(U * M * U.adjoint() - tgt);
}

}  // namespace fredlab::surgery
