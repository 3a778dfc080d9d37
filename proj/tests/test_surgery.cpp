#include <doctest.h>

#include <complex>
#include <numbers>
#include <random>

#include "fredlab/errors.hpp"
#include "fredlab/models.hpp"
#include "fredlab/surgery.hpp"

using namespace fredlab;
using namespace fredlab::surgery;
using linalg::Matrix;

namespace {

// ungraded pair over the three-site algebra with random Hermitian operators;
// the endpoint identity is multilinear in the blocks, so it must hold for
// these just as for honest Fredholm modules
SurgeryPair random_pair(int n1, int n0, int n2, int nt1, int nt2, uint64_t seed) {
  algebra::BlockAlgebra alg{{1, 1, 1}};
  auto make = [&](int a, int m, int b, uint64_t s) {
    algebra::AlgebraRep rep;
    rep.alg = alg;
    for (int c = 0; c < a; ++c) rep.slots.push_back({0, c, 0});
    for (int c = 0; c < m; ++c) rep.slots.push_back({1, c, 0});
    for (int c = 0; c < b; ++c) rep.slots.push_back({2, c, 0});
    std::mt19937_64 rng(s);
    std::uniform_real_distribution<> u(-1.0, 1.0);
    int n = a + m + b;
    Matrix G(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) G(i, j) = std::complex<double>(u(rng), u(rng));
    FredholmModule x{std::move(rep), (G + G.adjoint()) / 2.0, false};
    x.validate();
    return x;
  };
  auto J1 = algebra::Ideal::of({0, 1}, alg);
  auto J2 = algebra::Ideal::of({1, 2}, alg);
  return SurgeryPair::build(make(n1, n0, n2, seed), make(nt1, n0, nt2, seed + 1), J1, J2);
}

}  // namespace

TEST_CASE("c_choice parsing") {
  CHECK(c_choice_from_string("from_x") == CChoice::FromX);
  CHECK(c_choice_from_string("from_x_tilde") == CChoice::FromXtilde);
  CHECK(c_choice_from_string("average") == CChoice::Average);
  for (auto c : {CChoice::FromX, CChoice::FromXtilde, CChoice::Average})
    CHECK(c_choice_from_string(c_choice_name(c)) == c);
  CHECK_THROWS_AS(c_choice_from_string("middle"), ConfigError);
}

TEST_CASE("toy diamonds stay exact") {
  auto toy = models::toy_exact_pair(3, 2, 3, 3, 3, 21);
  const auto& p = toy.pair;
  for (auto c : {CChoice::FromX, CChoice::FromXtilde, CChoice::Average}) {
    auto dia = diamond(p, c);
    dia.validate();
    CHECK(dia.dim() == p.bx.n1() + p.bx.n0() + p.bt.n2());
    CHECK((dia.F - dia.F.adjoint()).norm() == 0.0);
    Matrix sq = dia.F * dia.F - Matrix::Identity(dia.dim(), dia.dim());
    CHECK(sq.norm() <= 1e-14);
    Matrix g = dia.grading().cast<std::complex<double>>().asDiagonal();
    CHECK((g * dia.F + dia.F * g).norm() == 0.0);
  }
}

TEST_CASE("middle block follows the c choice") {
  models::DomainWallConfig cfg;
  cfg.sites = 100;
  cfg.mass = models::profile_from_pattern("-++", cfg.half_length);
  cfg.mass_tilde = models::profile_from_pattern("++-", cfg.half_length);
  auto bundle = models::build_agreeing_pair(cfg, 7);
  const auto& p = bundle.pair;
  int n1 = p.bx.n1(), n0 = p.bx.n0();

  auto mid = [&](CChoice c) { return Matrix(diamond(p, c).F.block(n1, n1, n0, n0)); };
  CHECK((mid(CChoice::FromX) - p.bx.c).norm() == 0.0);
  CHECK((mid(CChoice::FromXtilde) - p.bt.c).norm() == 0.0);
  CHECK((mid(CChoice::Average) - (p.bx.c + p.bt.c) / 2.0).norm() == 0.0);
  // the two discretized walls genuinely disagree off the shared region
  CHECK((p.bx.c - p.bt.c).norm() > 1e-8);
}

TEST_CASE("homotopy family: range, endpoints, symmetry") {
  auto toy = models::toy_exact_pair(2, 2, 2, 4, 2, 23);
  const auto& p = toy.pair;
  CHECK_THROWS_AS(homotopy_operator(p, -0.1), ConfigError);
  CHECK_THROWS_AS(homotopy_operator(p, 1.6), ConfigError);

  auto s0 = homotopy_operator(p, 0.0);
  CHECK(s0.graded);
  CHECK(s0.dims == std::vector<int>{2, 2, 2, 4, 2, 2});
  int dim = p.x.dim() + p.xt.dim();
  REQUIRE(s0.Ft.rows() == dim);
  CHECK(s0.grading.size() == dim);

  // t = 0 is the corner-free direct sum: reorder each module to its
  // (H1, H0, H2) basis and compare block-diagonally (toy corners vanish)
  auto order = [](const BlockDecomposition& b) {
    std::vector<int> o = b.idx1;
    o.insert(o.end(), b.idx0.begin(), b.idx0.end());
    o.insert(o.end(), b.idx2.begin(), b.idx2.end());
    return o;
  };
  Matrix top = linalg::submatrix(p.x.F, order(p.bx), order(p.bx));
  Matrix bot = linalg::submatrix(p.xt.F, order(p.bt), order(p.bt));
  CHECK((s0.Ft.topLeftCorner(p.x.dim(), p.x.dim()) - top).norm() == 0.0);
  CHECK((s0.Ft.bottomRightCorner(p.xt.dim(), p.xt.dim()) - bot).norm() == 0.0);
  CHECK(s0.Ft.topRightCorner(p.x.dim(), p.xt.dim()).norm() == 0.0);

  for (double t : {0.3, 0.9, std::numbers::pi / 2}) {
    auto s = homotopy_operator(p, t);
    CHECK((s.Ft - s.Ft.adjoint()).norm() == 0.0);
    Matrix g = s.grading.cast<std::complex<double>>().asDiagonal();
    CHECK((g * s.Ft + s.Ft * g).norm() == 0.0);
  }
}

TEST_CASE("pasting unitary is a signed permutation") {
  auto toy = models::toy_exact_pair(2, 2, 2, 4, 4, 29);
  Matrix U = pasting_unitary(toy.pair);
  int n = U.rows();
  CHECK((U * U.adjoint() - Matrix::Identity(n, n)).norm() == 0.0);
  CHECK((U.adjoint() * U - Matrix::Identity(n, n)).norm() == 0.0);
  for (int i = 0; i < n; ++i) {
    int nonzero = 0;
    for (int j = 0; j < n; ++j)
      if (std::abs(U(i, j)) > 0) {
        ++nonzero;
        CHECK(std::abs(std::abs(U(i, j)) - 1.0) == 0.0);
      }
    CHECK(nonzero == 1);
  }
}

TEST_CASE("endpoint identity holds exactly") {
  CHECK(endpoint_check(models::toy_exact_pair(2, 2, 2, 2, 2, 31).pair) <= 1e-12);
  CHECK(endpoint_check(models::toy_exact_pair(3, 4, 1, 1, 3, 32).pair) <= 1e-12);
  // multilinear in the blocks: random ungraded pairs satisfy it too
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    std::uniform_int_distribution<> d(1, 5);
    auto p = random_pair(d(rng), d(rng), d(rng), d(rng), d(rng), 1000 + trial);
    CHECK(endpoint_check(p) <= 1e-12);
  }
}

TEST_CASE("swapping gives the mirror") {
  auto toy = models::toy_exact_pair(2, 2, 4, 2, 2, 37);
  auto m = toy.pair.swapped();
  CHECK(m.x.dim() == toy.pair.xt.dim());
  CHECK((m.x.F - toy.pair.xt.F).norm() == 0.0);
  CHECK((m.xt.F - toy.pair.x.F).norm() == 0.0);
  auto mir = diamond(m);
  CHECK(mir.dim() == toy.pair.bt.n1() + toy.pair.bt.n0() + toy.pair.bx.n2());
  CHECK(endpoint_check(m) <= 1e-12);
}
