#include "fredlab/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "fredlab/errors.hpp"

namespace fredlab::models {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

// uniform in [-1, 1], reproducible across platforms (mt19937_64 is fully
// specified; we avoid std::*_distribution on purpose)
double uniform_pm1(std::mt19937_64& gen) {
  return 2.0 * (static_cast<double>(gen() >> 11) * 0x1.0p-53) - 1.0;
}

int sgn(double v) { return (v > 0) - (v < 0); }

}  // namespace

double MassProfile::at(double x, double L) const {
  for (size_t i = 0; i < breakpoints.size(); ++i)
    if (x <= breakpoints[i] + 1e-12) return values[i];
  (void)L;
  return values.back();
}

void MassProfile::validate(double L) const {
  if (values.empty() || values.size() != breakpoints.size() + 1)
    throw ConfigError("mass profile needs one more value than breakpoints");
  for (size_t i = 0; i < breakpoints.size(); ++i) {
    if (breakpoints[i] <= -L || breakpoints[i] >= L)
      throw ConfigError("mass breakpoints must lie inside (-L, L)");
    if (i > 0 && breakpoints[i] <= breakpoints[i - 1])
      throw ConfigError("mass breakpoints must be strictly increasing");
  }
}

MassProfile profile_from_pattern(const std::string& pattern, double L) {
  if (pattern.size() != 3 || pattern.find_first_not_of("+-") != std::string::npos)
    throw ConfigError("mass pattern must be three characters of '+'/'-': " + pattern);
  MassProfile p;
  p.breakpoints = {-0.75 * L, 0.75 * L};
  for (char ch : pattern) p.values.push_back(ch == '+' ? 1.0 : -1.0);
  return p;
}

void DomainWallConfig::validate() const {
  if (half_length <= 0) throw ConfigError("half_length must be positive");
  if (sites < 16) throw ConfigError("too coarse: need at least 16 sites");
  if (sites > 2000) throw ConfigError("dense eigensolves are capped at 2000 sites");
  if (sites % 2) throw ConfigError("site count must be even");
  mass.validate(half_length);
  mass_tilde.validate(half_length);
  if (!(middle_lo < middle_hi) || middle_lo <= -half_length || middle_hi >= half_length)
    throw ConfigError("middle region must be a nonempty subinterval of (-L, L)");
  if (wilson_r < 0) throw ConfigError("wilson_r must be nonnegative");
  if (thresholds.kernel_cutoff_rel <= 0 || thresholds.kernel_cutoff_rel >= 1)
    throw ConfigError("kernel_cutoff_rel must lie in (0, 1)");
  if (thresholds.gap_ratio_min < 1) throw ConfigError("gap_ratio_min must be >= 1");
  if (thresholds.bulk_floor < 0) throw ConfigError("bulk_floor must be nonnegative");

  double h = 2.0 * half_length / sites;
  int edge = (sites + 9) / 10;
  for (int n = 0; n < sites; ++n) {
    double x = -half_length + (n + 0.5) * h;
    double mv = mass.at(x, half_length), mt = mass_tilde.at(x, half_length);
    if (x > middle_lo + 1e-12 && x <= middle_hi + 1e-12 && mv != mt)
      throw ConfigError("mass profiles disagree on the middle region");
    if ((n < edge || n >= sites - edge) && (std::abs(mv) < 0.5 || std::abs(mt) < 0.5))
      throw ConfigError("|mass| must be >= 0.5 on the outermost 10% of sites");
  }
}

DiracOperator build_wilson_dirac(const DomainWallConfig& cfg, bool tilde) {
  cfg.validate();
  const MassProfile& prof = tilde ? cfg.mass_tilde : cfg.mass;
  int N = cfg.sites;
  double L = cfg.half_length, h = 2.0 * L / N, r = cfg.wilson_r;

  DiracOperator d;
  d.N = N;
  d.L = L;
  d.h = h;
  d.xs.resize(N);
  d.m.resize(N);
  for (int n = 0; n < N; ++n) {
    d.xs[n] = -L + (n + 0.5) * h;
    d.m[n] = prof.at(d.xs[n], L);
  }

  // v -> u single-channel operator i(C + W): C the central difference,
  // W = mass + r/h on the diagonal and -r/(2h) next to it
  Eigen::MatrixXd CpW = Eigen::MatrixXd::Zero(N, N);
  for (int n = 0; n < N; ++n) {
    CpW(n, n) = d.m[n] + r / h;
    if (n + 1 < N) CpW(n, n + 1) = 1.0 / (2 * h) - r / (2 * h);
    if (n - 1 >= 0) CpW(n, n - 1) = -1.0 / (2 * h) - r / (2 * h);
  }

  // trim the channel that the clamped boundary mass would otherwise leave
  // gapless (negative mass binds an edge mode of that chirality)
  bool keep_v0 = d.m[0] >= 0, keep_uN = d.m[N - 1] >= 0;
  for (int n = 0; n < N; ++n) {
    if (n != N - 1 || keep_uN) d.slot_sites.emplace_back(n, 0);
    if (n != 0 || keep_v0) d.slot_sites.emplace_back(n, 1);
  }

  int dim = d.dim();
  d.D = linalg::Matrix::Zero(dim, dim);
  d.grading.resize(dim);
  for (int i = 0; i < dim; ++i) d.grading[i] = d.slot_sites[i].second == 0 ? 1.0 : -1.0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      auto [ni, si] = d.slot_sites[i];
      auto [nj, sj] = d.slot_sites[j];
      if (si == 1 && sj == 0)
        d.D(i, j) = kI * CpW(ni, nj);
      else if (si == 0 && sj == 1)
        d.D(i, j) = std::conj(kI * CpW(nj, ni));
    }
  return d;
}

FredholmModule module_from_dirac(const DiracOperator& d) {
  linalg::HermitianEig eig = linalg::hermitian_eig(d.D);
  Eigen::VectorXd f(eig.values.size());
  for (int i = 0; i < f.size(); ++i)
    f[i] = eig.values[i] / std::sqrt(1.0 + eig.values[i] * eig.values[i]);
  linalg::Matrix F = eig.vectors * f.asDiagonal() * eig.vectors.adjoint();
  F = 0.5 * (F + F.adjoint()).eval();  // exact Hermiticity
  linalg::Matrix GFG = d.grading.asDiagonal() * F * d.grading.asDiagonal();
  F = 0.5 * (F - GFG);  // exact oddness

  FredholmModule x;
  x.rep.alg.block_dims.assign(d.N, 1);
  for (auto [site, channel] : d.slot_sites) x.rep.slots.push_back({site, channel, 0});
  x.rep.grading = d.grading;
  x.F = std::move(F);
  x.graded = true;
  x.validate();
  return x;
}

algebra::AlgebraElement bump_element(const DiracOperator& d, double center, double halfwidth) {
  Eigen::VectorXd vals = Eigen::VectorXd::Zero(d.N);
  for (int n = 0; n < d.N; ++n) {
    double u = d.xs[n] - center;
    if (std::abs(u) < halfwidth)
      vals[n] = 0.5 * (1.0 + std::cos(std::numbers::pi * u / halfwidth));
  }
  algebra::BlockAlgebra alg;
  alg.block_dims.assign(d.N, 1);
  return algebra::AlgebraElement::diagonal(alg, vals);
}

TestElements standard_test_elements(const DiracOperator& d, uint64_t seed) {
  algebra::BlockAlgebra alg;
  alg.block_dims.assign(d.N, 1);
  TestElements tests;
  tests.emplace_back("identity", algebra::AlgebraElement::identity(alg));
  double hw = 2.0 * d.L / 5.0;
  for (int i = 0; i < 5; ++i) {
    int site = d.N * (2 * i + 1) / 10;
    tests.emplace_back("bump" + std::to_string(i), bump_element(d, d.xs[site], hw));
  }
  std::mt19937_64 gen(seed);
  for (int i = 0; i < 3; ++i) {
    Eigen::VectorXd vals(d.N);
    for (int n = 0; n < d.N; ++n) vals[n] = uniform_pm1(gen);
    tests.emplace_back("rand" + std::to_string(i), algebra::AlgebraElement::diagonal(alg, vals));
  }
  return tests;
}

int oracle_kernel_index(const DiracOperator& d, double cut) {
  linalg::HermitianEig eig = linalg::hermitian_eig(d.D);
  double acc = 0.0;
  for (int i = 0; i < eig.values.size(); ++i) {
    if (std::abs(eig.values[i]) >= cut) continue;
    for (int j = 0; j < d.grading.size(); ++j)
      acc += (std::conj(eig.vectors(j, i)) * d.grading[j] * eig.vectors(j, i)).real();
  }
  return static_cast<int>(std::lround(acc));
}

int wall_heuristic(const DiracOperator& d) {
  return (sgn(d.m[d.N - 1]) - sgn(d.m[0])) / 2;
}

namespace {

std::pair<algebra::Ideal, algebra::Ideal> middle_ideals(const DomainWallConfig& cfg,
                                                        const DiracOperator& d) {
  algebra::BlockAlgebra alg;
  alg.block_dims.assign(d.N, 1);
  std::vector<int> s1, s2;
  for (int n = 0; n < d.N; ++n) {
    if (d.xs[n] <= cfg.middle_hi + 1e-12) s1.push_back(n);
    if (d.xs[n] > cfg.middle_lo + 1e-12) s2.push_back(n);
  }
  return {algebra::Ideal::of(s1, alg), algebra::Ideal::of(s2, alg)};
}

}  // namespace

ModelBundle build_agreeing_pair(const DomainWallConfig& cfg, uint64_t seed) {
  DiracOperator dx = build_wilson_dirac(cfg, false);
  DiracOperator dt = build_wilson_dirac(cfg, true);
  FredholmModule x = module_from_dirac(dx);
  FredholmModule xt = module_from_dirac(dt);
  auto [J1, J2] = middle_ideals(cfg, dx);

  ModelBundle bundle{surgery::SurgeryPair::build(std::move(x), std::move(xt), J1, J2)};
  bundle.oracle_x = wall_heuristic(dx);
  bundle.oracle_xt = wall_heuristic(dt);
  bundle.agreement =
      agreement_defect(bundle.pair.x, bundle.pair.xt, ideal_intersect(J1, J2));
  bundle.tests = standard_test_elements(dx, seed);
  bundle.dirac_x = std::move(dx);
  bundle.dirac_xt = std::move(dt);
  return bundle;
}

// ------------------------------------------------------------------- toys

namespace {

struct ToyParts {
  std::vector<std::pair<int, int>> pairs;  // matched slot indices (i, j)
  std::vector<double> signs;
};

}  // namespace

ModelBundle toy_exact_pair(int n1, int n0, int n2, int nt1, int nt2, uint64_t seed) {
  int p = n1, q = n0, r = n2, pt = nt1, rt = nt2;
  if (p < 1 || q < 1 || r < 1 || pt < 1 || rt < 1)
    throw ConfigError("toy dims must be >= 1 (nondegenerate representations)");
  int k_b = p % 2, k_d = r % 2;
  if (pt % 2 != k_b || rt % 2 != k_d)
    throw ConfigError("toy dims have incompatible parity between the two modules");
  if ((p + q + r) % 2 || q < k_b + k_d)
    throw ConfigError("toy dims admit no odd involution (parity infeasible)");
  int k_c = (q - k_b - k_d) / 2;

  std::mt19937_64 gen(seed);
  auto pair_sign = [&]() { return gen() & 1 ? 1.0 : -1.0; };

  // shared middle layout: [0, 2k_c) internal pairs, then k_b slots bound for
  // H1, then k_d slots bound for H2
  std::vector<double> csigns(k_c);
  for (double& s : csigns) s = pair_sign();
  Eigen::VectorXd gmid(q);
  for (int i = 0; i < k_c; ++i) {
    gmid[2 * i] = 1.0;
    gmid[2 * i + 1] = -1.0;
  }
  for (int i = 0; i < k_b; ++i) gmid[2 * k_c + i] = -1.0;
  for (int i = 0; i < k_d; ++i) gmid[2 * k_c + k_b + i] = 1.0;

  auto build_module = [&](int left, int right) {
    int dim = left + q + right;
    int off0 = left, off2 = left + q;
    linalg::Matrix F = linalg::Matrix::Zero(dim, dim);
    Eigen::VectorXd g(dim);
    g.segment(off0, q) = gmid;
    auto match = [&](int i, int j, double s) {
      F(i, j) = s;
      F(j, i) = s;
    };
    for (int i = 0; i < k_c; ++i) match(off0 + 2 * i, off0 + 2 * i + 1, csigns[i]);
    // outer regions: internal pairs first, outgoing slots at the end
    for (int i = 0; i + 1 < left - k_b + 1; i += 2) {
      match(i, i + 1, pair_sign());
      g[i] = 1.0;
      g[i + 1] = -1.0;
    }
    for (int i = 0; i < k_b; ++i) {
      int sl = left - k_b + i, mid = off0 + 2 * k_c + i;
      match(sl, mid, pair_sign());
      g[sl] = -gmid[2 * k_c + i];
    }
    for (int i = 0; i + 1 < right - k_d + 1; i += 2) {
      match(off2 + i, off2 + i + 1, pair_sign());
      g[off2 + i] = 1.0;
      g[off2 + i + 1] = -1.0;
    }
    for (int i = 0; i < k_d; ++i) {
      int sl = off2 + right - k_d + i, mid = off0 + 2 * k_c + k_b + i;
      match(sl, mid, pair_sign());
      g[sl] = -gmid[2 * k_c + k_b + i];
    }

    FredholmModule x;
    x.rep.alg.block_dims = {1, 1, 1};
    for (int i = 0; i < left; ++i) x.rep.slots.push_back({0, i, 0});
    for (int i = 0; i < q; ++i) x.rep.slots.push_back({1, i, 0});
    for (int i = 0; i < right; ++i) x.rep.slots.push_back({2, i, 0});
    x.rep.grading = g;
    x.F = std::move(F);
    x.graded = true;
    x.validate();
    return x;
  };

  FredholmModule x = build_module(p, r);
  FredholmModule xt = build_module(pt, rt);
  algebra::Ideal J1 = algebra::Ideal::of({0, 1}, x.rep.alg);
  algebra::Ideal J2 = algebra::Ideal::of({1, 2}, x.rep.alg);

  ModelBundle bundle{surgery::SurgeryPair::build(std::move(x), std::move(xt), J1, J2)};
  bundle.agreement = agreement_defect(bundle.pair.x, bundle.pair.xt, ideal_intersect(J1, J2));
  bundle.tests.emplace_back("identity",
                            algebra::AlgebraElement::identity(bundle.pair.x.rep.alg));
  return bundle;
}

}  // namespace fredlab::models
