#include <gtest/gtest.h>

#include <cmath>

#include "shapedecomp/ecg.hpp"
#include "shapedecomp/errors.hpp"
#include "test_support.hpp"

using namespace shapedecomp;
using namespace testing_support;

namespace {

ECGPrimitive primitive(double a11, double a22, double a33, double a12, double a13, double a23, Eigen::Vector3d g) {
  Eigen::Matrix3d A;
  A << a11, a12, a13, a12, a22, a23, a13, a23, a33;
  return ECGPrimitive::from_matrix(A, g);
}

ECGPrimitive prim_a() { return primitive(1.1, 0.6, 0.5, 0.1, -0.05, 0.08, {0.4, -0.1, 0.2}); }
ECGPrimitive prim_b() { return primitive(0.7, 0.9, 0.45, -0.12, 0.06, 0.02, {-0.2, 0.3, 0.25}); }

const std::array<std::array<int, 3>, 6> kPerms{{{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
int perm_sign(const std::array<int, 3>& p) { return Perm3(p[0], p[1], p[2]).sign(); }

// One axis of a permuted primitive and its gradient, at u in R^3.
struct AxisValue {
  double f;
  Eigen::Vector3d grad;
};

AxisValue axis_factor(const ECGPrimitive& p, const std::array<int, 3>& perm, const Eigen::Vector3d& u, bool lobe) {
  Eigen::Vector3d w;
  for (int i = 0; i < 3; ++i) w[i] = u[perm[i]];
  const Eigen::Matrix3d A = p.A();
  const double e = std::exp(-w.dot(A * w));
  Eigen::Vector3d gw;
  double f;
  if (lobe) {
    const double t = p.g().dot(w);
    f = e * std::sinh(t);
    gw = e * (-2 * std::sinh(t) * (A * w) + std::cosh(t) * p.g());
  } else {
    f = e;
    gw = -2 * e * (A * w);
  }
  Eigen::Vector3d gu;
  for (int i = 0; i < 3; ++i) gu[perm[i]] = gw[i];
  return {f, gu};
}

struct AxisIntegrals {
  double overlap = 0, gradient = 0;
};

// Trapezoid rule on a cube; Gaussian integrands converge exponentially.
AxisIntegrals grid_integrals(const ECGPrimitive& a, const std::array<int, 3>& pa, const ECGPrimitive& b,
                             const std::array<int, 3>& pb, bool lobe) {
  const int n = 56;
  const double L = 5.5, h = 2 * L / (n - 1);
  AxisIntegrals out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const Eigen::Vector3d u(-L + i * h, -L + j * h, -L + k * h);
        const auto fa = axis_factor(a, pa, u, lobe), fb = axis_factor(b, pb, u, lobe);
        out.overlap += fa.f * fb.f;
        out.gradient += fa.grad.dot(fb.grad);
      }
  out.overlap *= h * h * h;
  out.gradient *= h * h * h;
  return out;
}

// ⟨Âφa|Âφb⟩ and ⟨Âφa|-½∇²|Âφb⟩ as the full double sum over particle
// permutations, each term a product of three independent axis integrals.
std::pair<double, double> grid_overlap_kinetic(const ECGPrimitive& a, const ECGPrimitive& b) {
  double S = 0, T = 0;
  for (const auto& pa : kPerms)
    for (const auto& pb : kPerms) {
      const auto xy = grid_integrals(a, pa, b, pb, false);
      const auto z = grid_integrals(a, pa, b, pb, true);
      const double s = perm_sign(pa) * perm_sign(pb);
      S += s * xy.overlap * xy.overlap * z.overlap;
      T += s * 0.5 * (2 * xy.gradient * xy.overlap * z.overlap + xy.overlap * xy.overlap * z.gradient);
    }
  return {S, T};
}

double primitive_value(const ECGPrimitive& p, std::span<const double, 9> r) {
  double s = 0;
  for (const auto& perm : kPerms) {
    double q = 0, t = 0;
    for (int ax = 0; ax < 3; ++ax) {
      Eigen::Vector3d w;
      for (int i = 0; i < 3; ++i) w[i] = r[3 * ax + perm[i]];
      q += w.dot(p.A() * w);
      if (ax == 2) t = p.g().dot(w);
    }
    s += perm_sign(perm) * std::exp(-q) * std::sinh(t);
  }
  return s;
}

ECGBasis two_term_basis() {
  ECGBasis b;
  b.primitives = {prim_a(), prim_b()};
  b.coefficients = {1.0, -0.4};
  normalize(b);
  return b;
}

}  // namespace

TEST(Ecg, PrimitiveMatrixRoundTrip) {
  const ECGPrimitive p = prim_a();
  EXPECT_TRUE(p.valid());
  Eigen::Matrix3d A;
  A << 1.1, 0.1, -0.05, 0.1, 0.6, 0.08, -0.05, 0.08, 0.5;
  EXPECT_LT((p.A() - A).norm(), 1e-14);
  // α_i = -A_ii - Σ_j≠i β_ij.
  EXPECT_NEAR(p.alpha[0], -1.1 - 0.1 + 0.05, 1e-14);
  EXPECT_NEAR(p.beta[0], 0.1, 1e-14);
  ECGPrimitive bad = p;
  bad.alpha = {1.0, 1.0, 1.0};
  EXPECT_FALSE(bad.valid());
}

TEST(Ecg, GaussianIntegralMatchesSeparableQuadrature) {
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(9, 9);
  Eigen::VectorXd b(9);
  double expected = 1;
  for (int i = 0; i < 9; ++i) {
    const double q = -(0.4 + 0.15 * i), c = 0.1 * (i - 4);
    Q(i, i) = q;
    b[i] = c;
    double s = 0;
    const int n = 4001;
    const double L = 12, h = 2 * L / (n - 1);
    for (int k = 0; k < n; ++k) {
      const double t = -L + k * h;
      s += std::exp(q * t * t + c * t);
    }
    expected *= s * h;
  }
  EXPECT_NEAR(gaussian_moment_integral(Q, b) / expected, 1.0, 1e-12);

  // An orthogonal change of variables leaves the integral unchanged.
  Eigen::MatrixXd R = Eigen::MatrixXd::Identity(9, 9);
  const double c = std::cos(0.7), s = std::sin(0.7);
  R(0, 0) = c, R(0, 1) = -s, R(1, 0) = s, R(1, 1) = c;
  EXPECT_NEAR(gaussian_moment_integral(R * Q * R.transpose(), R * b) / expected, 1.0, 1e-12);

  Q(3, 3) = 0.1;
  EXPECT_THROW(gaussian_moment_integral(Q, b), NotNegativeDefinite);
}

TEST(Ecg, OverlapAndKineticMatchGridQuadrature) {
  for (const auto& [a, b] : {std::pair{prim_a(), prim_b()}, std::pair{prim_a(), prim_a()}}) {
    const auto pe = pair_elements(a, b);
    const auto [S, T] = grid_overlap_kinetic(a, b);
    EXPECT_NEAR(pe.S, S, 1e-8 * std::abs(S));
    EXPECT_NEAR(pe.T, T, 1e-8 * std::abs(T));
  }
}

// Under r -> λr: S ∝ λ⁻⁹, T ∝ λ⁻⁷, V ∝ λ⁻⁸.
TEST(Ecg, ElementsScaleHomogeneously) {
  const double lambda = 1.3;
  ECGBasis b;
  b.primitives = {prim_a(), prim_b()};
  b.coefficients = {1, 1};
  const ECGBasis s = scale_coordinates(b, lambda);
  const auto p0 = pair_elements(b.primitives[0], b.primitives[1]);
  const auto p1 = pair_elements(s.primitives[0], s.primitives[1]);
  EXPECT_NEAR(p1.S / p0.S, std::pow(lambda, -9), 1e-12);
  EXPECT_NEAR(p1.T / p0.T, std::pow(lambda, -7), 1e-12);
  EXPECT_NEAR(p1.V / p0.V, std::pow(lambda, -8), 1e-12);
}

TEST(Ecg, MatrixElementsAreSymmetric) {
  const auto m = matrix_elements({prim_a(), prim_b()});
  EXPECT_NEAR(m.S(0, 1), m.S(1, 0), 1e-15 * std::abs(m.S(0, 1)));
  EXPECT_NEAR(m.V(0, 1), m.V(1, 0), 1e-12 * std::abs(m.V(0, 1)));
  const auto p = pair_elements(prim_b(), prim_a());
  EXPECT_NEAR(m.T(1, 0), p.T, 1e-12 * std::abs(p.T));
  EXPECT_LT(m.V(0, 0), 0);
  EXPECT_GT(m.T(0, 0), 0);
}

TEST(Ecg, ValueMatchesDirectSum) {
  const ECGBasis b = two_term_basis();
  std::mt19937_64 rng(1);
  for (int t = 0; t < 10; ++t) {
    const auto r = real_point(rng, 1.0);
    const double ref = b.coefficients[0] * primitive_value(b.primitives[0], r) +
                       b.coefficients[1] * primitive_value(b.primitives[1], r);
    EXPECT_NEAR(ecg_value(b, r), ref, 1e-13);
  }
}

TEST(Ecg, ValueIsAntisymmetric) {
  const ECGBasis b = two_term_basis();
  std::mt19937_64 rng(2);
  const auto r = real_point(rng, 1.0);
  for (const auto& [i, j] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
    auto s = r;
    for (int ax = 0; ax < 3; ++ax) std::swap(s[3 * ax + i], s[3 * ax + j]);
    EXPECT_NEAR(ecg_value(b, s), -ecg_value(b, r), 1e-14);
  }
}

TEST(Ecg, SingleFunctionSecularProblem) {
  const auto m = matrix_elements({prim_a()});
  const auto sol = solve_secular(m.H(), m.S);
  EXPECT_NEAR(sol.energy, m.H()(0, 0) / m.S(0, 0), 1e-12);
  EXPECT_NEAR(sol.C[0] * sol.C[0] * m.S(0, 0), 1.0, 1e-12);
}

TEST(Ecg, SecularSolutionIsLowestGeneralizedEigenpair) {
  const auto m = matrix_elements({prim_a(), prim_b(), primitive(2.0, 1.5, 1.0, 0.3, 0.1, -0.2, {0.5, 0.1, 0.0})});
  const auto sol = solve_secular(m.H(), m.S);
  EXPECT_NEAR((sol.C.transpose() * m.S * sol.C)(0, 0), 1.0, 1e-10);
  EXPECT_LT((m.H() * sol.C - sol.energy * m.S * sol.C).norm(), 1e-8 * std::abs(sol.energy));
  // Rayleigh quotients of other vectors lie above.
  for (int i = 0; i < 3; ++i) EXPECT_LE(sol.energy, m.H()(i, i) / m.S(i, i) + 1e-12);
}

TEST(Ecg, DuplicatePrimitivesAreIllConditioned) {
  const auto m = matrix_elements({prim_a(), prim_a()});
  EXPECT_GT(overlap_condition(m.S), 1e12);
  EXPECT_THROW(solve_secular(m.H(), m.S), IllConditionedOverlap);
}

TEST(Ecg, NarayanaSizes) {
  EXPECT_EQ(narayana_sizes(9), (std::vector<int>{1, 2, 3, 4, 6, 9, 13, 19, 28}));
}

TEST(Ecg, OptimizerRejectsNonNarayanaSizes) {
  OptimizeOptions o;
  o.sizes = {1, 2, 4};
  EXPECT_THROW(optimize_basis(o), InvalidInput);
}

TEST(Ecg, SmallOptimizationIsDeterministicAndDecreasing) {
  OptimizeOptions o;
  o.sizes = {1, 2};
  o.restarts = 2;
  o.search_sweeps = 4;
  o.max_iterations = 40;
  const auto r1 = optimize_basis(o);
  const auto r2 = optimize_basis(o);
  ASSERT_EQ(r1.stages.size(), 2u);
  EXPECT_EQ(r1.stages[1].energy, r2.stages[1].energy);
  EXPECT_LT(r1.stages[1].energy, r1.stages[0].energy);
  EXPECT_LT(r1.stages[0].energy, -4.0);
  EXPECT_GT(r1.stages[1].energy, -5.3781);  // above the exact ⁴P° energy
  EXPECT_EQ(r1.best().size(), 2u);
}

TEST(Ecg, FixtureBasisIsNormalizedAndVirial) {
  const ECGBasis& b = fixture_basis();
  ASSERT_EQ(b.size(), 9u);
  const auto e = expectation(b);
  EXPECT_NEAR(e.norm, 1.0, 1e-10);
  EXPECT_NEAR(e.energy(), b.energy, 1e-9);
  EXPECT_NEAR(e.virial(), -2.0, 1e-4);
  EXPECT_LE(b.energy, -5.35);
}

TEST(Ecg, JsonRoundTrip) {
  const ECGBasis& b = fixture_basis();
  const std::string text = basis_to_json(b);
  const ECGBasis c = basis_from_json(text);
  EXPECT_EQ(basis_to_json(c), text);
  EXPECT_EQ(c.coefficients, b.coefficients);
  EXPECT_THROW(basis_from_json("{\"format\": \"other\"}"), InvalidInput);
}

TEST(Ecg, PermutedOverlapsAreConsistent) {
  const ECGBasis& b = fixture_basis();
  const auto ov = permuted_overlaps(b);
  EXPECT_NEAR(ov[0], 1.0, 1e-10);
  for (int j = 0; j < 36; ++j) {
    EXPECT_LE(std::abs(ov[j]), 1.0 + 1e-10);
    EXPECT_NEAR(doubly_permuted_overlap(b, inverse_index(j), 0), ov[j], 1e-10);
  }
  for (int a : {3, 17, 29})
    for (int c : {1, 8, 35}) EXPECT_NEAR(doubly_permuted_overlap(b, a, c), ov[compose_index(inverse_index(a), c)], 1e-10);
}

TEST(Ecg, BlockWeights) {
  const auto w = block_amplitudes(fixture_basis());
  double sum = 0;
  for (int k = 0; k < kNumBlocks; ++k) {
    sum += w.w[k];
    EXPECT_GE(w.w[k], 0);
    EXPECT_NEAR(w.a[k] * w.a[k], w.w[k], 1e-14);
  }
  EXPECT_NEAR(sum, 1.0, 1e-8);
  EXPECT_NEAR(w.w[0], w.w[3], 1e-6);
  EXPECT_NEAR(w.w[6], w.w[8], 1e-6);
  EXPECT_NEAR(w.w[7], w.w[9], 1e-6);
  EXPECT_GT(w.w[2] + w.w[7] + w.w[9], 0.80);
  EXPECT_LT(w.orthonormality_residual, 1e-8);
  EXPECT_LT((w.xi_gram - Eigen::MatrixXd::Identity(kNumBlocks, kNumBlocks)).norm(), 1e-8);
}

TEST(Ecg, BlockWeightsIgnoreOverallScale) {
  ECGBasis b = fixture_basis();
  const auto w0 = block_amplitudes(b);
  for (double& c : b.coefficients) c *= 2;
  normalize(b);
  const auto w1 = block_amplitudes(b);
  for (int k = 0; k < kNumBlocks; ++k) EXPECT_NEAR(w0.w[k], w1.w[k], 1e-10);
}
