#include <gtest/gtest.h>

#include "shapedecomp/decompose.hpp"
#include "shapedecomp/errors.hpp"
#include "test_support.hpp"

using namespace shapedecomp;
using namespace testing_support;

namespace {

std::array<double, 36> values_at(const Poly9& psi, const std::array<double, 9>& pt) {
  const PolyEvaluator e(psi);
  std::array<double, 36> out;
  for (int j = 0; j < 36; ++j) out[j] = e(permute_point(std::span<const double, 9>(pt), group_elements()[j]));
  return out;
}

std::array<double, 9> generic_point(std::mt19937_64& rng) {
  for (;;) {
    auto p = real_point(rng);
    bool ok = true;
    for (int a = 0; a < 3; ++a)
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) ok = ok && std::abs(p[3 * a + i] - p[3 * a + j]) > 0.05;
    if (ok) return p;
  }
}

struct Fixture : ::testing::Test {
  static const RandomAlternating& sample() {
    static const RandomAlternating r = [] {
      std::mt19937_64 rng(2024);
      return random_alternating(rng, 3);
    }();
    return r;
  }
};

}  // namespace

TEST_F(Fixture, SymbolicRoundTripIsExact) {
  const auto& r = sample();
  const auto phi = extract_bosonic_symbolic(r.psi);
  for (int i = 0; i < kNumShapes; ++i) {
    EXPECT_EQ(phi.phi[i], r.p[i]) << "S" << i;
    EXPECT_TRUE(symmetry_check(phi.phi[i], Symmetry::bosonic));
  }
  EXPECT_EQ(reconstruct(phi), r.psi);
}

TEST(Decompose, SingleShapeHasUnitCoefficient) {
  for (int i : {0, 5, 23, 32, 35}) {
    const auto phi = extract_bosonic_symbolic(canonical_shapes().shapes[i]);
    for (int k = 0; k < kNumShapes; ++k) EXPECT_EQ(phi.phi[k], Poly9(k == i ? 1 : 0)) << i << " " << k;
  }
}

TEST(Decompose, RejectsNonAlternatingInput) {
  EXPECT_THROW(extract_bosonic_symbolic(x(1) * y(2)), NotAlternating);
}

TEST_F(Fixture, ExactPointRouteMatchesSymbolic) {
  const auto& r = sample();
  std::mt19937_64 rng(9);
  int done = 0;
  while (done < 3) {
    const auto pt = rational_point(rng);
    if (!distinct_per_axis(pt)) continue;
    ++done;
    const std::span<const Rational, 9> sp(pt);
    const auto exact = extract_at_point(r.psi, sp);
    std::array<Rational, 36> vals;
    for (int j = 0; j < 36; ++j) vals[j] = permute_vars(r.psi, group_elements()[j]).evaluate(sp);
    const auto via_f = apply_extraction_matrix(extraction_matrix(), sp, vals);
    for (int i = 0; i < kNumShapes; ++i) {
      EXPECT_EQ(exact.phi[i], r.p[i].evaluate(sp)) << "S" << i;
      EXPECT_EQ(via_f.phi[i], exact.phi[i]) << "S" << i;
    }
  }
}

TEST(Decompose, ExactPointRouteRejectsCoincidence) {
  std::array<Rational, 9> pt{1, 1, 2, 0, 1, 2, 0, 1, 2};
  EXPECT_THROW(extract_at_point(canonical_shapes().shapes[3], std::span<const Rational, 9>(pt)), SingularPoint);
}

TEST_F(Fixture, NumericRouteMatchesSymbolic) {
  const auto& r = sample();
  const PolyEvaluator psi(r.psi);
  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    const auto pt = generic_point(rng);
    const auto num = extract_bosonic_numeric([&](std::span<const double, 9> q) { return psi(q); }, pt);
    double scale = 0;
    std::array<double, 36> ref;
    for (int i = 0; i < kNumShapes; ++i) {
      ref[i] = PolyEvaluator(r.p[i])(pt);
      scale = std::max(scale, std::abs(ref[i]));
    }
    for (int i = 0; i < kNumShapes; ++i) EXPECT_NEAR(num.phi[i], ref[i], 1e-9 * std::max(1.0, scale));
    EXPECT_NEAR(reconstruct(num, pt), psi(pt), 1e-9 * std::max(1.0, std::abs(psi(pt))));
  }
}

TEST_F(Fixture, SingleComponentMatchesFullExtraction) {
  const auto& r = sample();
  std::mt19937_64 rng(6);
  const auto pt = generic_point(rng);
  const auto vals = values_at(r.psi, pt);
  const auto full = extract_from_values(vals, pt);
  for (int i = 0; i < kNumShapes; ++i)
    EXPECT_NEAR(extract_component(vals, pt, i), full.phi[i], 1e-12 * std::max(1.0, std::abs(full.phi[i])));
}

TEST_F(Fixture, GuardRejectsNearCoincidence) {
  const auto& r = sample();
  std::array<double, 9> pt{0.1, 0.1 + 1e-8, 0.7, -0.3, 0.2, 0.9, 0.4, -0.6, 1.1};
  const auto vals = values_at(r.psi, pt);
  EXPECT_THROW(extract_from_values(vals, pt), NearSingular);
  EXPECT_THROW(extract_component(vals, pt, 32), NearSingular);
  EXPECT_NO_THROW(extract_from_values(vals, pt, 1e-9));
  // One tiny gap among two large ones: the product alone would pass.
  std::array<double, 9> q{-3, 3, 3 + 1e-7, -0.3, 0.2, 0.9, 0.4, -0.6, 1.1};
  EXPECT_THROW(extract_from_values(values_at(r.psi, q), q), NearSingular);
}

// Σ_j w_j Ψ(σ_j v) = Ψ(v) for every function: the block projectors sum to one.
TEST_F(Fixture, InversionWeightsReproduceFunction) {
  const auto w = inversion_weights();
  std::mt19937_64 rng(8);
  const auto pt = rational_point(rng);
  const std::span<const Rational, 9> sp(pt);
  for (const Poly9& f : {sample().psi, x(1) * y(2) * y(2) + z(3)}) {
    Rational s = 0;
    for (int j = 0; j < 36; ++j) s += w[j] * permute_vars(f, group_elements()[j]).evaluate(sp);
    EXPECT_EQ(s, f.evaluate(sp));
  }
}

TEST(Decompose, MatrixAndCharacterReports) {
  for (const auto& c : verify_m_matrices(5, 3).checks) EXPECT_TRUE(c.pass) << c.name << " " << c.detail;
  for (const auto& c : verify_eta_bar_from_extraction().checks) EXPECT_TRUE(c.pass) << c.name << " " << c.detail;
}

TEST(Decompose, TwoFermionRoundTrip) {
  const Poly9 dx = x(1) - x(2), dy = y(1) - y(2), dz = z(1) - z(2);
  const std::array<Poly9, 4> phi{x(1) + x(2) + Poly9(1), y(1) * y(2), pow(dz, 2) + z(1) + z(2),
                                 Poly9(Rational(2, 3)) + x(1) * x(2) * y(1) * y(2)};
  const Poly9 psi = phi[0] * dx * dy * dz + phi[1] * dx + phi[2] * dy + phi[3] * dz;
  EXPECT_EQ(decompose_two_fermion(psi), phi);

  const PolyEvaluator e(psi);
  auto f = [&](std::span<const double, 6> p) {
    const std::array<double, 9> q{p[0], p[1], 0, p[2], p[3], 0, p[4], p[5], 0};
    return e(q);
  };
  const std::array<double, 6> pt{0.3, -0.8, 1.2, 0.1, -0.4, 0.6};
  const std::array<double, 9> full{0.3, -0.8, 0, 1.2, 0.1, 0, -0.4, 0.6, 0};
  const auto num = decompose_two_fermion(f, pt);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(num[i], PolyEvaluator(phi[i])(full), 1e-12);
  EXPECT_THROW(decompose_two_fermion(x(1) * y(1) * z(1)), NotAlternating);
  EXPECT_THROW(decompose_two_fermion(psi * x(3)), InvalidInput);
}

TEST(Decompose, OneDimensionalRoundTrip) {
  auto h = [](int k, int l, int m) { return harmonic_poly({Axis::x, k, l, m}); };
  const Poly9 e1 = x(1) + x(2) + x(3), e2 = x(1) * x(2) + x(1) * x(3) + x(2) * x(3);
  const std::array<Poly9, 6> phi{Poly9(3), e1, e2 * Rational(1, 2), Poly9(-1), e1 * e1, e2 + Poly9(1)};
  const Poly9 psi = phi[0] * h(2, 2, 2) + phi[1] * h(2, 1, 2) + phi[2] * h(2, 2, 1) + phi[3] * h(2, 1, 1) +
                    phi[4] * h(1, 2, 1) + phi[5] * h(2, 1, 0);
  EXPECT_EQ(decompose_1d_three(psi), phi);
  EXPECT_THROW(decompose_1d_three(psi * y(1)), InvalidInput);
}

// Row r of the matrix is g_E of the basis harmonics evaluated at set r.
TEST(Decompose, OneDimensionalMatrixMatchesTransforms) {
  auto h = [](int k, int l, int m) { return harmonic_poly({Axis::x, k, l, m}); };
  const std::array<Poly9, 4> basis{h(2, 1, 2), h(2, 2, 1), h(2, 1, 1), h(1, 2, 1)};
  const auto m = one_dim_matrix();
  const auto sets = one_dim_sets();
  for (int c = 0; c < 4; ++c) {
    const Poly9 ge = s3_transform(basis[c], Axis::x, S3Rep::E);
    for (int r = 0; r < 4; ++r) EXPECT_EQ(permute_axis(ge, Axis::x, sets[r]), m[r][c]) << r << "," << c;
  }
}

TEST(Decompose, OneDimensionalDeterminantIsDeltaSquared) {
  const auto m = one_dim_matrix();
  auto minor3 = [&](int skip) {
    int c[3], n = 0;
    for (int j = 0; j < 4; ++j)
      if (j != skip) c[n++] = j;
    return m[1][c[0]] * (m[2][c[1]] * m[3][c[2]] - m[2][c[2]] * m[3][c[1]]) -
           m[1][c[1]] * (m[2][c[0]] * m[3][c[2]] - m[2][c[2]] * m[3][c[0]]) +
           m[1][c[2]] * (m[2][c[0]] * m[3][c[1]] - m[2][c[1]] * m[3][c[0]]);
  };
  Poly9 det;
  for (int j = 0; j < 4; ++j) det += (j % 2 ? Rational(-1) : Rational(1)) * (m[0][j] * minor3(j));
  const Poly9 d = (x(1) - x(2)) * (x(1) - x(3)) * (x(2) - x(3));
  const Poly9 q = divide_exact(det, d * d);
  EXPECT_TRUE(q.is_constant());
  EXPECT_FALSE(q.is_zero());
}

TEST_F(Fixture, JsonOutput) {
  const auto phi = extract_bosonic_symbolic(sample().psi);
  const std::string s = to_json(phi);
  EXPECT_NE(s.find("\"symbolic\""), std::string::npos);
  EXPECT_EQ(poly_from_json(to_json(phi.phi[4])), phi.phi[4]);
}
