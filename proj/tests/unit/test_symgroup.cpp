#include <gtest/gtest.h>

#include <set>

#include "shapedecomp/symgroup.hpp"
#include "test_support.hpp"

using namespace shapedecomp;
using namespace testing_support;

namespace {

// Characters from first principles: trivial, sign, and (fixed points - 1).
int s3_char(S3Rep r, const Perm3& p) {
  switch (r) {
    case S3Rep::S:
      return 1;
    case S3Rep::A:
      return p.sign();
    case S3Rep::E:
      return (p(0) == 0) + (p(1) == 1) + (p(2) == 2) - 1;
  }
  return 0;
}

}  // namespace

TEST(SymGroup, ElementsAreDistinctAndStartAtIdentity) {
  const auto& g = group_elements();
  EXPECT_TRUE(g[0].y.is_identity() && g[0].z.is_identity());
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& e : g) seen.insert({e.y.to_string(), e.z.to_string()});
  EXPECT_EQ(seen.size(), 36u);
  for (int j = 0; j < kGroupOrder; ++j) EXPECT_EQ(group_index(g[j]), j);
}

TEST(SymGroup, ComposeAndInverseMatchPermutationProduct) {
  const auto& g = group_elements();
  for (int a = 0; a < kGroupOrder; ++a) {
    for (int b = 0; b < kGroupOrder; ++b) EXPECT_EQ(g[compose_index(a, b)], g[a] * g[b]);
    EXPECT_EQ(g[inverse_index(a)], g[a].inverse());
  }
}

TEST(SymGroup, S3CharacterTable) {
  for (const Perm3& p : Perm3::all())
    for (S3Rep r : {S3Rep::S, S3Rep::A, S3Rep::E})
      EXPECT_EQ(s3_characters()[static_cast<int>(r)][p.s3_index()], s3_char(r, p)) << p.to_string();
}

TEST(SymGroup, ProductCharactersAreOuterProducts) {
  std::set<std::pair<int, int>> factors;
  for (int k = 0; k < kNumChi; ++k) {
    const auto f = chi_factors(k);
    factors.insert({static_cast<int>(f[0]), static_cast<int>(f[1])});
    for (int j = 0; j < kGroupOrder; ++j) {
      const auto& e = group_elements()[j];
      EXPECT_EQ(chi(k, j), s3_char(f[0], e.y) * s3_char(f[1], e.z)) << "k=" << k << " j=" << j;
    }
  }
  EXPECT_EQ(factors.size(), 9u);
  EXPECT_TRUE(chi(0, 5) == 1 && chi(0, 35) == 1);
}

TEST(SymGroup, ProductCharactersAreOrthogonal) {
  for (int k = 0; k < kNumChi; ++k)
    for (int l = 0; l < kNumChi; ++l) {
      int s = 0;
      for (int j = 0; j < kGroupOrder; ++j) s += chi(k, j) * chi(l, j);
      EXPECT_EQ(s, k == l ? 36 : 0);
    }
}

// (1/36) Σ_a η̄_k(a) η̄_l(a⁻¹b) = δ_kl η̄_k(b): the block projectors are
// orthogonal idempotents.
TEST(SymGroup, BlockCharactersMultiply) {
  for (int k = 0; k < kNumBlocks; ++k)
    for (int l = 0; l < kNumBlocks; ++l)
      for (int b = 0; b < kGroupOrder; ++b) {
        int s = 0;
        for (int a = 0; a < kGroupOrder; ++a) s += eta_bar(k, a) * eta_bar(l, compose_index(inverse_index(a), b));
        EXPECT_EQ(s, k == l ? 36 * eta_bar(k, b) : 0) << k << " " << l << " " << b;
      }
}

TEST(SymGroup, BlockSetsPartitionShapes) {
  std::set<int> all;
  std::size_t total = 0;
  for (const auto& b : block_sets()) {
    total += b.size();
    all.insert(b.begin(), b.end());
  }
  EXPECT_EQ(total, 36u);
  EXPECT_EQ(all.size(), 36u);
}

TEST(SymGroup, IdentityReports) {
  for (const auto& c : verify_character_identities().checks) EXPECT_TRUE(c.pass) << c.name << " " << c.detail;
  for (const auto& c : verify_rep_matrices().checks) EXPECT_TRUE(c.pass) << c.name << " " << c.detail;
}

TEST(SymGroup, RepMatrixTracesAreCharacters) {
  const auto& m = rep_matrices();
  for (int s = 0; s < 6; ++s) {
    EXPECT_EQ(m.E[s][0][0] + m.E[s][1][1], Rational(s3_characters()[2][s]));
    EXPECT_EQ(m.E_bar[s][0][0] + m.E_bar[s][1][1], Rational(s3_characters()[2][s]));
  }
}

TEST(SymGroup, S3Transforms) {
  EXPECT_EQ(s3_transform(x(1), Axis::x, S3Rep::S), Rational(2) * (x(1) + x(2) + x(3)));
  EXPECT_EQ(s3_transform(x(1), Axis::x, S3Rep::E), Rational(2) * x(1) - x(2) - x(3));
  const Poly9 delta = (x(1) - x(2)) * (x(1) - x(3)) * (x(2) - x(3));
  const Poly9 a = s3_transform(pow(x(1), 2) * x(2), Axis::x, S3Rep::A);
  EXPECT_TRUE(a == delta || a == -delta);
  EXPECT_TRUE(s3_transform(x(1) + x(2) + x(3), Axis::x, S3Rep::A).is_zero());
  EXPECT_EQ(s3_transform(y(2), Axis::x, S3Rep::S), Rational(6) * y(2));
}
