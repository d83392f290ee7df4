#pragma once

#include <array>
#include <vector>

#include "shapedecomp/perm.hpp"
#include "shapedecomp/poly9.hpp"
#include "shapedecomp/report.hpp"

namespace shapedecomp {

inline constexpr int kGroupOrder = 36;
inline constexpr int kNumChi = 9;
inline constexpr int kNumBlocks = 11;

// The 36 elements of S3×S3 in the fixed order of the variable-set table
// (v0 = identity, v1 = z-swap(2,3), ...).
const std::array<PermPair, kGroupOrder>& group_elements();

int group_index(const PermPair& p);  // -1 if absent (cannot happen for valid pairs)

// Index of σ_a∘σ_b (σ_b applied first).
int compose_index(int a, int b);
int inverse_index(int a);

int chi(int k, int j);      // product characters, k in 0..8
int eta_bar(int k, int j);  // composite block characters, k in 0..10

enum class S3Rep { S = 0, A = 1, E = 2 };

// Rows S, A, E over e, (23), (12), (13), (123), (132).
const std::array<std::array<int, 6>, 3>& s3_characters();

// (y-representation, z-representation) of χ_k.
std::array<S3Rep, 2> chi_factors(int k);

// Shape indices per block I_0..I_10.
const std::array<std::vector<int>, kNumBlocks>& block_sets();

using Mat2 = std::array<std::array<Rational, 2>, 2>;

// Two-dimensional representation matrices, listed over the six elements in
// s3_characters() order.  E acts on the column (x-y, x+y-2z) from the left.
struct RepMatrices {
  std::array<Mat2, 6> E;
  std::array<Mat2, 6> E_bar;
};
const RepMatrices& rep_matrices();

Report verify_rep_matrices();
Report verify_character_identities();

// g_R(f) = Σ_σ χ_R(σ) f(σ-permuted variables of one axis).
Poly9 s3_transform(const Poly9& f, Axis axis, S3Rep rep);

}  // namespace shapedecomp
