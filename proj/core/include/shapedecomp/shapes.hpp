#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "shapedecomp/harmonics.hpp"
#include "shapedecomp/poly9.hpp"
#include "shapedecomp/report.hpp"
#include "shapedecomp/symgroup.hpp"

namespace shapedecomp {

inline constexpr int kNumShapes = 36;

struct ShapeSet {
  std::array<Poly9, kNumShapes> shapes;         // expanded monomial form
  std::array<HarmonicExpr, kNumShapes> formal;  // as tabulated
  std::array<int, kNumShapes> block_of{};       // block column of the shape table
  std::array<std::vector<int>, kNumBlocks> blocks;
};

// Built once; throws TableMismatch if the block column disagrees with block_sets().
const ShapeSet& canonical_shapes();

// x222 y222 z222.
Poly9 source_shape();

// Σ_i ∂^a/∂x_i^a ∂^b/∂y_i^b ∂^c/∂z_i^c p.
Poly9 symmetrized_derivative(const Poly9& p, int a, int b, int c);

struct SpanReport {
  struct DegreeRow {
    int degree = 0;
    int generated = 0;  // distinct derivative polynomials of this degree
    int rank = 0;
    std::vector<int> shapes;
    std::vector<int> outside;  // shapes not in the span
  };
  std::vector<DegreeRow> rows;
  int max_order = 3;
  int max_depth = 3;
  bool pass() const noexcept;
};

// Iterates ∇^(a,b,c) (1 <= a+b+c, each <= max_order) up to max_depth times on
// the source shape and checks every shape lies in the span per degree.
SpanReport verify_derivative_span(int max_order = 3, int max_depth = 3);

struct QCombo {
  std::string rep;  // S, A, E, Ebar with primes
  int parity = 1;   // under x <-> y
  int divisor = 1;
  std::vector<std::pair<int, int>> terms;  // (shape index, integer coefficient)
  Poly9 poly;                              // Σ coeff S_i / divisor
};

struct QBasis {
  std::array<QCombo, kNumShapes> combos;
};

const QBasis& q_basis();

// Rows as printed in the customary table for Q7 and Q25, kept for comparison;
// both fail the orthogonality check and are replaced in q_basis().
std::array<QCombo, 2> q_basis_printed_rows();

// Row orthogonality within each degree, divisor normalization, x<->y parity,
// invariance of singlets and doublets under the axis permutation group.
Report verify_q_basis(const QBasis& q);

// Gaussian-rational polynomial re + i·im.
struct GaussPoly {
  Poly9 re, im;
  friend GaussPoly operator*(const GaussPoly& a, const GaussPoly& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend bool operator==(const GaussPoly&, const GaussPoly&) = default;
};

struct SeptipletResult {
  GaussPoly lhs, rhs;
  bool real_equal = false, imag_equal = false;
  bool holds() const noexcept { return real_equal && imag_equal; }
};

// [2S29 + S32 - i(2S31 + S26)]/3 against the product of the three
// (a_i - a_j) + i(b_i - b_j) factors.
SeptipletResult septiplet_identity();

// Closure of (S33, S34, S35) under diagonal and axis permutations.
Report verify_triplet_closure();

// All shape-table properties: alternation, rank, blocks, source shape, block
// variable dependence, derivative examples.
Report verify_shape_table();

}  // namespace shapedecomp
