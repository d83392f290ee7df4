#pragma once

// Internal fixed-width fast path for the symbolic extraction: polynomials with
// 128-bit integer coefficients and a shared rational scale.  Every operation
// checks for overflow and throws Overflow, after which callers fall back to
// the exact mpq arithmetic of Poly9.

#include <cstdint>
#include <vector>

#include "shapedecomp/poly9.hpp"

namespace shapedecomp::detail {

using i128 = __int128;

struct Overflow {};

struct IntTerm {
  std::uint64_t key;
  i128 c;
};

// Sorted by descending key, no zero coefficients.
using IntPoly = std::vector<IntTerm>;

// value = scale · poly
struct ScaledPoly {
  IntPoly poly;
  Rational scale = 1;
};

ScaledPoly to_scaled(const Poly9& p);
Poly9 to_poly9(const ScaledPoly& p);

// ka·a + kb·b
IntPoly lincomb(const IntPoly& a, i128 ka, const IntPoly& b, i128 kb);
IntPoly multiply(const IntPoly& a, const IntPoly& b);
// Exact quotient; throws NotDivisible on a nonzero remainder.
IntPoly divide_exact(const IntPoly& num, const IntPoly& den);

// acc += c·x with the scales reconciled.
void axpy(ScaledPoly& acc, const Rational& c, const ScaledPoly& x);

}  // namespace shapedecomp::detail
