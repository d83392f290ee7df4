#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shapedecomp/poly9.hpp"

namespace shapedecomp {

// x_{klm} on one axis triplet, 0 <= k,l,m <= 2.
struct HarmonicIndex {
  Axis axis = Axis::x;
  int k = 2, l = 2, m = 2;

  constexpr int code() const noexcept { return 9 * k + 3 * l + m; }
  std::string to_string() const;  // e.g. "x212"
};

// The 3x3 determinant with row r, column c holding a_c^{k_c - r} / (k_c - r)!,
// zero where the exponent is negative.  Vanishing determinants give the zero
// polynomial.  Results are cached.
const Poly9& harmonic_poly(const HarmonicIndex& h);

// (a1-a2)(a1-a3)(a2-a3) = 2 x_{222}.
const Poly9& vandermonde(Axis axis);

struct SyzygyReport {
  struct Entry {
    std::string name;
    Axis axis;
    Poly9 residual;
  };
  std::vector<Entry> entries;

  bool all_zero() const noexcept;
  void require() const;  // throws SyzygyViolation
};

SyzygyReport check_syzygies();

// Coefficients of the q-factorial [N]_q!.
std::vector<long> degree_dimensions(int n);

// Basis order of independent_harmonics: 222, 212, 221, 211, 121, 210.
inline constexpr std::array<std::array<int, 3>, 6> kHarmonicBasis{
    {{2, 2, 2}, {2, 1, 2}, {2, 2, 1}, {2, 1, 1}, {1, 2, 1}, {2, 1, 0}}};

std::array<Poly9, 6> independent_harmonics(Axis axis);

// Coordinates of x_{klm} in the six-element basis; always integers.
std::array<Rational, 6> rewrite_in_basis(const HarmonicIndex& h);

// Exact rank of a list of polynomials viewed as coefficient vectors.
int polynomial_rank(std::span<const Poly9> polys);

// Values of all 27 x_{klm} per axis at a point, indexed [axis][code].
template <class T>
using HarmonicTable = std::array<std::array<T, 27>, 3>;

HarmonicTable<double> harmonic_values(std::span<const double, 9> point);
HarmonicTable<long double> harmonic_values(std::span<const long double, 9> point);
HarmonicTable<Rational> harmonic_values(std::span<const Rational, 9> point);

// A sum of rational multiples of products carrying at most one harmonic
// polynomial per axis, e.g. "2x212y212z222 - x121y211".  This is the notation
// of the shape table and of the inversion matrices.
class HarmonicExpr {
 public:
  struct Product {
    Rational coeff;
    std::array<std::int8_t, 3> code{-1, -1, -1};  // -1: axis absent
  };

  HarmonicExpr() = default;
  static HarmonicExpr parse(std::string_view text);

  const std::vector<Product>& products() const noexcept { return products_; }
  Poly9 expand() const;
  double evaluate(const HarmonicTable<double>& values) const;
  long double evaluate(const HarmonicTable<long double>& values) const;
  Rational evaluate(const HarmonicTable<Rational>& values) const;
  std::string to_string() const;

 private:
  std::vector<Product> products_;
};

}  // namespace shapedecomp
