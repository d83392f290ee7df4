#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shapedecomp/perm.hpp"

namespace shapedecomp {

using Rational = mpq_class;

enum class Axis : int { x = 0, y = 1, z = 2 };

char axis_name(Axis a) noexcept;

// One of the nine coordinates x1..z3; index is 1-based.
struct Variable {
  Axis axis;
  int index;

  constexpr int slot() const noexcept { return 3 * static_cast<int>(axis) + index - 1; }
  static constexpr Variable from_slot(int s) noexcept { return {static_cast<Axis>(s / 3), s % 3 + 1}; }
  std::string to_string() const;
};

using Exponents = std::array<int, 9>;

// Packed exponent vector.  Bits 54..63 hold the total degree, then six bits per
// variable with x1 most significant, so integer order on keys is graded lex and
// monomial multiplication is key addition.
class Monomial {
 public:
  static constexpr int kFieldBits = 6;
  static constexpr int kMaxExponent = (1 << kFieldBits) - 1;

  constexpr Monomial() noexcept = default;
  explicit Monomial(const Exponents& e);

  static constexpr Monomial from_key(std::uint64_t k) noexcept {
    Monomial m;
    m.key_ = k;
    return m;
  }

  constexpr std::uint64_t key() const noexcept { return key_; }
  constexpr int degree() const noexcept { return static_cast<int>(key_ >> 54); }
  constexpr int exponent(int slot) const noexcept {
    return static_cast<int>((key_ >> (kFieldBits * (8 - slot))) & kMaxExponent);
  }
  Exponents exponents() const noexcept;

  bool divides(const Monomial& other) const noexcept;

  friend Monomial operator*(const Monomial& a, const Monomial& b);
  friend Monomial operator/(const Monomial& a, const Monomial& b);  // requires b | a
  friend constexpr auto operator<=>(const Monomial&, const Monomial&) = default;

 private:
  std::uint64_t key_ = 0;
};

// Sparse polynomial over Q in x1,x2,x3,y1,y2,y3,z1,z2,z3.  Terms are kept
// sorted with the leading (graded-lex largest) monomial first and no zero
// coefficients; two equal polynomials therefore have identical term lists.
class Poly9 {
 public:
  struct Term {
    Monomial mono;
    Rational coeff;
    friend bool operator==(const Term&, const Term&) = default;
  };

  Poly9() = default;
  explicit Poly9(const Rational& c);
  explicit Poly9(long c) : Poly9(Rational(c)) {}

  static Poly9 variable(Variable v);
  static Poly9 monomial(const Exponents& e, const Rational& c = 1);
  // Sorts, merges like terms and drops zeros.
  static Poly9 from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const noexcept;
  int degree() const noexcept;  // -1 for the zero polynomial
  bool depends_on(Axis a) const noexcept;
  bool depends_on(Variable v) const noexcept;
  Rational constant_term() const;

  Poly9 operator-() const;
  Poly9& operator+=(const Poly9& o);
  Poly9& operator-=(const Poly9& o);
  Poly9& operator*=(const Poly9& o);
  Poly9& operator*=(const Rational& c);
  Poly9& operator/=(const Rational& c);

  friend Poly9 operator+(Poly9 a, const Poly9& b) { return a += b; }
  friend Poly9 operator-(Poly9 a, const Poly9& b) { return a -= b; }
  friend Poly9 operator*(const Poly9& a, const Poly9& b);
  friend Poly9 operator*(Poly9 a, const Rational& c) { return a *= c; }
  friend Poly9 operator*(const Rational& c, Poly9 a) { return a *= c; }
  friend Poly9 operator/(Poly9 a, const Rational& c) { return a /= c; }
  friend bool operator==(const Poly9&, const Poly9&) = default;

  Rational evaluate(std::span<const Rational, 9> point) const;
  double evaluate(std::span<const double, 9> point) const;

  std::string to_string() const;

 private:
  std::vector<Term> terms_;
};

Poly9 pow(const Poly9& p, int n);

Poly9 differentiate(const Poly9& p, Variable v, int order = 1);

// y_i -> y_{σy(i)}, z_i -> z_{σz(i)}; x untouched.
Poly9 permute_vars(const Poly9& p, const PermPair& perm);

// a_i -> a_{σ(i)} on one axis only.
Poly9 permute_axis(const Poly9& p, Axis axis, const Perm3& sigma);

// Relabels particle indices of all three axes by the same σ.
Poly9 full_diag_permute(const Poly9& p, const Perm3& sigma);

// Relabels the axes themselves: coordinate a_i becomes (perm(a))_i.
Poly9 permute_axes(const Poly9& p, const Perm3& axis_perm);

// Exact quotient; throws NotDivisible when a nonzero remainder appears.
Poly9 divide_exact(const Poly9& num, const Poly9& den);

enum class Symmetry { bosonic, alternating };
bool symmetry_check(const Poly9& p, Symmetry mode);

// Rational c such that p / c has coprime integer coefficients and a
// positive leading coefficient; zero for the zero polynomial.
Rational content(const Poly9& p);
Poly9 primitive_part(const Poly9& p);

std::string to_json(const Poly9& p, int indent = -1);
Poly9 poly_from_json(std::string_view text);

// Fast repeated floating-point evaluation of a fixed polynomial.  Sums are
// accumulated in long double: alternating polynomials cancel heavily near
// coincident coordinates.
class PolyEvaluator {
 public:
  explicit PolyEvaluator(const Poly9& p);
  double operator()(std::span<const double, 9> point) const;

 private:
  std::vector<long double> coeffs_;
  std::vector<std::array<std::uint8_t, 9>> exps_;
  int max_exp_ = 0;
};

}  // namespace shapedecomp
