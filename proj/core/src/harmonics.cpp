#include "shapedecomp/harmonics.hpp"

#include <cctype>
#include <sstream>

#include "shapedecomp/errors.hpp"
#include "shapedecomp/linear_span.hpp"

namespace shapedecomp {

namespace {

long factorial(int n) {
  long f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// det of a 3x3 matrix over any ring supporting +, -, *.
template <class T>
T det3(const std::array<std::array<T, 3>, 3>& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

Poly9 build_harmonic(const HarmonicIndex& h) {
  const std::array<int, 3> ks{h.k, h.l, h.m};
  std::array<std::array<Poly9, 3>, 3> m;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      int e = ks[c] - r;
      if (e < 0) continue;
      Exponents ex{};
      ex[Variable{h.axis, c + 1}.slot()] = e;
      m[r][c] = Poly9::monomial(ex, Rational(1, factorial(e)));
    }
  return det3(m);
}

template <class T>
T power(const T& x, int e) {
  T r = 1;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

template <class T>
HarmonicTable<T> harmonic_values_impl(std::span<const T, 9> point) {
  HarmonicTable<T> out;
  for (int a = 0; a < 3; ++a) {
    // pw[c][e] = a_c^e / e!
    std::array<std::array<T, 3>, 3> pw;
    for (int c = 0; c < 3; ++c)
      for (int e = 0; e < 3; ++e) pw[c][e] = power(point[3 * a + c], e) / T(factorial(e));
    for (int code = 0; code < 27; ++code) {
      const std::array<int, 3> ks{code / 9, (code / 3) % 3, code % 3};
      std::array<std::array<T, 3>, 3> m;
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) m[r][c] = ks[c] - r >= 0 ? pw[c][ks[c] - r] : T(0);
      out[a][code] = det3(m);
    }
  }
  return out;
}

}  // namespace

std::string HarmonicIndex::to_string() const {
  return std::string(1, axis_name(axis)) + std::to_string(k) + std::to_string(l) + std::to_string(m);
}

const Poly9& harmonic_poly(const HarmonicIndex& h) {
  if (h.k < 0 || h.k > 2 || h.l < 0 || h.l > 2 || h.m < 0 || h.m > 2)
    throw InvalidInput("harmonic index out of range: " + h.to_string());
  static const std::array<std::array<Poly9, 27>, 3> cache = [] {
    std::array<std::array<Poly9, 27>, 3> c;
    for (int a = 0; a < 3; ++a)
      for (int code = 0; code < 27; ++code)
        c[a][code] = build_harmonic({static_cast<Axis>(a), code / 9, (code / 3) % 3, code % 3});
    return c;
  }();
  return cache[static_cast<int>(h.axis)][h.code()];
}

const Poly9& vandermonde(Axis axis) {
  static const std::array<Poly9, 3> cache = [] {
    std::array<Poly9, 3> c;
    for (int a = 0; a < 3; ++a) {
      auto v = [a](int i) { return Poly9::variable({static_cast<Axis>(a), i}); };
      c[a] = (v(1) - v(2)) * (v(1) - v(3)) * (v(2) - v(3));
    }
    return c;
  }();
  return cache[static_cast<int>(axis)];
}

bool SyzygyReport::all_zero() const noexcept {
  for (const auto& e : entries)
    if (!e.residual.is_zero()) return false;
  return true;
}

void SyzygyReport::require() const {
  for (const auto& e : entries)
    if (!e.residual.is_zero())
      throw SyzygyViolation(e.name + " on axis " + axis_name(e.axis) + ": residual " + e.residual.to_string());
}

SyzygyReport check_syzygies() {
  SyzygyReport report;
  for (Axis a : {Axis::x, Axis::y, Axis::z}) {
    auto h = [a](int k, int l, int m) -> const Poly9& { return harmonic_poly({a, k, l, m}); };
    report.entries.push_back({"x112+x121+x211", a, h(1, 1, 2) + h(1, 2, 1) + h(2, 1, 1)});
    report.entries.push_back({"x122+x212+x221", a, h(1, 2, 2) + h(2, 1, 2) + h(2, 2, 1)});
    report.entries.push_back({"x121x212+x211x212+x121x221-3x222", a,
                              h(1, 2, 1) * h(2, 1, 2) + h(2, 1, 1) * h(2, 1, 2) + h(1, 2, 1) * h(2, 2, 1) -
                                  Rational(3) * h(2, 2, 2)});
  }
  return report;
}

std::vector<long> degree_dimensions(int n) {
  if (n < 1) throw InvalidInput("degree_dimensions requires N >= 1");
  std::vector<long> c{1};
  for (int k = 2; k <= n; ++k) {
    // multiply by 1 + q + ... + q^{k-1}
    std::vector<long> next(c.size() + k - 1, 0);
    for (std::size_t i = 0; i < c.size(); ++i)
      for (int j = 0; j < k; ++j) next[i + j] += c[i];
    c = std::move(next);
  }
  return c;
}

std::array<Poly9, 6> independent_harmonics(Axis axis) {
  std::array<Poly9, 6> out;
  for (int i = 0; i < 6; ++i) {
    const auto& t = kHarmonicBasis[i];
    out[i] = harmonic_poly({axis, t[0], t[1], t[2]});
  }
  return out;
}

std::array<Rational, 6> rewrite_in_basis(const HarmonicIndex& h) {
  LinearSpan span;
  for (const auto& p : independent_harmonics(h.axis))
    if (!span.add(p)) throw IdentityError("harmonic basis is linearly dependent");
  auto coords = span.solve(harmonic_poly(h));
  if (!coords) throw IdentityError(h.to_string() + " lies outside the harmonic basis span");
  std::array<Rational, 6> out;
  std::copy(coords->begin(), coords->end(), out.begin());
  return out;
}

int polynomial_rank(std::span<const Poly9> polys) {
  LinearSpan span;
  for (const auto& p : polys) span.add(p);
  return span.rank();
}

HarmonicTable<double> harmonic_values(std::span<const double, 9> point) { return harmonic_values_impl(point); }

HarmonicTable<Rational> harmonic_values(std::span<const Rational, 9> point) { return harmonic_values_impl(point); }

HarmonicTable<long double> harmonic_values(std::span<const long double, 9> point) {
  return harmonic_values_impl(point);
}

HarmonicExpr HarmonicExpr::parse(std::string_view text) {
  HarmonicExpr expr;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == '.')) ++i;
  };
  auto fail = [&](const char* why) {
    throw InvalidInput(std::string("harmonic expression '") + std::string(text) + "': " + why);
  };
  skip_ws();
  while (i < text.size()) {
    int sign = 1;
    if (text[i] == '+' || text[i] == '-') {
      sign = text[i] == '-' ? -1 : 1;
      ++i;
      skip_ws();
    } else if (!expr.products_.empty()) {
      fail("missing operator");
    }
    Rational coeff = 1;
    std::size_t start = i;
    while (i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '/')) ++i;
    if (i > start) {
      coeff = Rational(std::string(text.substr(start, i - start)));
      coeff.canonicalize();
    }
    while (i < text.size() && text[i] == '*') ++i;
    Product prod;
    prod.coeff = sign * coeff;
    while (i < text.size() && (text[i] == 'x' || text[i] == 'y' || text[i] == 'z')) {
      int a = text[i] - 'x';
      if (i + 3 >= text.size()) fail("truncated index");
      int code = 0;
      for (int d = 1; d <= 3; ++d) {
        char ch = text[i + d];
        if (ch < '0' || ch > '2') fail("bad harmonic index");
        code = 3 * code + (ch - '0');
      }
      if (prod.code[a] != -1) fail("repeated axis in product");
      prod.code[a] = static_cast<std::int8_t>(code);
      i += 4;
    }
    if (i == start && prod.code == std::array<std::int8_t, 3>{-1, -1, -1}) fail("empty term");
    expr.products_.push_back(std::move(prod));
    skip_ws();
  }
  return expr;
}

Poly9 HarmonicExpr::expand() const {
  Poly9 sum;
  for (const auto& p : products_) {
    Poly9 term(p.coeff);
    for (int a = 0; a < 3; ++a)
      if (p.code[a] >= 0) term *= harmonic_poly({static_cast<Axis>(a), p.code[a] / 9, (p.code[a] / 3) % 3, p.code[a] % 3});
    sum += term;
  }
  return sum;
}

double HarmonicExpr::evaluate(const HarmonicTable<double>& values) const {
  double sum = 0.0;
  for (const auto& p : products_) {
    double term = p.coeff.get_d();
    for (int a = 0; a < 3; ++a)
      if (p.code[a] >= 0) term *= values[a][p.code[a]];
    sum += term;
  }
  return sum;
}

long double HarmonicExpr::evaluate(const HarmonicTable<long double>& values) const {
  long double sum = 0;
  for (const auto& p : products_) {
    long double term =
        static_cast<long double>(p.coeff.get_num().get_d()) / static_cast<long double>(p.coeff.get_den().get_d());
    for (int a = 0; a < 3; ++a)
      if (p.code[a] >= 0) term *= values[a][p.code[a]];
    sum += term;
  }
  return sum;
}

Rational HarmonicExpr::evaluate(const HarmonicTable<Rational>& values) const {
  Rational sum = 0;
  for (const auto& p : products_) {
    Rational term = p.coeff;
    for (int a = 0; a < 3; ++a)
      if (p.code[a] >= 0) term *= values[a][p.code[a]];
    sum += term;
  }
  return sum;
}

std::string HarmonicExpr::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& p : products_) {
    Rational c = p.coeff;
    if (sgn(c) < 0) {
      os << (first ? "-" : " - ");
      c = -c;
    } else if (!first) {
      os << " + ";
    }
    first = false;
    if (c != 1) os << c.get_str();
    for (int a = 0; a < 3; ++a)
      if (p.code[a] >= 0)
        os << HarmonicIndex{static_cast<Axis>(a), p.code[a] / 9, (p.code[a] / 3) % 3, p.code[a] % 3}.to_string();
  }
  return first ? "0" : os.str();
}

}  // namespace shapedecomp
