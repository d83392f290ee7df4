#include "shapedecomp/poly9.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "shapedecomp/errors.hpp"

namespace shapedecomp {

namespace {

constexpr int shift_of(int slot) { return Monomial::kFieldBits * (8 - slot); }

bool key_desc(const Poly9::Term& a, const Poly9::Term& b) { return a.mono > b.mono; }

// Applies slot relabeling old -> map[old] to every term and restores order.
Poly9 relabel(const Poly9& p, const std::array<int, 9>& map) {
  std::vector<Poly9::Term> out;
  out.reserve(p.size());
  for (const auto& t : p.terms()) {
    Exponents e{};
    for (int s = 0; s < 9; ++s) e[map[s]] = t.mono.exponent(s);
    out.push_back({Monomial(e), t.coeff});
  }
  std::sort(out.begin(), out.end(), key_desc);
  return Poly9::from_terms(std::move(out));
}

}  // namespace

char axis_name(Axis a) noexcept { return "xyz"[static_cast<int>(a)]; }

std::string Variable::to_string() const { return std::string(1, axis_name(axis)) + std::to_string(index); }

Monomial::Monomial(const Exponents& e) {
  int deg = 0;
  for (int s = 0; s < 9; ++s) {
    if (e[s] < 0 || e[s] > kMaxExponent) throw InvalidInput("exponent out of range");
    key_ |= static_cast<std::uint64_t>(e[s]) << shift_of(s);
    deg += e[s];
  }
  key_ |= static_cast<std::uint64_t>(deg) << 54;
}

Exponents Monomial::exponents() const noexcept {
  Exponents e{};
  for (int s = 0; s < 9; ++s) e[s] = exponent(s);
  return e;
}

bool Monomial::divides(const Monomial& other) const noexcept {
  for (int s = 0; s < 9; ++s)
    if (exponent(s) > other.exponent(s)) return false;
  return true;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  // Cheap overflow screen; the exact per-field test only runs for large degrees.
  if (a.degree() + b.degree() > Monomial::kMaxExponent) {
    for (int s = 0; s < 9; ++s)
      if (a.exponent(s) + b.exponent(s) > Monomial::kMaxExponent) throw InvalidInput("exponent overflow");
  }
  return Monomial::from_key(a.key_ + b.key_);
}

Monomial operator/(const Monomial& a, const Monomial& b) { return Monomial::from_key(a.key_ - b.key_); }

Poly9::Poly9(const Rational& c) {
  if (sgn(c) != 0) terms_.push_back({Monomial(), c});
}

Poly9 Poly9::variable(Variable v) {
  Exponents e{};
  e[v.slot()] = 1;
  return monomial(e);
}

Poly9 Poly9::monomial(const Exponents& e, const Rational& c) {
  Poly9 p;
  if (sgn(c) != 0) p.terms_.push_back({Monomial(e), c});
  return p;
}

Poly9 Poly9::from_terms(std::vector<Term> terms) {
  if (!std::is_sorted(terms.begin(), terms.end(), key_desc)) std::stable_sort(terms.begin(), terms.end(), key_desc);
  Poly9 p;
  p.terms_.reserve(terms.size());
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
      p.terms_.back().coeff += t.coeff;
      if (sgn(p.terms_.back().coeff) == 0) p.terms_.pop_back();
    } else if (sgn(t.coeff) != 0) {
      p.terms_.push_back(std::move(t));
    }
  }
  return p;
}

bool Poly9::is_constant() const noexcept { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.degree() == 0); }

int Poly9::degree() const noexcept { return terms_.empty() ? -1 : terms_.front().mono.degree(); }

bool Poly9::depends_on(Axis a) const noexcept {
  int base = 3 * static_cast<int>(a);
  for (const auto& t : terms_)
    for (int s = base; s < base + 3; ++s)
      if (t.mono.exponent(s) != 0) return true;
  return false;
}

bool Poly9::depends_on(Variable v) const noexcept {
  for (const auto& t : terms_)
    if (t.mono.exponent(v.slot()) != 0) return true;
  return false;
}

Rational Poly9::constant_term() const {
  if (!terms_.empty() && terms_.back().mono.degree() == 0) return terms_.back().coeff;
  return 0;
}

Poly9 Poly9::operator-() const {
  Poly9 r = *this;
  for (auto& t : r.terms_) t.coeff = -t.coeff;
  return r;
}

namespace {

template <bool Subtract>
std::vector<Poly9::Term> merge_terms(const std::vector<Poly9::Term>& a, const std::vector<Poly9::Term>& b) {
  std::vector<Poly9::Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].mono > b[j].mono)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].mono > a[i].mono) {
      out.push_back({b[j].mono, Subtract ? Rational(-b[j].coeff) : b[j].coeff});
      ++j;
    } else {
      Rational c = Subtract ? Rational(a[i].coeff - b[j].coeff) : Rational(a[i].coeff + b[j].coeff);
      if (sgn(c) != 0) out.push_back({a[i].mono, std::move(c)});
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

Poly9& Poly9::operator+=(const Poly9& o) {
  if (o.terms_.empty()) return *this;
  terms_ = merge_terms<false>(terms_, o.terms_);
  return *this;
}

Poly9& Poly9::operator-=(const Poly9& o) {
  if (o.terms_.empty()) return *this;
  terms_ = merge_terms<true>(terms_, o.terms_);
  return *this;
}

Poly9 operator*(const Poly9& a, const Poly9& b) {
  if (a.is_zero() || b.is_zero()) return {};
  if (b.size() == 1 && b.terms_[0].mono.degree() == 0) return a * b.terms_[0].coeff;
  if (a.size() == 1 && a.terms_[0].mono.degree() == 0) return b * a.terms_[0].coeff;

  struct Product {
    std::uint64_t key;
    std::uint32_t i, j;
  };
  std::vector<Product> prods;
  prods.reserve(a.size() * b.size());
  for (std::uint32_t i = 0; i < a.size(); ++i)
    for (std::uint32_t j = 0; j < b.size(); ++j)
      prods.push_back({(a.terms_[i].mono * b.terms_[j].mono).key(), i, j});
  std::sort(prods.begin(), prods.end(), [](const Product& p, const Product& q) { return p.key > q.key; });

  Poly9 r;
  mpq_class acc, tmp;
  for (std::size_t k = 0; k < prods.size();) {
    const std::uint64_t key = prods[k].key;
    mpq_mul(acc.get_mpq_t(), a.terms_[prods[k].i].coeff.get_mpq_t(), b.terms_[prods[k].j].coeff.get_mpq_t());
    for (++k; k < prods.size() && prods[k].key == key; ++k) {
      mpq_mul(tmp.get_mpq_t(), a.terms_[prods[k].i].coeff.get_mpq_t(), b.terms_[prods[k].j].coeff.get_mpq_t());
      mpq_add(acc.get_mpq_t(), acc.get_mpq_t(), tmp.get_mpq_t());
    }
    if (sgn(acc) != 0) r.terms_.push_back({Monomial::from_key(key), acc});
  }
  return r;
}

Poly9& Poly9::operator*=(const Poly9& o) { return *this = *this * o; }

Poly9& Poly9::operator*=(const Rational& c) {
  if (sgn(c) == 0) {
    terms_.clear();
  } else {
    for (auto& t : terms_) t.coeff *= c;
  }
  return *this;
}

Poly9& Poly9::operator/=(const Rational& c) {
  if (sgn(c) == 0) throw InvalidInput("division of a polynomial by zero");
  for (auto& t : terms_) t.coeff /= c;
  return *this;
}

Rational Poly9::evaluate(std::span<const Rational, 9> point) const {
  int maxe = 0;
  for (const auto& t : terms_)
    for (int s = 0; s < 9; ++s) maxe = std::max(maxe, t.mono.exponent(s));
  std::vector<std::array<Rational, 9>> powers(maxe + 1);
  for (int s = 0; s < 9; ++s) {
    powers[0][s] = 1;
    for (int e = 1; e <= maxe; ++e) powers[e][s] = powers[e - 1][s] * point[s];
  }
  Rational sum = 0, term;
  for (const auto& t : terms_) {
    term = t.coeff;
    for (int s = 0; s < 9; ++s)
      if (int e = t.mono.exponent(s)) term *= powers[e][s];
    sum += term;
  }
  return sum;
}

double Poly9::evaluate(std::span<const double, 9> point) const { return PolyEvaluator(*this)(point); }

std::string Poly9::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    Rational c = t.coeff;
    if (!first) {
      os << (sgn(c) < 0 ? " - " : " + ");
      c = abs(c);
    } else if (sgn(c) < 0) {
      os << "-";
      c = abs(c);
    }
    first = false;
    bool unit = (c == 1) && t.mono.degree() > 0;
    if (!unit) os << c.get_str();
    bool need_star = !unit;
    for (int s = 0; s < 9; ++s) {
      int e = t.mono.exponent(s);
      if (e == 0) continue;
      if (need_star) os << '*';
      os << Variable::from_slot(s).to_string();
      if (e > 1) os << '^' << e;
      need_star = true;
    }
  }
  return os.str();
}

Poly9 pow(const Poly9& p, int n) {
  Poly9 r(1L), base = p;
  for (; n > 0; n >>= 1) {
    if (n & 1) r *= base;
    if (n > 1) base *= base;
  }
  return r;
}

Poly9 differentiate(const Poly9& p, Variable v, int order) {
  if (order < 0) throw InvalidInput("negative derivative order");
  if (order == 0) return p;
  const int s = v.slot();
  std::vector<Poly9::Term> out;
  for (const auto& t : p.terms()) {
    int e = t.mono.exponent(s);
    if (e < order) continue;
    Rational c = t.coeff;
    for (int k = 0; k < order; ++k) c *= e - k;
    std::uint64_t key = t.mono.key() - (static_cast<std::uint64_t>(order) << shift_of(s)) -
                        (static_cast<std::uint64_t>(order) << 54);
    out.push_back({Monomial::from_key(key), std::move(c)});
  }
  return Poly9::from_terms(std::move(out));
}

Poly9 permute_vars(const Poly9& p, const PermPair& perm) {
  if (perm.y.is_identity() && perm.z.is_identity()) return p;
  std::array<int, 9> map{};
  for (int i = 0; i < 3; ++i) {
    map[i] = i;
    map[3 + i] = 3 + perm.y(i);
    map[6 + i] = 6 + perm.z(i);
  }
  return relabel(p, map);
}

Poly9 permute_axis(const Poly9& p, Axis axis, const Perm3& sigma) {
  if (sigma.is_identity()) return p;
  std::array<int, 9> map{};
  for (int i = 0; i < 9; ++i) map[i] = i;
  const int base = 3 * static_cast<int>(axis);
  for (int i = 0; i < 3; ++i) map[base + i] = base + sigma(i);
  return relabel(p, map);
}

Poly9 full_diag_permute(const Poly9& p, const Perm3& sigma) {
  std::array<int, 9> map{};
  for (int a = 0; a < 3; ++a)
    for (int i = 0; i < 3; ++i) map[3 * a + i] = 3 * a + sigma(i);
  return relabel(p, map);
}

Poly9 permute_axes(const Poly9& p, const Perm3& axis_perm) {
  std::array<int, 9> map{};
  for (int a = 0; a < 3; ++a)
    for (int i = 0; i < 3; ++i) map[3 * a + i] = 3 * axis_perm(a) + i;
  return relabel(p, map);
}

Poly9 divide_exact(const Poly9& num, const Poly9& den) {
  if (den.is_zero()) throw InvalidInput("division by the zero polynomial");
  if (num.is_zero()) return {};
  const auto& lead = den.terms().front();
  if (den.size() == 1) {
    std::vector<Poly9::Term> out;
    out.reserve(num.size());
    for (const auto& t : num.terms()) {
      if (!lead.mono.divides(t.mono)) throw NotDivisible("monomial divisor does not divide " + num.to_string());
      out.push_back({t.mono / lead.mono, t.coeff / lead.coeff});
    }
    return Poly9::from_terms(std::move(out));
  }

  std::map<std::uint64_t, Rational, std::greater<>> rem;
  for (const auto& t : num.terms()) rem.emplace_hint(rem.end(), t.mono.key(), t.coeff);

  std::vector<Poly9::Term> quot;
  Rational q, tmp;
  while (!rem.empty()) {
    auto it = rem.begin();
    Monomial m = Monomial::from_key(it->first);
    if (!lead.mono.divides(m)) throw NotDivisible("nonzero remainder in exact division");
    Monomial qm = m / lead.mono;
    q = it->second / lead.coeff;
    rem.erase(it);
    for (std::size_t k = 1; k < den.size(); ++k) {
      const auto& dt = den.terms()[k];
      tmp = q * dt.coeff;
      auto [pos, inserted] = rem.try_emplace((qm * dt.mono).key());
      if (inserted) {
        pos->second = -tmp;
      } else {
        pos->second -= tmp;
        if (sgn(pos->second) == 0) rem.erase(pos);
      }
    }
    quot.push_back({qm, q});
  }
  return Poly9::from_terms(std::move(quot));
}

bool symmetry_check(const Poly9& p, Symmetry mode) {
  if (mode == Symmetry::alternating) {
    for (const Perm3& t : {Perm3(1, 0, 2), Perm3(0, 2, 1), Perm3(2, 1, 0)})
      if (full_diag_permute(p, t) != -p) return false;
    return true;
  }
  for (Axis a : {Axis::x, Axis::y, Axis::z})
    for (const Perm3& s : Perm3::all())
      if (permute_axis(p, a, s) != p) return false;
  return true;
}

Rational content(const Poly9& p) {
  if (p.is_zero()) return 0;
  mpz_class g = 0, l = 1;
  for (const auto& t : p.terms()) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coeff.get_num_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.coeff.get_den_mpz_t());
  }
  Rational c(g, l);
  c.canonicalize();
  if (sgn(p.terms().front().coeff) < 0) c = -c;
  return c;
}

Poly9 primitive_part(const Poly9& p) {
  if (p.is_zero()) return p;
  return p / content(p);
}

PolyEvaluator::PolyEvaluator(const Poly9& p) {
  coeffs_.reserve(p.size());
  exps_.reserve(p.size());
  for (const auto& t : p.terms()) {
    coeffs_.push_back(static_cast<long double>(t.coeff.get_num().get_d()) /
                      static_cast<long double>(t.coeff.get_den().get_d()));
    std::array<std::uint8_t, 9> e{};
    for (int s = 0; s < 9; ++s) {
      e[s] = static_cast<std::uint8_t>(t.mono.exponent(s));
      max_exp_ = std::max<int>(max_exp_, e[s]);
    }
    exps_.push_back(e);
  }
}

double PolyEvaluator::operator()(std::span<const double, 9> point) const {
  // powers[e*9+s] = point[s]^e
  std::vector<long double> powers((max_exp_ + 1) * 9);
  for (int s = 0; s < 9; ++s) {
    powers[s] = 1;
    for (int e = 1; e <= max_exp_; ++e) powers[e * 9 + s] = powers[(e - 1) * 9 + s] * point[s];
  }
  long double sum = 0;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    long double term = coeffs_[k];
    for (int s = 0; s < 9; ++s) term *= powers[exps_[k][s] * 9 + s];
    sum += term;
  }
  return static_cast<double>(sum);
}

}  // namespace shapedecomp
