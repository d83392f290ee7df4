#include "int_poly.hpp"

#include <map>
#include <queue>

#include "shapedecomp/errors.hpp"

namespace shapedecomp::detail {

namespace {

i128 mul(i128 a, i128 b) {
  i128 r;
  if (__builtin_mul_overflow(a, b, &r)) throw Overflow{};
  return r;
}

i128 add(i128 a, i128 b) {
  i128 r;
  if (__builtin_add_overflow(a, b, &r)) throw Overflow{};
  return r;
}

i128 to_i128(const mpz_class& z) {
  if (!z.fits_slong_p()) throw Overflow{};
  return z.get_si();
}

mpz_class to_mpz(i128 v) {
  const bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  mpz_class hi(static_cast<unsigned long>(u >> 64)), lo(static_cast<unsigned long>(u & ~0ULL));
  mpz_class r = (hi << 64) + lo;
  return neg ? mpz_class(-r) : r;
}

}  // namespace

ScaledPoly to_scaled(const Poly9& p) {
  mpz_class l = 1;
  for (const auto& t : p.terms()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.coeff.get_den_mpz_t());
  ScaledPoly out;
  out.scale = Rational(1, 1) / Rational(l);
  out.poly.reserve(p.size());
  for (const auto& t : p.terms()) {
    const mpz_class n = t.coeff.get_num() * (l / t.coeff.get_den());
    out.poly.push_back({t.mono.key(), to_i128(n)});
  }
  return out;
}

Poly9 to_poly9(const ScaledPoly& p) {
  std::vector<Poly9::Term> terms;
  terms.reserve(p.poly.size());
  for (const auto& t : p.poly) {
    Rational c(to_mpz(t.c));
    terms.push_back({Monomial::from_key(t.key), c * p.scale});
  }
  return Poly9::from_terms(std::move(terms));
}

IntPoly lincomb(const IntPoly& a, i128 ka, const IntPoly& b, i128 kb) {
  IntPoly r;
  r.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].key > b[j].key)) {
      r.push_back({a[i].key, mul(a[i].c, ka)});
      ++i;
    } else if (i == a.size() || b[j].key > a[i].key) {
      r.push_back({b[j].key, mul(b[j].c, kb)});
      ++j;
    } else {
      const i128 c = add(mul(a[i].c, ka), mul(b[j].c, kb));
      if (c != 0) r.push_back({a[i].key, c});
      ++i;
      ++j;
    }
  }
  return r;
}

IntPoly multiply(const IntPoly& a, const IntPoly& b) {
  if (a.empty() || b.empty()) return {};
  const IntPoly& s = a.size() <= b.size() ? a : b;  // one sorted run per term of s
  const IntPoly& l = a.size() <= b.size() ? b : a;
  struct Head {
    std::uint64_t key;
    std::uint32_t i, j;
    bool operator<(const Head& o) const { return key < o.key; }
  };
  std::vector<Head> store;
  store.reserve(s.size());
  for (std::uint32_t i = 0; i < s.size(); ++i) store.push_back({s[i].key + l[0].key, i, 0});
  std::priority_queue<Head> heap(std::less<Head>{}, std::move(store));

  IntPoly r;
  r.reserve(l.size() * 2);
  while (!heap.empty()) {
    const std::uint64_t key = heap.top().key;
    i128 acc = 0;
    while (!heap.empty() && heap.top().key == key) {
      Head h = heap.top();
      heap.pop();
      acc = add(acc, mul(s[h.i].c, l[h.j].c));
      if (++h.j < l.size()) {
        h.key = s[h.i].key + l[h.j].key;
        heap.push(h);
      }
    }
    if (acc != 0) r.push_back({key, acc});
  }
  return r;
}

IntPoly divide_exact(const IntPoly& num, const IntPoly& den) {
  if (den.empty()) throw InvalidInput("division by the zero polynomial");
  const Monomial lead = Monomial::from_key(den.front().key);
  const i128 lc = den.front().c;
  std::map<std::uint64_t, i128, std::greater<>> rem;
  for (const auto& t : num) rem.emplace_hint(rem.end(), t.key, t.c);
  IntPoly q;
  q.reserve(num.size());
  while (!rem.empty()) {
    auto it = rem.begin();
    const Monomial m = Monomial::from_key(it->first);
    if (!lead.divides(m) || it->second % lc != 0) throw NotDivisible("nonzero remainder in exact division");
    const std::uint64_t qk = m.key() - lead.key();
    const i128 qc = it->second / lc;
    rem.erase(it);
    for (std::size_t k = 1; k < den.size(); ++k) {
      auto [pos, inserted] = rem.try_emplace(qk + den[k].key, 0);
      pos->second = add(pos->second, -mul(qc, den[k].c));
      if (pos->second == 0) rem.erase(pos);
    }
    q.push_back({qk, qc});
  }
  return q;
}

void axpy(ScaledPoly& acc, const Rational& c, const ScaledPoly& x) {
  if (x.poly.empty() || c == 0) return;
  if (acc.poly.empty()) {
    acc.poly = x.poly;
    acc.scale = x.scale * c;
    return;
  }
  // acc.s·A + x.s·c·X = (acc.s/d)(d·A + n·X) with n/d = x.s·c/acc.s.
  const Rational r = x.scale * c / acc.scale;
  const i128 n = to_i128(r.get_num()), d = to_i128(r.get_den());
  acc.poly = lincomb(acc.poly, d, x.poly, n);
  if (d != 1) acc.scale /= Rational(r.get_den());
}

}  // namespace shapedecomp::detail
