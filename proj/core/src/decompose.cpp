#include "shapedecomp/decompose.hpp"

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "shapedecomp/errors.hpp"
#include "int_poly.hpp"

namespace shapedecomp {

namespace {

struct MatrixEntrySource {
  int which, row, col;
  const char* expr;
};

#include "decompose_tables.inc"

constexpr std::array<Axis, 3> kAxes{Axis::x, Axis::y, Axis::z};

// ---------------------------------------------------------------------------
// Static system data

struct MatrixStore {
  std::array<std::vector<std::vector<HarmonicExpr>>, 11> formal;
  std::array<std::vector<std::vector<Poly9>>, 11> expanded;
};

const MatrixStore& matrices() {
  static const MatrixStore store = [] {
    MatrixStore s;
    for (int w = 4; w <= 10; ++w) {
      const int n = w == 10 ? 8 : 4;
      s.formal[w].assign(n, std::vector<HarmonicExpr>(n));
      s.expanded[w].assign(n, std::vector<Poly9>(n));
    }
    std::set<std::array<int, 3>> seen;
    for (const auto& e : kMatrixEntries) {
      if (!seen.insert({e.which, e.row, e.col}).second)
        throw TableMismatch("duplicate matrix entry M" + std::to_string(e.which));
      s.formal[e.which][e.row - 1][e.col - 1] = HarmonicExpr::parse(e.expr);
      s.expanded[e.which][e.row - 1][e.col - 1] = s.formal[e.which][e.row - 1][e.col - 1].expand();
    }
    if (seen.size() != 6 * 16 + 64) throw TableMismatch("matrix table incomplete");
    return s;
  }();
  return store;
}

BlockSystem make_system(int chi, int matrix, std::vector<int> shapes, std::vector<int> sets, Rational pref,
                        unsigned mask) {
  BlockSystem b;
  b.chi = chi;
  b.matrix = matrix;
  b.shapes = std::move(shapes);
  b.sets = std::move(sets);
  b.prefactor = std::move(pref);
  b.delta_mask = mask;
  return b;
}

std::vector<std::pair<int, Rational>> parse_gg_row(const std::string& line) {
  const auto bar = line.find('|');
  if (bar == std::string::npos) throw TableMismatch("bad Gg row: " + line);
  std::string lead = line.substr(0, bar);
  lead.erase(0, lead.find_first_not_of(' '));
  lead.erase(lead.find_last_not_of(' ') + 1);
  const Rational factor = Rational(lead) / 3;
  std::map<int, Rational> acc;
  std::istringstream in(line.substr(bar + 1));
  std::string tok;
  while (in >> tok) {
    int sign = 1;
    if (tok[0] == '-') {
      sign = -1;
      tok.erase(0, 1);
    }
    long mult = 1;
    if (const auto star = tok.find('*'); star != std::string::npos) {
      mult = std::stol(tok.substr(0, star));
      tok = tok.substr(star + 1);
    }
    acc[std::stoi(tok)] += factor * (sign * mult);
  }
  std::vector<std::pair<int, Rational>> row;
  for (auto& [k, c] : acc)
    if (c != 0) row.emplace_back(k, c);
  return row;
}

unsigned delta_bit(int axis) { return 1u << axis; }

// ---------------------------------------------------------------------------
// Shared extraction core.  A backend supplies the value type, linear
// combinations, multiplication by an M entry, and the final division.

template <class B>
std::array<typename B::Out, kNumShapes> extract_core(const std::array<typename B::Value, 36>& pv, B& b) {
  using V = typename B::Value;
  auto g = [&](int k, int m) {
    V acc = b.zero();
    for (int s = 0; s < kGroupOrder; ++s)
      if (const int c = chi(k, s); c != 0) b.axpy(acc, c, pv[compose_index(m, s)]);
    return acc;
  };

  std::array<typename B::Out, kNumShapes> phi{};

  for (const auto& s : single_systems()) phi[s.shapes[0]] = b.finish(g(s.chi, 0), s.prefactor, s.delta_mask);

  auto apply = [&](const BlockSystem& sys, const std::vector<V>& gs, std::span<const int> shapes) {
    const int n = static_cast<int>(shapes.size());
    for (int r = 0; r < n; ++r) {
      V acc = b.zero();
      for (int c = 0; c < n; ++c) b.add_product(acc, sys.matrix, r, c, gs[c]);
      phi[shapes[r]] = b.finish(std::move(acc), sys.prefactor, sys.delta_mask);
    }
  };

  for (const auto& sys : block_systems()) {
    std::vector<V> gs;
    for (int s : sys.sets) gs.push_back(g(sys.chi, s));
    apply(sys, gs, sys.shapes);
  }

  const auto& c8 = chi8_system();
  std::map<int, V> g8;
  for (int s : c8.sets) g8.emplace(s, g(8, s));
  std::vector<V> rows;
  for (const auto& row : c8.gg) {
    V acc = b.zero();
    for (const auto& [s, c] : row) b.axpy(acc, c, g8.at(s));
    rows.push_back(std::move(acc));
  }
  int offset = 0;
  for (const auto& sys : c8.diagonal) {
    const int n = static_cast<int>(sys.shapes.size());
    std::vector<V> gs(rows.begin() + offset, rows.begin() + offset + n);
    apply(sys, gs, sys.shapes);
    offset += n;
  }
  return phi;
}

struct SymbolicBackend {
  using Value = Poly9;
  using Out = Poly9;
  Value zero() const { return {}; }
  void axpy(Value& acc, const Rational& c, const Value& x) const {
    if (c == 1)
      acc += x;
    else if (c == -1)
      acc -= x;
    else
      acc += x * c;
  }
  void add_product(Value& acc, int which, int r, int c, const Value& g) const {
    if (!g.is_zero()) acc += matrices().expanded[which][r][c] * g;
  }
  Value finish(Value v, const Rational& pref, unsigned mask) const {
    for (int a = 0; a < 3; ++a)
      if (mask & delta_bit(a)) v = divide_exact(v, vandermonde(kAxes[a]));
    return v * pref;
  }
};

// Same arithmetic on 128-bit integer coefficients with a shared rational scale;
// throws detail::Overflow when a coefficient leaves the fixed-width range.
struct FastSymbolicBackend {
  using Value = detail::ScaledPoly;
  using Out = Poly9;
  std::array<std::vector<std::vector<detail::ScaledPoly>>, 11> m;
  std::array<detail::IntPoly, 3> delta;

  FastSymbolicBackend() {
    for (int w = 4; w <= 10; ++w)
      for (const auto& row : matrices().expanded[w]) {
        m[w].emplace_back();
        for (const auto& e : row) m[w].back().push_back(detail::to_scaled(e));
      }
    for (int a = 0; a < 3; ++a) {
      const auto d = detail::to_scaled(vandermonde(kAxes[a]));
      if (d.scale != 1) throw detail::Overflow{};
      delta[a] = d.poly;
    }
  }
  Value zero() const { return {}; }
  void axpy(Value& acc, const Rational& c, const Value& x) const { detail::axpy(acc, c, x); }
  void add_product(Value& acc, int which, int r, int c, const Value& g) const {
    const auto& e = m[which][r][c];
    if (g.poly.empty() || e.poly.empty()) return;
    detail::axpy(acc, 1, Value{detail::multiply(e.poly, g.poly), e.scale * g.scale});
  }
  Poly9 finish(Value v, const Rational& pref, unsigned mask) const {
    for (int a = 0; a < 3; ++a)
      if (mask & delta_bit(a)) v.poly = detail::divide_exact(v.poly, delta[a]);
    v.scale *= pref;
    return detail::to_poly9(v);
  }
};

template <class T>
struct PointBackend {
  using Value = T;
  using Out = T;
  HarmonicTable<T> h;
  std::array<T, 3> delta;
  std::array<std::vector<std::vector<T>>, 11> m;

  explicit PointBackend(std::span<const T, 9> point) : h(harmonic_values(point)) {
    for (int a = 0; a < 3; ++a) {
      const T* v = point.data() + 3 * a;
      delta[a] = (v[0] - v[1]) * (v[0] - v[2]) * (v[1] - v[2]);
    }
    for (int w = 4; w <= 10; ++w) {
      const auto& f = matrices().formal[w];
      m[w].assign(f.size(), std::vector<T>(f.size()));
      for (std::size_t r = 0; r < f.size(); ++r)
        for (std::size_t c = 0; c < f.size(); ++c) m[w][r][c] = f[r][c].evaluate(h);
    }
  }
  static T scalar(const Rational& c) {
    if constexpr (std::is_same_v<T, double>)
      return c.get_d();
    else if constexpr (std::is_same_v<T, long double>)
      return static_cast<long double>(c.get_num().get_d()) / static_cast<long double>(c.get_den().get_d());
    else
      return c;
  }
  Value zero() const { return T(0); }
  void axpy(Value& acc, const Rational& c, const Value& x) const { acc += scalar(c) * x; }
  void add_product(Value& acc, int which, int r, int c, const Value& g) const { acc += m[which][r][c] * g; }
  Value finish(Value v, const Rational& pref, unsigned mask) const {
    T den = 1;
    for (int a = 0; a < 3; ++a)
      if (mask & delta_bit(a)) den *= delta[a];
    return scalar(pref) * v / den;
  }
};

struct LinearForm {
  std::array<Poly9, 36> c;
  Rational pref = 1;
  unsigned mask = 0;
};

struct LinearFormBackend {
  using Value = LinearForm;
  using Out = LinearForm;
  Value zero() const { return {}; }
  void axpy(Value& acc, const Rational& c, const Value& x) const {
    for (int j = 0; j < 36; ++j)
      if (!x.c[j].is_zero()) acc.c[j] += x.c[j] * c;
  }
  void add_product(Value& acc, int which, int r, int c, const Value& g) const {
    const Poly9& e = matrices().expanded[which][r][c];
    for (int j = 0; j < 36; ++j)
      if (!g.c[j].is_zero()) acc.c[j] += e * g.c[j];
  }
  Value finish(Value v, const Rational& pref, unsigned mask) const {
    v.pref = pref;
    v.mask = mask;
    return v;
  }
};

Poly9 delta_product(unsigned mask) {
  Poly9 d(1);
  for (int a = 0; a < 3; ++a)
    if (mask & delta_bit(a)) d = d * vandermonde(kAxes[a]);
  return d;
}

template <class T>
T shape_value(int i, const HarmonicTable<T>& h) {
  return canonical_shapes().formal[i].evaluate(h);
}

template <class T>
void check_point(std::span<const T, 9> point, double eps) {
  for (int a = 0; a < 3; ++a) {
    const T* v = point.data() + 3 * a;
    const T d01 = v[0] - v[1], d02 = v[0] - v[2], d12 = v[1] - v[2];
    if constexpr (std::is_same_v<T, double>) {
      const double m = std::min({std::abs(d01), std::abs(d02), std::abs(d12)});
      if (m < eps || std::abs(d01 * d02 * d12) < eps)
        throw NearSingular(std::string("coordinates of axis ") + axis_name(kAxes[a]) + " nearly coincide");
    } else {
      (void)eps;
      if (d01 == 0 || d02 == 0 || d12 == 0)
        throw SingularPoint(std::string("coordinates of axis ") + axis_name(kAxes[a]) + " coincide");
    }
  }
}

Poly9 var(Axis a, int i) { return Poly9::variable({a, i}); }

}  // namespace

// ---------------------------------------------------------------------------

Poly9 transform_g(const Poly9& psi, int k, int j) {
  Poly9 acc;
  for (int s = 0; s < kGroupOrder; ++s)
    if (const int c = chi(k, s); c != 0)
      acc += permute_vars(psi, group_elements()[compose_index(j, s)]) * Rational(c);
  return acc;
}

double transform_g(const Evaluator& psi, std::span<const double, 9> point, int k, int j) {
  double acc = 0;
  for (int s = 0; s < kGroupOrder; ++s)
    if (const int c = chi(k, s); c != 0) {
      const auto p = permute_point<double>(point, group_elements()[compose_index(j, s)]);
      acc += c * psi(p);
    }
  return acc;
}

int m_matrix_size(int which) {
  if (which < 4 || which > 10) throw InvalidInput("matrix index must be 4..10");
  return which == 10 ? 8 : 4;
}

const std::vector<std::vector<HarmonicExpr>>& m_matrix_formal(int which) {
  m_matrix_size(which);
  return matrices().formal[which];
}

const std::vector<std::vector<Poly9>>& m_matrix(int which) {
  m_matrix_size(which);
  return matrices().expanded[which];
}

const std::array<BlockSystem, 4>& single_systems() {
  static const std::array<BlockSystem, 4> s{
      make_system(0, 0, {32}, {0}, Rational(1, 108), kDeltaX),
      make_system(1, 0, {0}, {0}, Rational(2, 9), kDeltaX | kDeltaY | kDeltaZ),
      make_system(2, 0, {23}, {0}, Rational(1, 108), kDeltaZ),
      make_system(3, 0, {26}, {0}, Rational(1, 108), kDeltaY),
  };
  return s;
}

const std::array<BlockSystem, 4>& block_systems() {
  static const std::array<BlockSystem, 4> s{
      make_system(4, 4, {1, 4, 6, 11}, {0, 6, 7, 24}, Rational(4, 243), kDeltaX | kDeltaY | kDeltaZ),
      make_system(5, 5, {22, 29, 31, 35}, {0, 6, 7, 24}, Rational(2, 729), kDeltaX | kDeltaY),
      make_system(6, 6, {2, 5, 8, 13}, {0, 1, 2, 4}, Rational(4, 243), kDeltaX | kDeltaY | kDeltaZ),
      make_system(7, 7, {20, 27, 30, 34}, {0, 1, 2, 4}, Rational(2, 729), kDeltaX | kDeltaZ),
  };
  return s;
}

const Chi8System& chi8_system() {
  static const Chi8System sys = [] {
    Chi8System c;
    std::set<int> sets;
    for (int r = 0; r < 16; ++r) {
      c.gg[r] = parse_gg_row(kGgRows[r]);
      for (const auto& [s, coeff] : c.gg[r]) sets.insert(s);
    }
    if (sets.size() != 16) throw TableMismatch("χ8 system must use 16 variable sets");
    std::copy(sets.begin(), sets.end(), c.sets.begin());
    c.order = {3, 9, 10, 16, 17, 24, 25, 33, 7, 12, 14, 15, 18, 19, 21, 28};
    auto slice = [&](int from, int n) { return std::vector<int>(c.order.begin() + from, c.order.begin() + from + n); };
    c.diagonal = {
        make_system(8, 8, slice(0, 4), {}, Rational(8, 243), kDeltaX | kDeltaY | kDeltaZ),
        make_system(8, 9, slice(4, 4), {}, Rational(4, 243), kDeltaY | kDeltaZ),
        make_system(8, 10, slice(8, 8), {}, Rational(8, 729), kDeltaX | kDeltaY | kDeltaZ),
    };
    return c;
  }();
  return sys;
}

std::vector<std::vector<Poly9>> forward_matrix(int which) {
  if (which < 4 || which > 7) throw InvalidInput("forward matrix index must be 4..7");
  const auto& sys = block_systems()[which - 4];
  const auto& shapes = canonical_shapes().shapes;
  std::vector<std::vector<Poly9>> u(4, std::vector<Poly9>(4));
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i) u[j][i] = permute_vars(shapes[sys.shapes[i]], group_elements()[sys.sets[j]]);
  return u;
}

std::vector<std::vector<Poly9>> chi8_forward_matrix() {
  const auto& c8 = chi8_system();
  const auto& shapes = canonical_shapes().shapes;
  std::vector<std::vector<Poly9>> u(16, std::vector<Poly9>(16));
  for (int i = 0; i < 16; ++i) {
    std::map<int, Poly9> perm;
    for (int s : c8.sets) perm.emplace(s, permute_vars(shapes[c8.order[i]], group_elements()[s]));
    for (int r = 0; r < 16; ++r) {
      Poly9 acc;
      for (const auto& [s, c] : c8.gg[r]) acc += perm.at(s) * (9 * c);
      u[r][i] = std::move(acc);
    }
  }
  return u;
}

Report verify_m_matrices(int points, unsigned long seed) {
  Report rep;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> num(-40, 40), den(1, 9);
  const auto& c8 = chi8_system();
  for (int t = 0; t < points; ++t) {
    std::array<Rational, 9> pt;
    for (;;) {
      for (auto& v : pt) {
        v = Rational(num(rng), den(rng));
        v.canonicalize();
      }
      try {
        check_point<Rational>(pt, 0);
        break;
      } catch (const SingularPoint&) {
      }
    }
    PointBackend<Rational> b(pt);
    std::array<HarmonicTable<Rational>, 36> hv;
    for (int j = 0; j < 36; ++j) hv[j] = harmonic_values(std::span<const Rational, 9>(
                                      permute_point<Rational>(pt, group_elements()[j])));
    const std::string where = " at point " + std::to_string(t);

    for (const auto& s : single_systems()) {
      const Rational u = 36 * shape_value(s.shapes[0], hv[0]);
      rep.add("single g" + std::to_string(s.chi) + where, b.finish(u, s.prefactor, s.delta_mask) == 1);
    }
    for (const auto& sys : block_systems()) {
      bool ok = true;
      for (int r = 0; r < 4; ++r)
        for (int i = 0; i < 4; ++i) {
          Rational acc = 0;
          for (int c = 0; c < 4; ++c) acc += b.m[sys.matrix][r][c] * 18 * shape_value(sys.shapes[i], hv[sys.sets[c]]);
          ok = ok && b.finish(acc, sys.prefactor, sys.delta_mask) == (r == i ? 1 : 0);
        }
      rep.add("M" + std::to_string(sys.matrix) + " x forward = I" + where, ok);
    }
    // Ũ for the χ8 system, then the block-diagonal inverse.
    std::array<std::array<Rational, 16>, 16> u;
    for (int r = 0; r < 16; ++r)
      for (int i = 0; i < 16; ++i) {
        Rational acc = 0;
        for (const auto& [s, c] : c8.gg[r]) acc += 9 * c * shape_value(c8.order[i], hv[s]);
        u[r][i] = acc;
      }
    bool ok = true;
    int offset = 0;
    for (const auto& sys : c8.diagonal) {
      const int n = static_cast<int>(sys.shapes.size());
      for (int r = 0; r < n; ++r)
        for (int i = 0; i < 16; ++i) {
          Rational acc = 0;
          for (int c = 0; c < n; ++c) acc += b.m[sys.matrix][r][c] * u[offset + c][i];
          ok = ok && b.finish(acc, sys.prefactor, sys.delta_mask) == (offset + r == i ? 1 : 0);
        }
      offset += n;
    }
    rep.add("chi8 block inverse x forward = I" + where, ok);
  }
  return rep;
}

BosonicVector<Poly9> extract_bosonic_symbolic(const Poly9& psi) {
  if (!symmetry_check(psi, Symmetry::alternating)) throw NotAlternating("input is not diagonally alternating");
  std::array<Poly9, 36> pv;
  const auto& g = group_elements();
  for (int j = 0; j < 36; ++j) pv[j] = permute_vars(psi, g[j]);
  try {
    std::array<detail::ScaledPoly, 36> fast;
    for (int j = 0; j < 36; ++j) fast[j] = detail::to_scaled(pv[j]);
    FastSymbolicBackend b;
    return {extract_core(fast, b)};
  } catch (const detail::Overflow&) {
  }
  SymbolicBackend b;
  return {extract_core(pv, b)};
}

namespace {

// Near coincident coordinates the harmonic determinants and the inversion
// cancel heavily, so the arithmetic runs in extended precision.
BosonicVector<double> extended_extract(const std::array<double, 36>& psi_values, std::span<const double, 9> point) {
  std::array<long double, 9> p;
  std::copy(point.begin(), point.end(), p.begin());
  std::array<long double, 36> v;
  std::copy(psi_values.begin(), psi_values.end(), v.begin());
  PointBackend<long double> b{std::span<const long double, 9>(p)};
  const auto r = extract_core(v, b);
  BosonicVector<double> out;
  for (int i = 0; i < kNumShapes; ++i) out.phi[i] = static_cast<double>(r[i]);
  return out;
}

}  // namespace

BosonicVector<double> extract_from_values(const std::array<double, 36>& psi_values,
                                          std::span<const double, 9> point, double eps) {
  check_point<double>(point, eps);
  return extended_extract(psi_values, point);
}

double extract_component(const std::array<double, 36>& psi_values, std::span<const double, 9> point, int shape,
                         double eps) {
  if (shape < 0 || shape >= kNumShapes) throw InvalidInput("shape index must be in 0..35");
  check_point<double>(point, eps);
  for (const auto& s : single_systems()) {
    if (s.shapes[0] != shape) continue;
    long double g = 0;
    for (int j = 0; j < kGroupOrder; ++j) g += chi(s.chi, j) * static_cast<long double>(psi_values[j]);
    long double den = 1;
    for (int a = 0; a < 3; ++a) {
      if (!(s.delta_mask & delta_bit(a))) continue;
      const double* v = point.data() + 3 * a;
      den *= static_cast<long double>(v[0] - v[1]) * (v[0] - v[2]) * (v[1] - v[2]);
    }
    return static_cast<double>(PointBackend<long double>::scalar(s.prefactor) * g / den);
  }
  return extended_extract(psi_values, point).phi[shape];
}

BosonicVector<double> extract_bosonic_numeric(const Evaluator& psi, std::span<const double, 9> point,
                                              double eps) {
  check_point<double>(point, eps);
  std::array<double, 36> pv;
  const auto& g = group_elements();
  for (int j = 0; j < 36; ++j) pv[j] = psi(permute_point<double>(point, g[j]));
  return extract_from_values(pv, point, eps);
}

BosonicVector<Rational> extract_at_point(const Poly9& psi, std::span<const Rational, 9> point) {
  check_point<Rational>(point, 0);
  std::array<Rational, 36> pv;
  const auto& g = group_elements();
  for (int j = 0; j < 36; ++j)
    pv[j] = psi.evaluate(std::span<const Rational, 9>(permute_point<Rational>(point, g[j])));
  PointBackend<Rational> b(point);
  return {extract_core(pv, b)};
}

Poly9 reconstruct(const BosonicVector<Poly9>& phi) {
  const auto& shapes = canonical_shapes().shapes;
  Poly9 acc;
  for (int i = 0; i < kNumShapes; ++i)
    if (!phi.phi[i].is_zero()) acc += phi.phi[i] * shapes[i];
  return acc;
}

double reconstruct(const BosonicVector<double>& phi, std::span<const double, 9> point) {
  const auto h = harmonic_values(point);
  double acc = 0;
  for (int i = 0; i < kNumShapes; ++i) acc += phi.phi[i] * shape_value(i, h);
  return acc;
}

std::array<Rational, 36> inversion_weights() {
  std::array<Rational, 36> w;
  for (int j = 0; j < 36; ++j) {
    long s = 0;
    for (int k = 0; k < kNumBlocks; ++k) s += eta_bar(k, j);
    w[j] = Rational(s, 36);
    w[j].canonicalize();
  }
  return w;
}

const ExtractionMatrix& extraction_matrix() {
  static const ExtractionMatrix em = [] {
    std::array<LinearForm, 36> pv;
    for (int j = 0; j < 36; ++j) pv[j].c[j] = Poly9(1);
    LinearFormBackend b;
    const auto rows = extract_core(pv, b);
    ExtractionMatrix m;
    for (int i = 0; i < kNumShapes; ++i) {
      const Poly9 den = delta_product(rows[i].mask);
      for (int j = 0; j < 36; ++j) m.F[i][j] = {rows[i].c[j] * rows[i].pref, den, rows[i].mask};
    }
    return m;
  }();
  return em;
}

BosonicVector<Rational> apply_extraction_matrix(const ExtractionMatrix& F, std::span<const Rational, 9> point,
                                                const std::array<Rational, 36>& psi_values) {
  check_point<Rational>(point, 0);
  BosonicVector<Rational> out;
  for (int i = 0; i < kNumShapes; ++i) {
    Rational acc = 0;
    for (int j = 0; j < 36; ++j) {
      const auto& e = F.F[i][j];
      if (e.numerator.is_zero() || psi_values[j] == 0) continue;
      acc += e.numerator.evaluate(point) / e.denominator.evaluate(point) * psi_values[j];
    }
    out.phi[i] = acc;
  }
  return out;
}

Report verify_eta_bar_from_extraction() {
  Report rep;
  const auto& F = extraction_matrix().F;
  const auto& shapes = canonical_shapes().shapes;
  const auto& blocks = block_sets();
  const Poly9 full = delta_product(kDeltaX | kDeltaY | kDeltaZ);
  for (int k = 0; k < kNumBlocks; ++k) {
    bool ok = true;
    std::string detail;
    for (int j = 0; j < 36; ++j) {
      Poly9 num;
      for (int i : blocks[k]) {
        const auto& e = F[i][j];
        if (e.numerator.is_zero()) continue;
        num += shapes[i] * e.numerator * delta_product(~e.delta_mask & 7u);
      }
      Poly9 q;
      try {
        q = divide_exact(num * Rational(36), full);
      } catch (const NotDivisible&) {
        ok = false;
        detail = "not divisible at j=" + std::to_string(j);
        break;
      }
      if (q != Poly9(Rational(eta_bar(k, j)))) {
        ok = false;
        detail = "j=" + std::to_string(j) + " gives " + q.to_string();
        break;
      }
    }
    rep.add("eta_bar_" + std::to_string(k) + " from F", ok, detail);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Two fermions in three dimensions

std::array<Poly9, 4> decompose_two_fermion(const Poly9& psi) {
  for (Axis a : kAxes)
    if (psi.depends_on(Variable{a, 3})) throw InvalidInput("two-fermion input must not depend on particle 3");
  const Perm3 swap(1, 0, 2);
  if (full_diag_permute(psi, swap) != -psi) throw NotAlternating("input is not antisymmetric under 1 <-> 2");
  const Poly9 b = permute_axis(psi, Axis::x, swap);
  const Poly9 c = permute_axis(psi, Axis::y, swap);
  const Poly9 d = permute_axis(psi, Axis::z, swap);
  const Poly9 x = var(Axis::x, 1) - var(Axis::x, 2);
  const Poly9 y = var(Axis::y, 1) - var(Axis::y, 2);
  const Poly9 z = var(Axis::z, 1) - var(Axis::z, 2);
  const Rational q(1, 4);
  return {divide_exact(psi - b - c - d, x * y * z) * q, divide_exact(psi - b + c + d, x) * q,
          divide_exact(psi + b - c + d, y) * q, divide_exact(psi + b + c - d, z) * q};
}

std::array<double, 4> decompose_two_fermion(const std::function<double(std::span<const double, 6>)>& psi,
                                            std::span<const double, 6> point, double eps) {
  const double x = point[0] - point[1], y = point[2] - point[3], z = point[4] - point[5];
  if (std::abs(x * y * z) < eps || std::min({std::abs(x), std::abs(y), std::abs(z)}) < eps)
    throw SingularPoint("xyz vanishes at the evaluation point");
  auto swapped = [&](int axis) {
    std::array<double, 6> p;
    std::copy(point.begin(), point.end(), p.begin());
    std::swap(p[2 * axis], p[2 * axis + 1]);
    return psi(p);
  };
  std::array<double, 6> p0;
  std::copy(point.begin(), point.end(), p0.begin());
  const double a = psi(p0), b = swapped(0), c = swapped(1), d = swapped(2);
  return {(a - b - c - d) / (4 * x * y * z), (a - b + c + d) / (4 * x), (a + b - c + d) / (4 * y),
          (a + b + c - d) / (4 * z)};
}

// ---------------------------------------------------------------------------
// Three particles in one dimension

std::array<Perm3, 4> one_dim_sets() { return {Perm3(0, 1, 2), Perm3(0, 2, 1), Perm3(1, 0, 2), Perm3(2, 0, 1)}; }

std::array<std::array<Poly9, 4>, 4> one_dim_matrix() {
  auto h = [](int k, int l, int m) { return harmonic_poly({Axis::x, k, l, m}); };
  const Poly9 a = h(2, 1, 2), b = h(2, 2, 1), c = h(2, 1, 1), d = h(1, 2, 1);
  std::array<std::array<Poly9, 4>, 4> m{{
      {a, b, c, d},
      {-b, -a, -c, c + d},
      {a + b, -b, -d, -c},
      {-a - b, a, -c - d, c},
  }};
  for (auto& row : m)
    for (auto& e : row) e *= Rational(3);
  return m;
}

namespace {

Poly9 det3(const std::array<std::array<Poly9, 4>, 4>& m, int skip_r, int skip_c) {
  int rs[3], cs[3];
  for (int i = 0, n = 0; i < 4; ++i)
    if (i != skip_r) rs[n++] = i;
  for (int i = 0, n = 0; i < 4; ++i)
    if (i != skip_c) cs[n++] = i;
  auto e = [&](int r, int c) -> const Poly9& { return m[rs[r]][cs[c]]; };
  return e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0)) +
         e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0));
}

}  // namespace

std::array<Poly9, 6> decompose_1d_three(const Poly9& psi) {
  if (psi.depends_on(Axis::y) || psi.depends_on(Axis::z))
    throw InvalidInput("one-dimensional input must depend on x1, x2, x3 only");
  std::array<Poly9, 6> phi;
  phi[5] = s3_transform(psi, Axis::x, S3Rep::S) * Rational(-1, 6);
  phi[0] = divide_exact(s3_transform(psi, Axis::x, S3Rep::A), vandermonde(Axis::x)) * Rational(1, 3);

  const Poly9 ge = s3_transform(psi, Axis::x, S3Rep::E);
  std::array<Poly9, 4> g;
  const auto sets = one_dim_sets();
  for (int r = 0; r < 4; ++r) g[r] = permute_axis(ge, Axis::x, sets[r]);

  const auto m = one_dim_matrix();
  Poly9 det;
  for (int c = 0; c < 4; ++c) {
    const Poly9 cof = det3(m, 0, c);
    det += (c % 2 == 0) ? m[0][c] * cof : -(m[0][c] * cof);
  }
  if (det.is_zero()) throw TableMismatch("one-dimensional matrix is singular");
  // Φ_i = Σ_j adj(m)_ij g_j / det, adj(m)_ij = (-1)^{i+j} minor_ji.
  for (int i = 0; i < 4; ++i) {
    Poly9 acc;
    for (int j = 0; j < 4; ++j) {
      const Poly9 t = det3(m, j, i) * g[j];
      acc += ((i + j) % 2 == 0) ? t : -t;
    }
    phi[1 + i] = divide_exact(acc, det);
  }
  return phi;
}

// ---------------------------------------------------------------------------

Poly9 random_bosonic(std::mt19937_64& rng, int max_degree) {
  // e1, e2, e3 of each axis.
  static const std::array<std::pair<Poly9, int>, 9> elem = [] {
    std::array<std::pair<Poly9, int>, 9> e;
    for (int a = 0; a < 3; ++a) {
      const Poly9 u = var(kAxes[a], 1), v = var(kAxes[a], 2), w = var(kAxes[a], 3);
      e[3 * a] = {u + v + w, 1};
      e[3 * a + 1] = {u * v + u * w + v * w, 2};
      e[3 * a + 2] = {u * v * w, 3};
    }
    return e;
  }();
  std::uniform_int_distribution<int> nterms(1, 3), deg(0, max_degree), pick(0, 8), num(-9, 9), den(1, 5);
  Poly9 out;
  const int n = nterms(rng);
  for (int t = 0; t < n; ++t) {
    int budget = deg(rng);
    Poly9 term(1);
    for (int tries = 0; budget > 0 && tries < 16; ++tries) {
      const auto& [p, d] = elem[pick(rng)];
      if (d > budget) continue;
      term = term * p;
      budget -= d;
    }
    int a = 0;
    while (a == 0) a = num(rng);
    Rational c(a, den(rng));
    c.canonicalize();
    out += term * c;
  }
  return out;
}

RandomAlternating random_alternating(std::mt19937_64& rng, int max_degree) {
  RandomAlternating r;
  const auto& shapes = canonical_shapes().shapes;
  for (int i = 0; i < kNumShapes; ++i) {
    r.p[i] = random_bosonic(rng, max_degree);
    r.psi += r.p[i] * shapes[i];
  }
  return r;
}

std::string to_json(const BosonicVector<Poly9>& v, int indent) {
  nlohmann::json j;
  j["mode"] = "symbolic";
  j["phi"] = nlohmann::json::array();
  for (const auto& p : v.phi) j["phi"].push_back(nlohmann::json::parse(to_json(p)));
  return j.dump(indent);
}

std::string to_json(const BosonicVector<double>& v, int indent) {
  nlohmann::json j;
  j["mode"] = "numeric";
  j["phi"] = v.phi;
  return j.dump(indent);
}

}  // namespace shapedecomp
