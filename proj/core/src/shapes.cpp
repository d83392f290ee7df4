#include "shapedecomp/shapes.hpp"

#include <cctype>
#include <map>
#include <numeric>
#include <set>

#include "shapedecomp/errors.hpp"
#include "shapedecomp/linear_span.hpp"

namespace shapedecomp {

namespace {

struct ShapeRow {
  int block;
  const char* expr;
};

struct QRow {
  const char* rep;
  int parity;
  int divisor;
  const char* expr;
};

// Shape table: block index, then the shape as a combination of harmonic products.
constexpr ShapeRow kShapeTable[36] = {
    {1, "x222y222z222"},  // S0
    {4, "2x212y212z222 + x221y212z222 + x212y221z222+2x221y221z222"},  // S1
    {6, "2x212y222z212 + x221y222z212 + x212y222z221+2x221y222z221"},  // S2
    {8, "2x222y212z212 + x222y221z212 + x222y212z221+2x222y221z221"},  // S3
    {4, "-x121y212z222 + x211y212z222 + x121y221z222+2x211y221z222"},  // S4
    {6, "-x121y222z212 + x211y222z212 + x121y222z221+2x211y222z221"},  // S5
    {4, "-x212y121z222 + x221y121z222 + x212y211z222+2x221y211z222"},  // S6
    {10, "-x221y212z212 - x212y221z212 - x221y221z212 - x212y212z221 - x221y212z221 - x212y221z221"},  // S7
    {6, "-x212y222z121 + x221y222z121 + x212y222z211+2x221y222z211"},  // S8
    {8, "-x222y121z212 + x222y211z212 + x222y121z221+2x222y211z221"},  // S9
    {8, "-x222y212z121 + x222y221z121 + x222y212z211+2x222y221z211"},  // S10
    {4, "2x121y121z222 + x211y121z222 + x121y211z222+2x211y211z222"},  // S11
    {10, "-x121y212z212 - x211y212z212 - x211y221z212 - x211y212z221 + x121y221z221"},  // S12
    {6, "2x121y222z121 + x211y222z121 + x121y222z211+2x211y222z211"},  // S13
    {10, "-x212y121z212 - x212y211z212 - x221y211z212 + x221y121z221 - x212y211z221"},  // S14
    {10, "-x212y212z121 + x221y221z121 - x212y212z211 - x221y212z211 - x212y221z211"},  // S15
    {8, "2x222y121z121 + x222y211z121 + x222y121z211+2x222y211z211"},  // S16
    {9, "3x210y221z212-3x210y212z221"},  // S17
    {10, "-x121y121z212 + x211y211z212 - x121y121z221 - x211y121z221 - x121y211z221"},  // S18
    {10, "-x121y212z121 - x121y221z121 - x211y221z121 + x211y212z211 - x121y221z211"},  // S19
    {7, "3x221y210z212-3x212y210z221"},  // S20
    {10, "-x212y121z121 - x221y121z121 - x221y211z121 - x221y121z211 + x212y211z211"},  // S21
    {5, "3x221y212z210-3x212y221z210"},  // S22
    {2, "6x210y210z222"},  // S23
    {9, "3x210y121z212 +3x210y211z212 +3x210y121z221"},  // S24
    {9, "3x210y212z121 +3x210y221z121 +3x210y212z211"},  // S25
    {3, "6x210y222z210"},  // S26
    {7, "3x121y210z212 +3x211y210z212 +3x121y210z221"},  // S27
    {10, "-x211y121z121 - x121y211z121 - x211y211z121 - x121y121z211 - x211y121z211 - x121y211z211"},  // S28
    {5, "3x121y212z210 +3x211y212z210 +3x121y221z210"},  // S29
    {7, "3x212y210z121 +3x221y210z121 +3x212y210z211"},  // S30
    {5, "3x212y121z210 +3x221y121z210 +3x212y211z210"},  // S31
    {0, "6x222y210z210"},  // S32
    {9, "-3x210y211z121 +3x210y121z211"},  // S33
    {7, "-3x211y210z121 +3x121y210z211"},  // S34
    {5, "-3x211y121z210 +3x121y211z210"},  // S35
};

// Q-basis rows: representation, parity under x<->y, divisor, integer combination.
constexpr QRow kQTable[36] = {
    {"S", +1, 1, "S0"},  // Q0
    {"S", +1, 1, "S1+S2+S3"},  // Q1
    {"E", -1, 1, "S2-S3"},  // Q2
    {"E", +1, 1, "2S1-S2-S3"},  // Q3
    {"S", +1, 1, "S4+S5+S6+S8+S9+S10"},  // Q4
    {"A", -1, 1, "S4-S5-S6+S8+S9-S10"},  // Q5
    {"E", -1, 1, "-S4+S5+S6+2S8-S9-2S10"},  // Q6
    {"E", +1, 1, "-S4+S5-S6+S9"},  // Q7
    {"E'", -1, 1, "S4+S5-S6-S9"},  // Q8
    {"E'", +1, 1, "S4+S5+S6-2S8+S9-2S10"},  // Q9
    {"S'", +1, 1, "S7"},  // Q10
    {"S", +1, 1, "S11+S13+S16"},  // Q11
    {"E", -1, 1, "S13-S16"},  // Q12
    {"E", +1, 1, "2S11-S13-S16"},  // Q13
    {"S'", +1, 1, "S12+S14+S15"},  // Q14
    {"E'", -1, 1, "S12-S14"},  // Q15
    {"E'", +1, 1, "S12+S14-2S15"},  // Q16
    {"A", -1, 3, "S17-S20+S22"},  // Q17
    {"Ebar", -1, 3, "-S17+S20+2S22"},  // Q18
    {"Ebar", +1, 3, "S17+S20"},  // Q19
    {"S", +1, 1, "S18+S19+S21"},  // Q20
    {"E", -1, 1, "S19-S21"},  // Q21
    {"E", +1, 1, "2S18-S19-S21"},  // Q22
    {"S", +1, 3, "S24+S25+S27+S29+S30+S31"},  // Q23
    {"A", -1, 3, "S24-S25-S27+S29+S30-S31"},  // Q24
    {"E", -1, 3, "-S24-S25+S27+S30"},  // Q25
    {"E", +1, 3, "-S24-S25-S27+2S29-S30+2S31"},  // Q26
    {"E'", -1, 3, "S24-S25-S27-2S29+S30+2S31"},  // Q27
    {"E'", +1, 3, "-S24+S25-S27+S30"},  // Q28
    {"S'", +1, 1, "S28"},  // Q29
    {"S''", +1, 6, "S23+S26+S32"},  // Q30
    {"E''", -1, 6, "-S26+S32"},  // Q31
    {"E''", +1, 6, "-2S23+S26+S32"},  // Q32
    {"A", -1, 3, "S33-S34+S35"},  // Q33
    {"Ebar", -1, 3, "-S33+S34+2S35"},  // Q34
    {"Ebar", +1, 3, "S33+S34"},  // Q35
};

// Parses "2S1-S2-S3" into (index, coefficient) pairs.
std::vector<std::pair<int, int>> parse_shape_combo(std::string_view text) {
  std::vector<std::pair<int, int>> out;
  std::size_t i = 0;
  while (i < text.size()) {
    int sign = 1;
    if (text[i] == '+' || text[i] == '-') sign = text[i++] == '-' ? -1 : 1;
    int coeff = 0;
    bool has_coeff = false;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      coeff = 10 * coeff + (text[i++] - '0');
      has_coeff = true;
    }
    if (i >= text.size() || text[i] != 'S') throw InvalidInput("bad shape combination: " + std::string(text));
    ++i;
    int index = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) index = 10 * index + (text[i++] - '0');
    out.emplace_back(index, sign * (has_coeff ? coeff : 1));
  }
  return out;
}

QCombo make_combo(const QRow& row) {
  QCombo q;
  q.rep = row.rep;
  q.parity = row.parity;
  q.divisor = row.divisor;
  q.terms = parse_shape_combo(row.expr);
  const auto& s = canonical_shapes();
  for (auto [i, c] : q.terms) q.poly += s.shapes[i] * Rational(c);
  q.poly /= Rational(q.divisor);
  return q;
}

int shape_degree(int i) { return canonical_shapes().shapes[i].degree(); }

Perm3 axis_swap_xy() { return Perm3(1, 0, 2); }

}  // namespace

const ShapeSet& canonical_shapes() {
  static const ShapeSet set = [] {
    ShapeSet s;
    for (int i = 0; i < kNumShapes; ++i) {
      s.formal[i] = HarmonicExpr::parse(kShapeTable[i].expr);
      s.shapes[i] = s.formal[i].expand();
      s.block_of[i] = kShapeTable[i].block;
      s.blocks.at(kShapeTable[i].block).push_back(i);
    }
    if (s.blocks != block_sets()) throw TableMismatch("block column of the shape table disagrees with the block index sets");
    return s;
  }();
  return set;
}

Poly9 source_shape() {
  return harmonic_poly({Axis::x, 2, 2, 2}) * harmonic_poly({Axis::y, 2, 2, 2}) * harmonic_poly({Axis::z, 2, 2, 2});
}

Poly9 symmetrized_derivative(const Poly9& p, int a, int b, int c) {
  Poly9 sum;
  for (int i = 1; i <= 3; ++i) {
    Poly9 d = differentiate(p, {Axis::x, i}, a);
    d = differentiate(d, {Axis::y, i}, b);
    d = differentiate(d, {Axis::z, i}, c);
    sum += d;
  }
  return sum;
}

bool SpanReport::pass() const noexcept {
  for (const auto& r : rows)
    if (!r.outside.empty()) return false;
  return !rows.empty();
}

SpanReport verify_derivative_span(int max_order, int max_depth) {
  const auto& shapes = canonical_shapes();
  SpanReport report;
  report.max_order = max_order;
  report.max_depth = max_depth;

  std::vector<std::array<int, 3>> ops;
  for (int a = 0; a <= max_order; ++a)
    for (int b = 0; b <= max_order; ++b)
      for (int c = 0; c <= max_order; ++c)
        if (a + b + c >= 1) ops.push_back({a, b, c});

  std::set<std::string> seen;
  std::map<int, LinearSpan> spans;
  std::map<int, int> generated;
  auto record = [&](const Poly9& p) {
    if (p.is_zero()) return false;
    Poly9 q = primitive_part(p);
    if (!seen.insert(q.to_string()).second) return false;
    ++generated[q.degree()];
    spans[q.degree()].add(q);
    return true;
  };

  std::vector<Poly9> frontier{source_shape()};
  record(frontier.front());
  for (int depth = 0; depth < max_depth; ++depth) {
    std::vector<Poly9> next;
    for (const auto& p : frontier)
      for (const auto& op : ops) {
        if (op[0] + op[1] + op[2] > p.degree()) continue;
        Poly9 d = symmetrized_derivative(p, op[0], op[1], op[2]);
        if (record(d)) next.push_back(primitive_part(d));
      }
    frontier = std::move(next);
  }

  std::map<int, SpanReport::DegreeRow> rows;
  for (int i = 0; i < kNumShapes; ++i) {
    int deg = shapes.shapes[i].degree();
    auto& row = rows[deg];
    row.degree = deg;
    row.shapes.push_back(i);
    if (!spans[deg].contains(shapes.shapes[i])) row.outside.push_back(i);
  }
  for (auto& [deg, row] : rows) {
    row.generated = generated[deg];
    row.rank = spans[deg].rank();
    report.rows.push_back(row);
  }
  return report;
}

const QBasis& q_basis() {
  static const QBasis basis = [] {
    QBasis q;
    for (int i = 0; i < kNumShapes; ++i) q.combos[i] = make_combo(kQTable[i]);
    return q;
  }();
  return basis;
}

std::array<QCombo, 2> q_basis_printed_rows() {
  return {make_combo({"E", +1, 1, "3S4-3S6+3S8-3S10"}), make_combo({"E", -1, 3, "-S24-2S25+S27+S30"})};
}

Report verify_q_basis(const QBasis& q) {
  Report report;
  const auto& shapes = canonical_shapes();

  // Degree of each row, from its shapes; rows must not mix degrees.
  std::array<int, kNumShapes> deg{};
  {
    std::string bad;
    for (int r = 0; r < kNumShapes; ++r) {
      deg[r] = shape_degree(q.combos[r].terms.front().first);
      for (auto [i, c] : q.combos[r].terms)
        if (shape_degree(i) != deg[r]) bad += " Q" + std::to_string(r);
    }
    report.add("each Q row is homogeneous in degree", bad.empty(), bad);
  }
  {
    std::string bad;
    for (int r = 0; r < kNumShapes; ++r)
      for (int s = r + 1; s < kNumShapes; ++s) {
        if (deg[r] != deg[s]) continue;
        long dot = 0;
        for (auto [i, c] : q.combos[r].terms)
          for (auto [j, d] : q.combos[s].terms)
            if (i == j) dot += static_cast<long>(c) * d;
        if (dot != 0) bad += " (Q" + std::to_string(r) + ",Q" + std::to_string(s) + ")";
      }
    report.add("rows orthogonal within each degree", bad.empty(), bad);
  }
  {
    std::vector<Poly9> polys;
    for (const auto& c : q.combos) polys.push_back(c.poly);
    report.add("Q rows span all 36 shapes", polynomial_rank(polys) == kNumShapes);
  }
  {
    // Coefficients over harmonic products, after dividing, are coprime integers.
    std::string bad;
    for (int r = 0; r < kNumShapes; ++r) {
      mpz_class g = 0;
      bool integral = true;
      for (auto [i, c] : q.combos[r].terms)
        for (const auto& prod : shapes.formal[i].products()) {
          Rational v = prod.coeff * c / q.combos[r].divisor;
          if (v.get_den() != 1) integral = false;
          mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_num_mpz_t());
        }
      if (!integral || g != 1) bad += " Q" + std::to_string(r);
    }
    report.add("rows normalized over Z in harmonic products", bad.empty(), bad);
  }
  {
    std::string bad;
    for (int r = 0; r < kNumShapes; ++r)
      if (permute_axes(q.combos[r].poly, axis_swap_xy()) != q.combos[r].poly * Rational(q.combos[r].parity))
        bad += " Q" + std::to_string(r);
    report.add("x<->y parity column", bad.empty(), bad);
  }
  {
    std::string bad;
    for (int r = 0; r < kNumShapes; ++r) {
      const auto& rep = q.combos[r].rep;
      if (rep[0] != 'S' && rep[0] != 'A') continue;
      for (const Perm3& pi : Perm3::all()) {
        int sign = rep[0] == 'A' ? pi.sign() : 1;
        if (permute_axes(q.combos[r].poly, pi) != q.combos[r].poly * Rational(sign)) {
          bad += " Q" + std::to_string(r);
          break;
        }
      }
    }
    report.add("one-dimensional rows carry the S or A character", bad.empty(), bad);
  }
  {
    std::string bad;
    int pairs = 0;
    for (int r = 0; r + 1 < kNumShapes; ++r) {
      const auto& rep = q.combos[r].rep;
      if (rep[0] != 'E' || q.combos[r + 1].rep != rep) continue;
      LinearSpan span;
      span.add(q.combos[r].poly);
      span.add(q.combos[r + 1].poly);
      for (const Perm3& pi : Perm3::all())
        for (int k = 0; k < 2; ++k)
          if (!span.contains(permute_axes(q.combos[r + k].poly, pi))) bad += " (Q" + std::to_string(r + k) + ")";
      ++pairs;
      ++r;
    }
    report.add("two-dimensional pairs are invariant subspaces (" + std::to_string(pairs) + " pairs)",
               bad.empty() && pairs == 11, bad);
  }
  return report;
}

SeptipletResult septiplet_identity() {
  const auto& s = canonical_shapes().shapes;
  SeptipletResult r;
  r.lhs.re = (s[29] * Rational(2) + s[32]) / Rational(3);
  r.lhs.im = -(s[31] * Rational(2) + s[26]) / Rational(3);
  auto factor = [](int i, int j) {
    return GaussPoly{Poly9::variable({Axis::x, i}) - Poly9::variable({Axis::x, j}),
                     Poly9::variable({Axis::y, i}) - Poly9::variable({Axis::y, j})};
  };
  r.rhs = factor(1, 2) * factor(2, 3) * factor(1, 3);
  r.real_equal = r.lhs.re == r.rhs.re;
  r.imag_equal = r.lhs.im == r.rhs.im;
  return r;
}

Report verify_triplet_closure() {
  const auto& s = canonical_shapes().shapes;
  Report report;
  LinearSpan span;
  for (int i = 33; i <= 35; ++i) span.add(s[i]);
  bool diag = true, axes = true;
  for (const Perm3& pi : Perm3::all())
    for (int i = 33; i <= 35; ++i) {
      diag = diag && span.contains(full_diag_permute(s[i], pi));
      axes = axes && span.contains(permute_axes(s[i], pi));
    }
  report.add("(S33,S34,S35) closed under diagonal permutations", diag);
  report.add("(S33,S34,S35) closed under axis permutations", axes);
  return report;
}

Report verify_shape_table() {
  Report report;
  const auto& set = canonical_shapes();
  const auto& s = set.shapes;
  {
    std::string bad;
    for (int i = 0; i < kNumShapes; ++i)
      if (!symmetry_check(s[i], Symmetry::alternating)) bad += " S" + std::to_string(i);
    report.add("all shapes diagonally alternating", bad.empty(), bad);
  }
  {
    std::string bad;
    for (int i = 0; i < kNumShapes; ++i)
      for (const Perm3& pi : Perm3::all())
        if (full_diag_permute(s[i], pi) != s[i] * Rational(pi.sign())) {
          bad += " S" + std::to_string(i);
          break;
        }
    report.add("diagonal permutation acts by its sign", bad.empty(), bad);
  }
  report.add("36 shapes linearly independent", polynomial_rank(s) == kNumShapes);
  {
    std::vector<int> sizes;
    for (const auto& b : set.blocks) sizes.push_back(static_cast<int>(b.size()));
    report.add("block sizes (1,1,1,1,4,4,4,4,4,4,8)", sizes == std::vector<int>{1, 1, 1, 1, 4, 4, 4, 4, 4, 4, 8});
  }
  {
    std::set<std::array<std::int8_t, 3>> products;
    std::size_t total = 0;
    for (const auto& f : set.formal)
      for (const auto& p : f.products()) {
        products.insert(p.code);
        ++total;
      }
    report.add("each harmonic product appears in exactly one shape", products.size() == total);
  }
  Poly9 d3 = source_shape();
  report.add("S0 equals the source shape", s[0] == d3);
  report.add("source shape = Δx Δy Δz / 8",
             d3 == vandermonde(Axis::x) * vandermonde(Axis::y) * vandermonde(Axis::z) / Rational(8));
  {
    bool ok = true;
    for (int j = 0; j < kGroupOrder; ++j) {
      const auto& g = group_elements()[j];
      ok = ok && permute_vars(d3, g) == d3 * Rational(g.y.sign() * g.z.sign());
    }
    report.add("source shape picks up sign(σy)sign(σz)", ok);
  }
  {
    // Blocks 4/6/8 carry the z/y/x Vandermonde factor; 5/7/9 lack that axis.
    const std::array<std::pair<int, Axis>, 3> carriers{{{4, Axis::z}, {6, Axis::y}, {8, Axis::x}}};
    const std::array<std::pair<int, Axis>, 3> missing{{{5, Axis::z}, {7, Axis::y}, {9, Axis::x}}};
    bool ok = true;
    for (auto [k, a] : carriers)
      for (int i : set.blocks[k]) {
        try {
          divide_exact(s[i], harmonic_poly({a, 2, 2, 2}));
        } catch (const NotDivisible&) {
          ok = false;
        }
      }
    for (auto [k, a] : missing)
      for (int i : set.blocks[k]) ok = ok && !s[i].depends_on(a);
    report.add("block axis structure (Vandermonde factors / independence)", ok);
  }
  return report;
}

}  // namespace shapedecomp
