#include "shapedecomp/symgroup.hpp"

#include <string>

#include "shapedecomp/errors.hpp"

namespace shapedecomp {

namespace {

// Variable-set table: (y arrangement, z arrangement), 1-based as printed.
constexpr int kVariableSets[36][6] = {
    {1, 2, 3, 1, 2, 3},
    {1, 2, 3, 1, 3, 2},
    {1, 2, 3, 2, 1, 3},
    {1, 2, 3, 3, 2, 1},
    {1, 2, 3, 2, 3, 1},
    {1, 2, 3, 3, 1, 2},
    {1, 3, 2, 1, 2, 3},
    {2, 1, 3, 1, 2, 3},
    {3, 2, 1, 1, 2, 3},
    {1, 3, 2, 1, 3, 2},
    {2, 1, 3, 1, 3, 2},
    {3, 2, 1, 1, 3, 2},
    {1, 3, 2, 2, 1, 3},
    {1, 3, 2, 3, 2, 1},
    {2, 1, 3, 2, 1, 3},
    {2, 1, 3, 3, 2, 1},
    {3, 2, 1, 2, 1, 3},
    {3, 2, 1, 3, 2, 1},
    {1, 3, 2, 2, 3, 1},
    {2, 1, 3, 2, 3, 1},
    {3, 2, 1, 2, 3, 1},
    {1, 3, 2, 3, 1, 2},
    {2, 1, 3, 3, 1, 2},
    {3, 2, 1, 3, 1, 2},
    {2, 3, 1, 1, 2, 3},
    {3, 1, 2, 1, 2, 3},
    {2, 3, 1, 1, 3, 2},
    {3, 1, 2, 1, 3, 2},
    {2, 3, 1, 2, 1, 3},
    {2, 3, 1, 3, 2, 1},
    {3, 1, 2, 2, 1, 3},
    {3, 1, 2, 3, 2, 1},
    {2, 3, 1, 2, 3, 1},
    {3, 1, 2, 2, 3, 1},
    {2, 3, 1, 3, 1, 2},
    {3, 1, 2, 3, 1, 2},
};

constexpr int kChi[9][36] = {
    { 1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1},
    { 1, -1, -1, -1,  1,  1, -1, -1, -1,  1,  1,  1,  1,  1,  1,  1,  1,  1, -1, -1, -1, -1, -1, -1,  1,  1, -1, -1, -1, -1, -1, -1,  1,  1,  1,  1},
    { 1, -1, -1, -1,  1,  1,  1,  1,  1, -1, -1, -1, -1, -1, -1, -1, -1, -1,  1,  1,  1,  1,  1,  1,  1,  1, -1, -1, -1, -1, -1, -1,  1,  1,  1,  1},
    { 1,  1,  1,  1,  1,  1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1},
    { 2, -2, -2, -2,  2,  2,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0, -1, -1,  1,  1,  1,  1,  1,  1, -1, -1, -1, -1},
    { 2,  2,  2,  2,  2,  2,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1},
    { 2,  0,  0,  0, -1, -1, -2, -2, -2,  0,  0,  0,  0,  0,  0,  0,  0,  0,  1,  1,  1,  1,  1,  1,  2,  2,  0,  0,  0,  0,  0,  0, -1, -1, -1, -1},
    { 2,  0,  0,  0, -1, -1,  2,  2,  2,  0,  0,  0,  0,  0,  0,  0,  0,  0, -1, -1, -1, -1, -1, -1,  2,  2,  0,  0,  0,  0,  0,  0, -1, -1, -1, -1},
    { 4,  0,  0,  0, -2, -2,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0, -2, -2,  0,  0,  0,  0,  0,  0,  1,  1,  1,  1},
};

constexpr int kEtaBar[11][36] = {
    { 1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1},
    { 1, -1, -1, -1,  1,  1, -1, -1, -1,  1,  1,  1,  1,  1,  1,  1,  1,  1, -1, -1, -1, -1, -1, -1,  1,  1, -1, -1, -1, -1, -1, -1,  1,  1,  1,  1},
    { 1, -1, -1, -1,  1,  1,  1,  1,  1, -1, -1, -1, -1, -1, -1, -1, -1, -1,  1,  1,  1,  1,  1,  1,  1,  1, -1, -1, -1, -1, -1, -1,  1,  1,  1,  1},
    { 1,  1,  1,  1,  1,  1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1},
    { 4, -4, -4, -4,  4,  4,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0, -2, -2,  2,  2,  2,  2,  2,  2, -2, -2, -2, -2},
    { 4,  4,  4,  4,  4,  4,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0, -2, -2, -2, -2, -2, -2, -2, -2, -2, -2, -2, -2},
    { 4,  0,  0,  0, -2, -2, -4, -4, -4,  0,  0,  0,  0,  0,  0,  0,  0,  0,  2,  2,  2,  2,  2,  2,  4,  4,  0,  0,  0,  0,  0,  0, -2, -2, -2, -2},
    { 4,  0,  0,  0, -2, -2,  4,  4,  4,  0,  0,  0,  0,  0,  0,  0,  0,  0, -2, -2, -2, -2, -2, -2,  4,  4,  0,  0,  0,  0,  0,  0, -2, -2, -2, -2},
    { 4,  0,  0,  0, -2, -2,  0,  0,  0,  4, -2, -2, -2, -2,  4, -2, -2,  4,  0,  0,  0,  0,  0,  0, -2, -2,  0,  0,  0,  0,  0,  0,  4, -2, -2,  4},
    { 4,  0,  0,  0, -2, -2,  0,  0,  0, -4,  2,  2,  2,  2, -4,  2,  2, -4,  0,  0,  0,  0,  0,  0, -2, -2,  0,  0,  0,  0,  0,  0,  4, -2, -2,  4},
    { 8,  0,  0,  0, -4, -4,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0, -4, -4,  0,  0,  0,  0,  0,  0, -4,  8,  8, -4},
};

// Shape indices of each block, as tabulated.
const std::array<std::vector<int>, kNumBlocks> kBlocks{{{32},
                                                        {0},
                                                        {23},
                                                        {26},
                                                        {1, 4, 6, 11},
                                                        {22, 29, 31, 35},
                                                        {2, 5, 8, 13},
                                                        {20, 27, 30, 34},
                                                        {3, 9, 10, 16},
                                                        {17, 24, 25, 33},
                                                        {7, 12, 14, 15, 18, 19, 21, 28}}};

constexpr std::array<std::array<S3Rep, 2>, kNumChi> kChiFactors{{{S3Rep::S, S3Rep::S},
                                                                 {S3Rep::A, S3Rep::A},
                                                                 {S3Rep::S, S3Rep::A},
                                                                 {S3Rep::A, S3Rep::S},
                                                                 {S3Rep::E, S3Rep::A},
                                                                 {S3Rep::E, S3Rep::S},
                                                                 {S3Rep::A, S3Rep::E},
                                                                 {S3Rep::S, S3Rep::E},
                                                                 {S3Rep::E, S3Rep::E}}};

Perm3 perm_from_arrangement(const int* a) { return Perm3(a[0] - 1, a[1] - 1, a[2] - 1); }

const std::array<std::array<int, kGroupOrder>, kGroupOrder>& composition_table() {
  static const auto table = [] {
    std::array<std::array<int, kGroupOrder>, kGroupOrder> t{};
    const auto& g = group_elements();
    for (int a = 0; a < kGroupOrder; ++a)
      for (int b = 0; b < kGroupOrder; ++b) t[a][b] = group_index(g[a] * g[b]);
    return t;
  }();
  return table;
}

Mat2 mat(Rational a, Rational b, Rational c, Rational d) { return {{{a, b}, {c, d}}}; }

Mat2 mul(const Mat2& a, const Mat2& b) {
  Mat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return r;
}

}  // namespace

const std::array<PermPair, kGroupOrder>& group_elements() {
  static const auto elems = [] {
    std::array<PermPair, kGroupOrder> e;
    for (int j = 0; j < kGroupOrder; ++j)
      e[j] = {perm_from_arrangement(kVariableSets[j]), perm_from_arrangement(kVariableSets[j] + 3)};
    return e;
  }();
  return elems;
}

int group_index(const PermPair& p) {
  const auto& g = group_elements();
  for (int j = 0; j < kGroupOrder; ++j)
    if (g[j] == p) return j;
  return -1;
}

int compose_index(int a, int b) { return composition_table()[a][b]; }

int inverse_index(int a) { return group_index(group_elements()[a].inverse()); }

int chi(int k, int j) {
  if (k < 0 || k >= kNumChi || j < 0 || j >= kGroupOrder) throw InvalidInput("chi index out of range");
  return kChi[k][j];
}

int eta_bar(int k, int j) {
  if (k < 0 || k >= kNumBlocks || j < 0 || j >= kGroupOrder) throw InvalidInput("eta_bar index out of range");
  return kEtaBar[k][j];
}

const std::array<std::array<int, 6>, 3>& s3_characters() {
  static const std::array<std::array<int, 6>, 3> table{{{1, 1, 1, 1, 1, 1}, {1, -1, -1, -1, 1, 1}, {2, 0, 0, 0, -1, -1}}};
  return table;
}

std::array<S3Rep, 2> chi_factors(int k) { return kChiFactors.at(k); }

const std::array<std::vector<int>, kNumBlocks>& block_sets() { return kBlocks; }

const RepMatrices& rep_matrices() {
  static const RepMatrices reps = [] {
    const Rational h(1, 2), t(3, 2);
    RepMatrices r;
    r.E = {mat(1, 0, 0, 1), mat(h, h, t, -h), mat(-1, 0, 0, 1), mat(h, -h, -t, -h), mat(-h, h, -t, -h), mat(-h, -h, t, -h)};
    r.E_bar = {mat(1, 0, 0, 1), mat(h, t, h, -h), mat(-1, 0, 0, 1), mat(h, -t, -h, -h), mat(-h, t, -h, -h), mat(-h, -t, h, -h)};
    return r;
  }();
  return reps;
}

Report verify_rep_matrices() {
  Report report;
  const auto& g = Perm3::all();
  const auto& reps = rep_matrices();
  // Reading a product left to right (apply the left factor first).
  auto homomorphic = [&](const std::array<Mat2, 6>& r, bool left_first, bool swap_cycles) {
    auto at = [&](int i) -> const Mat2& {
      if (swap_cycles && i >= 4) return r[9 - i];
      return r[i];
    };
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b) {
        Perm3 c = left_first ? g[b] * g[a] : g[a] * g[b];
        if (mul(at(a), at(b)) != at(c.s3_index())) return false;
      }
    return true;
  };
  report.add("E reproduces the S3 table (left factor applied first)", homomorphic(reps.E, true, false));
  report.add("E_bar reproduces the S3 table (left factor applied first)", homomorphic(reps.E_bar, true, false));
  report.add("E_bar with 3-cycles read backwards reproduces the S3 table (right factor first)",
             homomorphic(reps.E_bar, false, true));
  for (int i = 0; i < 6; ++i) {
    const int expected = s3_characters()[2][i];
    bool ok = reps.E[i][0][0] + reps.E[i][1][1] == expected && reps.E_bar[i][0][0] + reps.E_bar[i][1][1] == expected;
    if (!ok) report.add("traces equal the E character", false, "element " + std::to_string(i));
  }
  report.add("traces equal the E character", report.all_pass());
  return report;
}

Report verify_character_identities() {
  Report report;
  const auto& s3 = s3_characters();
  const auto& g = group_elements();

  {
    std::string bad;
    for (int k = 0; k < kNumChi; ++k)
      for (int j = 0; j < kGroupOrder; ++j) {
        auto [ry, rz] = kChiFactors[k];
        int expect = s3[static_cast<int>(ry)][g[j].y.s3_index()] * s3[static_cast<int>(rz)][g[j].z.s3_index()];
        if (expect != kChi[k][j]) bad += " (" + std::to_string(k) + "," + std::to_string(j) + ")";
      }
    report.add("chi equals the outer product of S3 characters", bad.empty(), bad);
  }
  {
    std::string bad;
    for (int k = 0; k < kNumChi; ++k)
      for (int l = 0; l < kNumChi; ++l) {
        int s = 0;
        for (int j = 0; j < kGroupOrder; ++j) s += kChi[k][j] * kChi[l][j];
        if (s != (k == l ? kGroupOrder : 0)) bad += " (" + std::to_string(k) + "," + std::to_string(l) + ")";
      }
    report.add("chi row orthogonality", bad.empty(), bad);
  }
  {
    std::string bad;
    for (int j = 0; j < kGroupOrder; ++j) {
      int s = 0;
      for (int k = 0; k < kNumBlocks; ++k) s += kEtaBar[k][j];
      if (s != (j == 0 ? kGroupOrder : 0)) bad += " " + std::to_string(j);
    }
    report.add("eta_bar column sums give 36 delta_j0", bad.empty(), bad);
  }
  {
    std::string bad;
    for (int k = 0; k < kNumBlocks; ++k) {
      int s = 0;
      for (int j = 0; j < kGroupOrder; ++j) s += kEtaBar[k][j] * kEtaBar[k][j];
      if (s != kGroupOrder * static_cast<int>(kBlocks[k].size())) bad += " " + std::to_string(k);
    }
    report.add("eta_bar row square sums give 36 |I_k|", bad.empty(), bad);
  }
  {
    std::string bad;
    int count = 0;
    for (int k = 0; k < kNumBlocks; ++k)
      for (int l = 0; l < kNumBlocks; ++l)
        for (int J = 0; J < kGroupOrder; ++J) {
          int s = 0;
          for (int j = 0; j < kGroupOrder; ++j) s += kEtaBar[k][j] * kEtaBar[l][compose_index(j, J)];
          if (s != (k == l ? kGroupOrder * kEtaBar[k][J] : 0)) bad += " (" + std::to_string(k) + "," + std::to_string(l) + "," + std::to_string(J) + ")";
          ++count;
        }
    report.add("eta_bar multiplication rule over " + std::to_string(count) + " triples", bad.empty(), bad);
  }
  {
    std::string bad;
    for (int a = 0; a < kGroupOrder; ++a)
      for (int b = 0; b < kGroupOrder; ++b)
        if (compose_index(a, b) < 0) bad += " (" + std::to_string(a) + "," + std::to_string(b) + ")";
    report.add("variable sets closed under composition", bad.empty() && g[0] == PermPair{}, bad);
  }
  {
    std::array<int, kGroupOrder> seen{};
    for (int k = 0; k < kNumBlocks; ++k)
      for (int i : kBlocks[k]) ++seen[i];
    bool ok = true;
    for (int c : seen) ok = ok && c == 1;
    report.add("blocks partition the 36 shapes", ok);
  }
  return report;
}

Poly9 s3_transform(const Poly9& f, Axis axis, S3Rep rep) {
  const auto& chars = s3_characters()[static_cast<int>(rep)];
  const auto& g = Perm3::all();
  Poly9 out;
  for (int i = 0; i < 6; ++i)
    if (chars[i] != 0) out += permute_axis(f, axis, g[i]) * Rational(chars[i]);
  return out;
}

}  // namespace shapedecomp
