#include "shapedecomp/ecg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <json.hpp>

#include "ecg_kernel.hpp"
#include "shapedecomp/errors.hpp"
#include "shapedecomp/parallel.hpp"

namespace shapedecomp {

using detail::Lobe;
using Eigen::Matrix3d;
using Eigen::Vector3d;

namespace {

constexpr std::array<std::array<int, 2>, 3> kPairs{{{0, 1}, {0, 2}, {1, 2}}};

}  // namespace

// ---------------------------------------------------------------------------
// Primitives

Matrix3d ECGPrimitive::A() const {
  Matrix3d a;
  for (int p = 0; p < 3; ++p) {
    const auto [i, j] = kPairs[p];
    a(i, j) = a(j, i) = beta[p];
  }
  for (int i = 0; i < 3; ++i) {
    double s = 0;
    for (int p = 0; p < 3; ++p)
      if (kPairs[p][0] == i || kPairs[p][1] == i) s += beta[p];
    a(i, i) = -alpha[i] - s;
  }
  return a;
}

bool ECGPrimitive::valid() const {
  Eigen::LLT<Matrix3d> llt(A());
  return llt.info() == Eigen::Success;
}

ECGPrimitive ECGPrimitive::from_matrix(const Matrix3d& A, const Vector3d& gamma) {
  ECGPrimitive p;
  for (int k = 0; k < 3; ++k) {
    const auto [i, j] = kPairs[k];
    p.beta[k] = 0.5 * (A(i, j) + A(j, i));
  }
  for (int i = 0; i < 3; ++i) {
    double s = 0;
    for (int j = 0; j < 3; ++j)
      if (j != i) s += 0.5 * (A(i, j) + A(j, i));
    p.alpha[i] = -A(i, i) - s;
    p.gamma[i] = gamma[i];
  }
  return p;
}

double ecg_value(const ECGBasis& basis, std::span<const double, 9> point) {
  double total = 0;
  for (std::size_t n = 0; n < basis.size(); ++n) {
    const Matrix3d A = basis.primitives[n].A();
    const Vector3d g = basis.primitives[n].g();
    double sum = 0;
    for (const Perm3& P : Perm3::all()) {
      double q = 0;
      for (int axis = 0; axis < 3; ++axis) {
        Vector3d u;
        for (int i = 0; i < 3; ++i) u[i] = point[3 * axis + P(i)];
        q += u.dot(A * u);
      }
      double lin = 0;
      for (int i = 0; i < 3; ++i) lin += g[i] * point[6 + P(i)];
      sum += P.sign() * std::exp(-q) * std::sinh(lin);
    }
    total += basis.coefficients[n] * sum;
  }
  return total;
}

double gaussian_moment_integral(const Eigen::MatrixXd& Q, const Eigen::VectorXd& b) {
  if (Q.rows() != Q.cols() || Q.rows() != b.size()) throw InvalidInput("dimension mismatch in Gaussian integral");
  const Eigen::MatrixXd neg = -0.5 * (Q + Q.transpose());
  Eigen::LLT<Eigen::MatrixXd> llt(neg);
  if (llt.info() != Eigen::Success) throw NotNegativeDefinite("quadratic form is not negative definite");
  double logdet = 0;
  for (int i = 0; i < neg.rows(); ++i) logdet += 2 * std::log(llt.matrixL()(i, i));
  const double d = static_cast<double>(Q.rows());
  // -¼ bᵀQ⁻¹b = ¼ bᵀ(-Q)⁻¹b
  const double quad = 0.25 * b.dot(llt.solve(b));
  return std::exp(0.5 * d * std::log(std::numbers::pi) - 0.5 * logdet + quad);
}

// ---------------------------------------------------------------------------
// Matrix elements

PairElements pair_elements(const ECGPrimitive& a, const ECGPrimitive& b) {
  if (!a.valid() || !b.valid()) throw NotNegativeDefinite("primitive quadratic form is not negative definite");
  return detail::lobe_pair({a.A(), a.g(), 0}, {b.A(), b.g(), 0});
}

MatrixElements matrix_elements(const std::vector<ECGPrimitive>& primitives) {
  const auto n = static_cast<int>(primitives.size());
  std::vector<Lobe> lobes;
  for (const auto& p : primitives) {
    if (!p.valid()) throw NotNegativeDefinite("primitive quadratic form is not negative definite");
    lobes.push_back({p.A(), p.g(), 0});
  }
  MatrixElements m{Eigen::MatrixXd(n, n), Eigen::MatrixXd(n, n), Eigen::MatrixXd(n, n)};
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) pairs.emplace_back(i, j);
  std::vector<PairElements> out(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t k) { out[k] = detail::lobe_pair(lobes[pairs[k].first], lobes[pairs[k].second]); });
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [i, j] = pairs[k];
    m.S(i, j) = m.S(j, i) = out[k].S;
    m.T(i, j) = m.T(j, i) = out[k].T;
    m.V(i, j) = m.V(j, i) = out[k].V;
  }
  return m;
}

double overlap_condition(const Eigen::MatrixXd& S) {
  const Eigen::VectorXd d = S.diagonal();
  if ((d.array() <= 0).any()) return std::numeric_limits<double>::infinity();
  const Eigen::VectorXd inv = d.array().rsqrt();
  const Eigen::MatrixXd sn = inv.asDiagonal() * S * inv.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sn, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
  if (lo <= 0) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

SecularSolution solve_secular(const Eigen::MatrixXd& H, const Eigen::MatrixXd& S, double max_condition) {
  if (S.rows() == 0 || S.rows() != H.rows()) throw InvalidInput("secular problem needs matching non-empty matrices");
  const double cond = overlap_condition(S);
  if (!(cond <= max_condition))
    throw IllConditionedOverlap("overlap condition number " + std::to_string(cond) + " exceeds threshold");
  const Eigen::VectorXd inv = S.diagonal().array().rsqrt();
  const Eigen::MatrixXd sn = inv.asDiagonal() * S * inv.asDiagonal();
  const Eigen::MatrixXd hn = inv.asDiagonal() * H * inv.asDiagonal();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(hn, sn);
  if (ges.info() != Eigen::Success) throw IllConditionedOverlap("generalized eigensolver failed");
  SecularSolution sol;
  sol.energy = ges.eigenvalues()(0);
  sol.C = inv.asDiagonal() * ges.eigenvectors().col(0);
  sol.C /= std::sqrt(sol.C.dot(S * sol.C));
  Eigen::Index k;
  sol.C.cwiseAbs().maxCoeff(&k);
  if (sol.C[k] < 0) sol.C = -sol.C;
  return sol;
}

Expectation expectation(const ECGBasis& basis) {
  const auto m = matrix_elements(basis.primitives);
  const Eigen::Map<const Eigen::VectorXd> c(basis.coefficients.data(), basis.coefficients.size());
  return {c.dot(m.S * c), c.dot(m.T * c), c.dot(m.V * c)};
}

void solve_basis(ECGBasis& basis) {
  const auto m = matrix_elements(basis.primitives);
  const auto sol = solve_secular(m.H(), m.S);
  basis.coefficients.assign(sol.C.data(), sol.C.data() + sol.C.size());
  basis.energy = sol.energy;
}

void normalize(ECGBasis& basis) {
  const auto m = matrix_elements(basis.primitives);
  Eigen::Map<Eigen::VectorXd> c(basis.coefficients.data(), basis.coefficients.size());
  const double n = c.dot(m.S * c);
  if (!(n > 0)) throw NumericalError("wave function has non-positive norm");
  c /= std::sqrt(n);
}

ECGBasis scale_coordinates(const ECGBasis& basis, double lambda) {
  ECGBasis out = basis;
  for (auto& p : out.primitives) p = ECGPrimitive::from_matrix(lambda * lambda * p.A(), lambda * p.g());
  normalize(out);
  const auto e = expectation(out);
  out.energy = e.energy();
  return out;
}

// ---------------------------------------------------------------------------
// Permuted overlaps

double doubly_permuted_overlap(const ECGBasis& basis, int j, int k) {
  const auto& g = group_elements();
  const auto& perms = Perm3::all();
  const std::size_t n = basis.size();
  std::vector<Lobe> lobes;
  for (const auto& p : basis.primitives) lobes.push_back({p.A(), p.g(), 0});
  std::vector<double> rows(n, 0.0);
  parallel_for(n, [&](std::size_t a) {
    double acc = 0;
    for (std::size_t b = 0; b < n; ++b) {
      double pair = 0;
      for (const Perm3& P : perms)
        for (const Perm3& Q : perms) {
          // Per-axis index maps of the bra and ket: π_x = P, π_y = σ_y∘P, π_z = σ_z∘P.
          const std::array<Perm3, 3> bra{P, g[j].y * P, g[j].z * P};
          const std::array<Perm3, 3> ket{Q, g[k].y * Q, g[k].z * Q};
          pair += P.sign() * Q.sign() * detail::axis_pair_overlap(lobes[a], bra, lobes[b], ket);
        }
      acc += basis.coefficients[b] * pair;
    }
    rows[a] = basis.coefficients[a] * acc;
  });
  double total = 0;
  for (double r : rows) total += r;
  return total;
}

double permuted_overlap(const ECGBasis& basis, int j) { return doubly_permuted_overlap(basis, 0, j); }

std::array<double, 36> permuted_overlaps(const ECGBasis& basis) {
  std::array<double, 36> o{};
  for (int j = 0; j < 36; ++j) o[j] = permuted_overlap(basis, j);
  return o;
}

BlockWeights block_amplitudes(const ECGBasis& basis, double tolerance) {
  const auto o = permuted_overlaps(basis);
  BlockWeights bw;
  bw.basis_size = static_cast<int>(basis.size());
  bw.energy = basis.energy;
  for (int k = 0; k < kNumBlocks; ++k) {
    double s = 0;
    for (int j = 0; j < 36; ++j) s += eta_bar(k, j) * o[j];
    s /= 36;
    if (s < -tolerance)
      throw NegativeBlockNorm("block " + std::to_string(k) + " has norm " + std::to_string(s));
    bw.w[k] = std::max(s, 0.0);
    bw.a[k] = std::sqrt(bw.w[k]);
  }
  // ⟨Ψ(σ_j v)|Ψ(σ_j' v)⟩ = O(σ_j⁻¹∘σ_j') for the point action used here.
  bw.xi_gram = Eigen::MatrixXd::Zero(kNumBlocks, kNumBlocks);
  double residual = 0;
  for (int k = 0; k < kNumBlocks; ++k)
    for (int l = 0; l < kNumBlocks; ++l) {
      if (bw.w[k] <= tolerance || bw.w[l] <= tolerance) continue;
      double s = 0;
      for (int j = 0; j < 36; ++j) {
        if (eta_bar(k, j) == 0) continue;
        for (int jp = 0; jp < 36; ++jp)
          s += eta_bar(k, j) * eta_bar(l, jp) * o[compose_index(inverse_index(j), jp)];
      }
      s /= 36.0 * 36.0 * bw.a[k] * bw.a[l];
      bw.xi_gram(k, l) = s;
      residual = std::max(residual, std::abs(s - (k == l ? 1.0 : 0.0)));
    }
  bw.orthonormality_residual = residual;
  return bw;
}

// ---------------------------------------------------------------------------
// Basis files

std::string basis_to_json(const ECGBasis& basis, int indent) {
  nlohmann::json j;
  j["format"] = "shapedecomp-ecg-basis";
  j["version"] = 1;
  j["size"] = basis.size();
  j["stage"] = basis.stage;
  j["energy"] = basis.energy;
  j["primitives"] = nlohmann::json::array();
  for (const auto& p : basis.primitives)
    j["primitives"].push_back({{"alpha", p.alpha}, {"beta", p.beta}, {"gamma", p.gamma}});
  j["coefficients"] = basis.coefficients;
  return j.dump(indent);
}

ECGBasis basis_from_json(std::string_view text) {
  ECGBasis b;
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.value("format", "") != "shapedecomp-ecg-basis") throw InvalidInput("not an ECG basis file");
    for (const auto& p : j.at("primitives")) {
      ECGPrimitive q;
      q.alpha = p.at("alpha").get<std::array<double, 3>>();
      q.beta = p.at("beta").get<std::array<double, 3>>();
      q.gamma = p.at("gamma").get<std::array<double, 3>>();
      if (!q.valid()) throw NotNegativeDefinite("primitive quadratic form is not negative definite");
      b.primitives.push_back(q);
    }
    b.coefficients = j.at("coefficients").get<std::vector<double>>();
    b.energy = j.value("energy", 0.0);
    b.stage = j.value("stage", 0);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed basis file: ") + e.what());
  }
  if (b.coefficients.size() != b.primitives.size()) throw InvalidInput("coefficient count does not match basis size");
  return b;
}

}  // namespace shapedecomp
