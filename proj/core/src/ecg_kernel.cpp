#include "ecg_kernel.hpp"

#include <cmath>
#include <numbers>

#include "shapedecomp/errors.hpp"

namespace shapedecomp::detail {

namespace {

const double kLogPi = std::log(std::numbers::pi);

// E[1/|R|] for R ~ N(m ẑ, s² I₃).
double coulomb(double m, double s2) {
  const double s = std::sqrt(s2);
  const double am = std::abs(m);
  if (am < 1e-8 * s) return std::sqrt(2.0 / std::numbers::pi) / s * (1 - am * am / (6 * s2));
  return std::erf(am / (std::numbers::sqrt2 * s)) / am;
}

bool invert(const Eigen::Matrix3d& C, Eigen::Matrix3d& inv, double& logdet) {
  Eigen::LLT<Eigen::Matrix3d> llt(C);
  if (llt.info() != Eigen::Success) return false;
  const auto& L = llt.matrixL();
  logdet = 2 * (std::log(L(0, 0)) + std::log(L(1, 1)) + std::log(L(2, 2)));
  inv = llt.solve(Eigen::Matrix3d::Identity());
  return true;
}

}  // namespace

double lobe_log_norm(const Eigen::Matrix3d& A, const Eigen::Vector3d& g) {
  Eigen::Matrix3d inv;
  double logdet;
  if (!invert(2 * A, inv, logdet)) throw NotNegativeDefinite("primitive quadratic form is not negative definite");
  // dominant part of ∫φ²: ½ π^{9/2} det(2A)^{-3/2} exp(½ gᵀA⁻¹g)
  const double e = (2 * g).dot(inv * (2 * g)) / 4;
  return 0.5 * (4.5 * kLogPi - 1.5 * logdet + e - std::log(2.0));
}

Eigen::Matrix3d permute_matrix(const Eigen::Matrix3d& A, const Perm3& pi) {
  const Perm3 inv = pi.inverse();
  Eigen::Matrix3d out;
  for (int k = 0; k < 3; ++k)
    for (int m = 0; m < 3; ++m) out(k, m) = A(inv(k), inv(m));
  return out;
}

Eigen::Vector3d permute_vector(const Eigen::Vector3d& g, const Perm3& pi) {
  const Perm3 inv = pi.inverse();
  return {g[inv(0)], g[inv(1)], g[inv(2)]};
}

PairElements lobe_pair(const Lobe& a, const Lobe& b) {
  PairElements out;
  for (const Perm3& P : Perm3::all()) {
    const Eigen::Matrix3d Ab = permute_matrix(b.A, P);
    const Eigen::Vector3d gb = permute_vector(b.g, P);
    const Eigen::Matrix3d C = a.A + Ab;
    Eigen::Matrix3d Ci;
    double logdet;
    if (!invert(C, Ci, logdet)) throw NotNegativeDefinite("pair quadratic form is not negative definite");
    const double base = 4.5 * kLogPi - 1.5 * logdet - a.log_scale - b.log_scale;
    const double t0 = 3 * (a.A * Ci * Ab).trace();
    std::array<double, 3> s_nuc, s_pair;
    for (int i = 0; i < 3; ++i) s_nuc[i] = 0.5 * Ci(i, i);
    s_pair[0] = 0.5 * (Ci(0, 0) + Ci(1, 1) - 2 * Ci(0, 1));
    s_pair[1] = 0.5 * (Ci(0, 0) + Ci(2, 2) - 2 * Ci(0, 2));
    s_pair[2] = 0.5 * (Ci(1, 1) + Ci(2, 2) - 2 * Ci(1, 2));
    // sinh·sinh = ¼ Σ_{s,s'} s s' e^{(s g_a + s' g_b)·z}; (s,s') and (-s,-s') coincide.
    for (int sp : {1, -1}) {
      const Eigen::Vector3d bvec = a.g + sp * gb;
      const Eigen::Vector3d mu = 0.5 * Ci * bvec;
      const double ov = std::exp(base + 0.5 * bvec.dot(mu));
      const double c = 6.0 * P.sign() * sp * 0.5;
      const double kin = t0 + 0.5 * (a.g - 2 * a.A * mu).dot(sp * gb - 2 * Ab * mu);
      double pot = 0;
      for (int i = 0; i < 3; ++i) pot -= kNuclearCharge * coulomb(mu[i], s_nuc[i]);
      pot += coulomb(mu[0] - mu[1], s_pair[0]) + coulomb(mu[0] - mu[2], s_pair[1]) + coulomb(mu[1] - mu[2], s_pair[2]);
      out.S += c * ov;
      out.T += c * ov * kin;
      out.V += c * ov * pot;
    }
  }
  return out;
}

double axis_pair_overlap(const Lobe& a, const std::array<Perm3, 3>& bra, const Lobe& b,
                         const std::array<Perm3, 3>& ket) {
  double log_base = -a.log_scale - b.log_scale;
  Eigen::Matrix3d Czi;
  for (int axis = 0; axis < 3; ++axis) {
    const Eigen::Matrix3d C = permute_matrix(a.A, bra[axis]) + permute_matrix(b.A, ket[axis]);
    Eigen::Matrix3d Ci;
    double logdet;
    if (!invert(C, Ci, logdet)) throw NotNegativeDefinite("pair quadratic form is not negative definite");
    log_base += 1.5 * kLogPi - 0.5 * logdet;
    if (axis == 2) Czi = Ci;
  }
  const Eigen::Vector3d ga = permute_vector(a.g, bra[2]), gb = permute_vector(b.g, ket[2]);
  double total = 0;
  for (int sp : {1, -1}) {
    const Eigen::Vector3d bvec = ga + sp * gb;
    total += sp * 0.5 * std::exp(log_base + 0.25 * bvec.dot(Czi * bvec));
  }
  return total;
}

}  // namespace shapedecomp::detail
