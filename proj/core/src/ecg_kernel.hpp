#pragma once

// Closed-form Gaussian kernels shared by the ECG matrix elements, the
// permuted overlaps and the optimizer.

#include <Eigen/Dense>

#include <array>

#include "shapedecomp/ecg.hpp"
#include "shapedecomp/perm.hpp"

namespace shapedecomp::detail {

// exp(-Σ_axes uᵀ A u) sinh(g·z) · exp(-log_scale)
struct Lobe {
  Eigen::Matrix3d A;
  Eigen::Vector3d g;
  double log_scale = 0;
};

// log of an approximate norm of the lobe, used to keep elements O(1).
double lobe_log_norm(const Eigen::Matrix3d& A, const Eigen::Vector3d& g);

// Index map π applied to a particle matrix: A'(k,m) = A(π⁻¹k, π⁻¹m).
Eigen::Matrix3d permute_matrix(const Eigen::Matrix3d& A, const Perm3& pi);
Eigen::Vector3d permute_vector(const Eigen::Vector3d& g, const Perm3& pi);

// ⟨Âa|O|Âb⟩ = 6 Σ_P sgn(P) ⟨a|O|b∘P⟩ for O = 1, T, V; throws NotNegativeDefinite.
PairElements lobe_pair(const Lobe& a, const Lobe& b);

// ∫ a(π_bra-mapped) b(π_ket-mapped) with one index map per axis.
double axis_pair_overlap(const Lobe& a, const std::array<Perm3, 3>& bra, const Lobe& b,
                         const std::array<Perm3, 3>& ket);

}  // namespace shapedecomp::detail
