#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shapedecomp/symgroup.hpp"

namespace shapedecomp {

inline constexpr double kNuclearCharge = 3.0;
inline constexpr double kMaxOverlapCondition = 1e12;

// exp(Σ α_i |r_i|² + β_1 |r1-r2|² + β_2 |r1-r3|² + β_3 |r2-r3|²) sinh(γ·z).
// The quadratic form must be negative definite; equivalently the particle
// matrix A with exponent -Σ A_ij r_i·r_j is positive definite, where
// A_ij = β_(ij) and A_ii = -α_i - Σ_{j≠i} β_(ij).
struct ECGPrimitive {
  std::array<double, 3> alpha{};
  std::array<double, 3> beta{};  // pairs (12), (13), (23)
  std::array<double, 3> gamma{};

  Eigen::Matrix3d A() const;
  Eigen::Vector3d g() const { return {gamma[0], gamma[1], gamma[2]}; }
  bool valid() const;  // A positive definite

  static ECGPrimitive from_matrix(const Eigen::Matrix3d& A, const Eigen::Vector3d& gamma);
};

struct ECGBasis {
  std::vector<ECGPrimitive> primitives;
  std::vector<double> coefficients;
  double energy = 0;
  int stage = 0;

  std::size_t size() const noexcept { return primitives.size(); }
};

// Σ_n C_n Σ_P sgn(P) φ_n(P·r); point = (x1,x2,x3,y1,y2,y3,z1,z2,z3).
double ecg_value(const ECGBasis& basis, std::span<const double, 9> point);

// ∫ exp(uᵀQu + bᵀu) du over R^9; throws NotNegativeDefinite.
double gaussian_moment_integral(const Eigen::MatrixXd& Q, const Eigen::VectorXd& b);

// Antisymmetrized one-pair elements ⟨Âφ_a|O|Âφ_b⟩.
struct PairElements {
  double S = 0, T = 0, V = 0;
};
PairElements pair_elements(const ECGPrimitive& a, const ECGPrimitive& b);

struct MatrixElements {
  Eigen::MatrixXd S, T, V;
  Eigen::MatrixXd H() const { return T + V; }
};
MatrixElements matrix_elements(const std::vector<ECGPrimitive>& primitives);

// Condition number of D^{-1/2} S D^{-1/2}, D = diag(S).
double overlap_condition(const Eigen::MatrixXd& S);

struct SecularSolution {
  double energy = 0;
  Eigen::VectorXd C;  // Cᵀ S C = 1
};
// Lowest eigenpair of HC = ESC; throws IllConditionedOverlap above max_condition.
SecularSolution solve_secular(const Eigen::MatrixXd& H, const Eigen::MatrixXd& S,
                              double max_condition = kMaxOverlapCondition);

struct Expectation {
  double norm = 0, T = 0, V = 0;
  double energy() const { return (T + V) / norm; }
  double virial() const { return V / T; }
};
Expectation expectation(const ECGBasis& basis);

// Re-solves the secular problem, stores coefficients and energy.
void solve_basis(ECGBasis& basis);
// Scales coefficients so that ⟨Ψ|Ψ⟩ = 1.
void normalize(ECGBasis& basis);
// Ψ(λr) up to normalization: A -> λ²A, γ -> λγ.
ECGBasis scale_coordinates(const ECGBasis& basis, double lambda);

// 1, 2, 3, 4, 6, 9, 13, 19, ... (N_{J+1} = N_{J-2} + N_J).
std::vector<int> narayana_sizes(int count);

struct StageReport {
  int size = 0;
  double energy = 0;
  double virial = 0;
  long evaluations = 0;
  bool stalled = false;
};

struct OptimizeOptions {
  std::vector<int> sizes{1, 2, 3, 4, 6, 9};
  std::uint64_t seed = 7;
  int restarts = 8;           // random starts for the first stage
  int search_sweeps = 40;     // random-perturbation sweeps per stage
  int max_iterations = 3000;  // gradient polish iterations per stage
  std::function<void(const StageReport&)> progress;
};

struct OptimizeResult {
  std::vector<ECGBasis> stages;  // one per requested size
  std::vector<StageReport> reports;
  const ECGBasis& best() const { return stages.back(); }
};

// Throws InvalidInput when sizes do not follow the Narayana recursion.
OptimizeResult optimize_basis(const OptimizeOptions& options);

// ⟨Ψ(v0)|Ψ(σ_j v0)⟩ for the normalized basis.
double permuted_overlap(const ECGBasis& basis, int j);
std::array<double, 36> permuted_overlaps(const ECGBasis& basis);
// ⟨Ψ(σ_j v0)|Ψ(σ_k v0)⟩ evaluated directly with both sides permuted.
double doubly_permuted_overlap(const ECGBasis& basis, int j, int k);

struct BlockWeights {
  std::array<double, kNumBlocks> a{};
  std::array<double, kNumBlocks> w{};
  int basis_size = 0;
  double energy = 0;
  // ⟨Ξ_k|Ξ_k'⟩ from the 36 permuted overlaps; should be the identity.
  Eigen::MatrixXd xi_gram;
  double orthonormality_residual = 0;
};

// w_k = (1/36) Σ_j η̄_k(σ_j) ⟨Ψ(v0)|Ψ(σ_j v0)⟩, a_k = √w_k, so that Ψ = Σ a_k Ξ_k
// with normalized Ξ_k.  Throws NegativeBlockNorm when some w_k < -tolerance.
BlockWeights block_amplitudes(const ECGBasis& basis, double tolerance = 1e-10);

std::string basis_to_json(const ECGBasis& basis, int indent = 2);
ECGBasis basis_from_json(std::string_view text);

}  // namespace shapedecomp
