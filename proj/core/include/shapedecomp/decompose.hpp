#pragma once

#include <array>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "shapedecomp/harmonics.hpp"
#include "shapedecomp/poly9.hpp"
#include "shapedecomp/report.hpp"
#include "shapedecomp/shapes.hpp"
#include "shapedecomp/symgroup.hpp"

namespace shapedecomp {

// Guard on |Δ_a| for the pointwise route.
inline constexpr double kVandermondeEps = 1e-6;

// Bits of a Vandermonde denominator: Δ_x, Δ_y, Δ_z.
inline constexpr unsigned kDeltaX = 1u, kDeltaY = 2u, kDeltaZ = 4u;

template <class T>
struct BosonicVector {
  std::array<T, kNumShapes> phi{};
};

using Evaluator = std::function<double(std::span<const double, 9>)>;

// Coordinates of σ·v: evaluating p there equals evaluating permute_vars(p, σ).
template <class T>
std::array<T, 9> permute_point(std::span<const T, 9> p, const PermPair& s) {
  std::array<T, 9> out;
  for (int i = 0; i < 3; ++i) {
    out[i] = p[i];
    out[3 + i] = p[3 + s.y(i)];
    out[6 + i] = p[6 + s.z(i)];
  }
  return out;
}

// g_k(v_j) = Σ_σ χ_k(σ) Ψ(σ·v_j).
Poly9 transform_g(const Poly9& psi, int k, int j);
double transform_g(const Evaluator& psi, std::span<const double, 9> point, int k, int j);

// M_4..M_9 are 4x4, M_10 is 8x8; entries 0-based.
int m_matrix_size(int which);
const std::vector<std::vector<HarmonicExpr>>& m_matrix_formal(int which);
const std::vector<std::vector<Poly9>>& m_matrix(int which);

// Φ_shapes = prefactor / Π_{a∈mask} Δ_a · M · (g_chi(v_s) for s in sets).
// Singles carry no matrix (matrix = 0) and one shape.
struct BlockSystem {
  int chi = 0;
  int matrix = 0;
  std::vector<int> shapes;
  std::vector<int> sets;
  Rational prefactor;
  unsigned delta_mask = 0;
};

// g0..g3 singles: Φ32, Φ0, Φ23, Φ26.
const std::array<BlockSystem, 4>& single_systems();
// g4..g7 with M4..M7.
const std::array<BlockSystem, 4>& block_systems();

// Shape evaluations U[j][i] = S_{shapes[i]}(v_{sets[j]}) for which = 4..7.
std::vector<std::vector<Poly9>> forward_matrix(int which);

struct Chi8System {
  std::array<int, 16> sets{};
  // Gg row r = Σ coeff·g8(v_set), leading 1/3 included.
  std::array<std::vector<std::pair<int, Rational>>, 16> gg;
  // Shape index of each row of the block-diagonal inverse.
  std::array<int, 16> order{};
  // Diagonal blocks (M8, M9, M10); shapes are slices of order.
  std::array<BlockSystem, 3> diagonal;
};
const Chi8System& chi8_system();

// Forward matrix of the χ8 system: Ũ[r][i] = 9 Σ_s gg[r][s] S_{order[i]}(v_s).
std::vector<std::vector<Poly9>> chi8_forward_matrix();

// Forward × inverse = identity for the g4..g7 and χ8 systems, checked by exact
// evaluation at random rational points off the coincidence set.
Report verify_m_matrices(int points = 5, unsigned long seed = 1);

// Precondition: psi alternating.  Throws NotAlternating or NotDivisible.
BosonicVector<Poly9> extract_bosonic_symbolic(const Poly9& psi);

// Throws NearSingular when some |Δ_a| < eps at point.
BosonicVector<double> extract_bosonic_numeric(const Evaluator& psi, std::span<const double, 9> point,
                                              double eps = kVandermondeEps);
// Same from precomputed Ψ(σ_j·point), j = 0..35.
BosonicVector<double> extract_from_values(const std::array<double, 36>& psi_values,
                                          std::span<const double, 9> point, double eps = kVandermondeEps);
// Φ_shape alone; cheaper than the full vector for the one-character shapes.
double extract_component(const std::array<double, 36>& psi_values, std::span<const double, 9> point, int shape,
                         double eps = kVandermondeEps);
// Exact pointwise route; throws SingularPoint on a coincidence.
BosonicVector<Rational> extract_at_point(const Poly9& psi, std::span<const Rational, 9> point);

Poly9 reconstruct(const BosonicVector<Poly9>& phi);
double reconstruct(const BosonicVector<double>& phi, std::span<const double, 9> point);

// (1/36) Σ_k η̄_k(σ_j): the inversion formula written directly in Ψ(σ_j v0).
std::array<Rational, 36> inversion_weights();

// F_ij = numerator / denominator, denominator = Π_{a∈mask} Δ_a.
struct RationalEntry {
  Poly9 numerator;
  Poly9 denominator;
  unsigned delta_mask = 0;
};

struct ExtractionMatrix {
  std::array<std::array<RationalEntry, 36>, kNumShapes> F;
};

const ExtractionMatrix& extraction_matrix();

// Φ_i = Σ_j F_ij Ψ(v_j) at an exact point.
BosonicVector<Rational> apply_extraction_matrix(const ExtractionMatrix& F, std::span<const Rational, 9> point,
                                                const std::array<Rational, 36>& psi_values);

// 36 Σ_{i∈I_k} S_i F_ij == η̄_k(σ_j) for all k, j.
Report verify_eta_bar_from_extraction();

// Ψ(x1,x2,y1,y2,z1,z2) = Φ0 xyz + Φ1 x + Φ2 y + Φ3 z with x = x1 - x2 etc.
// Particle-3 variables must be absent.
std::array<Poly9, 4> decompose_two_fermion(const Poly9& psi);
// Point order (x1, x2, y1, y2, z1, z2); throws SingularPoint if |xyz| < eps.
std::array<double, 4> decompose_two_fermion(const std::function<double(std::span<const double, 6>)>& psi,
                                            std::span<const double, 6> point, double eps = kVandermondeEps);

// Ψ(x1,x2,x3) = Φ0 x222 + Φ1 x212 + Φ2 x221 + Φ3 x211 + Φ4 x121 + Φ5 x210.
std::array<Poly9, 6> decompose_1d_three(const Poly9& psi);
// The matrix taking (Φ1..Φ4) to g_E at the sets 123, 132, 213, 312 (factor 3 included).
std::array<std::array<Poly9, 4>, 4> one_dim_matrix();
// Variable arrangements 123, 132, 213, 312 as permutations of the x triplet.
std::array<Perm3, 4> one_dim_sets();

// Random polynomial symmetric in each axis triplet: rational combination of
// products of elementary symmetric polynomials, total degree <= max_degree.
Poly9 random_bosonic(std::mt19937_64& rng, int max_degree = 4);

struct RandomAlternating {
  Poly9 psi;
  std::array<Poly9, kNumShapes> p;
};
RandomAlternating random_alternating(std::mt19937_64& rng, int max_degree = 4);

std::string to_json(const BosonicVector<Poly9>& v, int indent = -1);
std::string to_json(const BosonicVector<double>& v, int indent = -1);

}  // namespace shapedecomp
