#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "shapedecomp/decompose.hpp"
#include "shapedecomp/ecg.hpp"

namespace shapedecomp {

using Point3 = std::array<double, 3>;

// ρ(r1) = 3 ∫∫ |Ψ|² dr2 dr3 in closed form; basis must be normalized.
double one_electron_density(const ECGBasis& basis, const Point3& r1);

// ∫ρ over R³ by adaptive radial integration of fixed angular averages.
double integrated_density(const ECGBasis& basis, int polar = 12, int azimuthal = 4, double rel_tol = 1e-8);

struct MonteCarloOptions {
  long samples = 20000;
  std::uint64_t seed = 1;
  double eps = kVandermondeEps;  // coincidence guard for the extraction
  long batch = 2048;             // batches are seeded independently
};

struct Estimate {
  double value = 0;
  double error = 0;  // standard error
  long samples = 0;
  long rejected = 0;  // draws discarded by the coincidence guard
};

// D_i(r1) = ∫∫ |Φ_i|² dr2 dr3 by importance sampling from a tempered Gaussian
// envelope of |Ψ|².  Throws BudgetExhausted if the guard rejects more draws
// than it accepts within a batch.
Estimate bosonic_density(const ECGBasis& basis, int shape, const Point3& r1, const MonteCarloOptions& options = {});

// The same sampler applied to 3|Ψ|²: a cross-check of one_electron_density.
Estimate one_electron_density_mc(const ECGBasis& basis, const Point3& r1, const MonteCarloOptions& options = {});

// D_32(r1) with the (x2, x3) integral taken in polar coordinates around x1 and
// y, z parts in closed form.  S_32 = Δ_x is the only shape with this route.
double d32_quadrature(const ECGBasis& basis, const Point3& r1, double rel_tol = 1e-7);

// Ψ(σ_j·v) for j = 0..35 in group_elements() order.
std::array<double, 36> permuted_values(const ECGBasis& basis, std::span<const double, 9> point);

// "rho" or "D<i>", i = 0..35.
struct DensityKind {
  int shape = -1;  // -1 for ρ

  static DensityKind parse(std::string_view text);  // throws InvalidInput
  std::string name() const;
  bool is_rho() const { return shape < 0; }
};

struct GridAxis {
  double lo = 0, hi = 0;
  int count = 1;

  static GridAxis parse(std::string_view text);  // "lo:hi:count"
  double step() const { return count > 1 ? (hi - lo) / (count - 1) : 0.0; }
  double at(int i) const { return lo + i * step(); }
};

enum class DensityMethod { Auto, MonteCarlo, Quadrature };

struct GridOptions {
  MonteCarloOptions mc;
  DensityMethod method = DensityMethod::Auto;  // Auto: closed form for ρ, Monte Carlo otherwise
};

// Values are stored x-major: index = (i·ny + j)·nz + k.
struct DensityGrid {
  std::string kind;
  std::array<GridAxis, 3> axes;
  std::vector<double> values;
  std::vector<double> errors;  // standard errors; empty for deterministic methods
  // Free-form "meta <key> <value>" header lines; values must not contain newlines.
  std::vector<std::pair<std::string, std::string>> metadata;

  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * axes[1].count + j) * axes[2].count + k;
  }
  double at(int i, int j, int k) const { return values[index(i, j, k)]; }
};

DensityGrid density_grid(const ECGBasis& basis, const DensityKind& kind, const std::array<GridAxis, 3>& axes,
                         const GridOptions& options = {});

// Plain-text header (kind, origin, step, counts) then one value per line.
void write_grid(std::ostream& out, const DensityGrid& grid);
DensityGrid read_grid(std::istream& in);

}  // namespace shapedecomp
