#include "shapedecomp/density.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <istream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "ecg_kernel.hpp"
#include "shapedecomp/errors.hpp"
#include "shapedecomp/parallel.hpp"
#include "shapedecomp/symgroup.hpp"

namespace shapedecomp {

using Eigen::Matrix2d;
using Eigen::Matrix3d;
using Eigen::Vector2d;
using Eigen::Vector3d;

namespace {

const double kLogPi = std::log(std::numbers::pi);
const double kLog2Pi = std::log(2 * std::numbers::pi);

// Proposal exponent = kTemper × (Gaussian envelope of |φ|², with sinh bounded
// by its two exponentials).  Values below 1 fatten the tails; on converged
// bases that only raised the weight variance.
constexpr double kTemper = 1.0;

// Shape with the closed-form y/z factors and the polar x integral.
constexpr int kCollinearXShape = 32;
constexpr double kCollinearXPrefactor = 1.0 / 108.0;

const std::array<Perm3, 6>& perms() { return Perm3::all(); }

// mul[a][b] = index of perms()[a] ∘ perms()[b]
const std::array<std::array<int, 6>, 6>& perm_products() {
  static const auto table = [] {
    std::array<std::array<int, 6>, 6> t{};
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b) t[a][b] = (perms()[a] * perms()[b]).s3_index();
    return t;
  }();
  return table;
}

void check_basis(const ECGBasis& basis) {
  if (basis.size() == 0 || basis.coefficients.size() != basis.size())
    throw InvalidInput("basis is empty or has mismatched coefficients");
  for (const auto& p : basis.primitives)
    if (!p.valid()) throw NotNegativeDefinite("primitive quadratic form is not negative definite");
}

struct Prepared {
  std::vector<Matrix3d> A;
  std::vector<Vector3d> g;
  std::vector<double> c;

  explicit Prepared(const ECGBasis& basis) {
    check_basis(basis);
    for (std::size_t n = 0; n < basis.size(); ++n) {
      A.push_back(basis.primitives[n].A());
      g.push_back(basis.primitives[n].g());
      c.push_back(basis.coefficients[n]);
    }
  }
  std::size_t size() const { return c.size(); }
};

Vector3d gather(const double* u, const Perm3& p) { return {u[p(0)], u[p(1)], u[p(2)]}; }

// Ψ at the 36 permuted points from per-axis factors: the Gaussian has no
// coupling between axes, so φ(P·v) = X[P] Y[P] Z[P].
std::array<double, 36> psi_values(const Prepared& prep, std::span<const double, 9> v) {
  const auto& mul = perm_products();
  const auto& group = group_elements();
  std::array<int, 36> sy, sz;
  for (int j = 0; j < 36; ++j) {
    sy[j] = group[j].y.s3_index();
    sz[j] = group[j].z.s3_index();
  }
  std::array<double, 36> out{};
  for (std::size_t n = 0; n < prep.size(); ++n) {
    std::array<double, 6> X, Y, Z;
    for (int q = 0; q < 6; ++q) {
      const Vector3d x = gather(v.data(), perms()[q]);
      const Vector3d y = gather(v.data() + 3, perms()[q]);
      const Vector3d z = gather(v.data() + 6, perms()[q]);
      X[q] = std::exp(-x.dot(prep.A[n] * x));
      Y[q] = std::exp(-y.dot(prep.A[n] * y));
      Z[q] = std::exp(-z.dot(prep.A[n] * z)) * std::sinh(prep.g[n].dot(z));
    }
    for (int j = 0; j < 36; ++j) {
      double s = 0;
      for (int p = 0; p < 6; ++p) s += perms()[p].sign() * X[p] * Y[mul[sy[j]][p]] * Z[mul[sz[j]][p]];
      out[j] += prep.c[n] * s;
    }
  }
  return out;
}

// ∫∫ exp(-uᵀMu + c·u) du2 du3 at u1 = t equals exp(log_c - q t² + l t + k).
struct Marginal {
  double log_c = 0, q = 0;
  Vector3d lin_row;    // l = lin_row·c
  Matrix3d quad_form;  // k = cᵀ quad_form c
};

Marginal marginal(const Matrix3d& M) {
  const Matrix2d Mww = M.block<2, 2>(1, 1);
  const Vector2d Mw1 = M.block<2, 1>(1, 0);
  const Matrix2d B = Mww.inverse();
  Marginal m;
  m.log_c = kLogPi - 0.5 * std::log(Mww.determinant());
  m.q = M(0, 0) - Mw1.dot(B * Mw1);
  m.lin_row = Vector3d(1, -(B * Mw1)[0], -(B * Mw1)[1]);
  m.quad_form.setZero();
  m.quad_form.block<2, 2>(1, 1) = 0.25 * B;
  return m;
}

// ∫∫ exp(-uᵀMu) sinh(a·u) sinh(b·u) du2 du3 at u1 = t:
// exp(log_c - q t²) · ½[cosh(lp t) e^{kp} - cosh(lm t) e^{km}].
struct SinhMarginal {
  double log_c, q, lp, kp, lm, km;
  double operator()(double t) const { return value(t, log_c - q * t * t); }
  // Same with the Gaussian exponent supplied; exponents are combined before
  // exponentiation so that large |t| cannot produce inf·0.
  double value(double t, double gauss) const {
    const double ap = std::abs(lp * t), am = std::abs(lm * t);
    return 0.25 * (std::exp(gauss + kp + ap) * (1 + std::exp(-2 * ap)) - std::exp(gauss + km + am) * (1 + std::exp(-2 * am)));
  }
};

SinhMarginal sinh_marginal(const Matrix3d& M, const Vector3d& a, const Vector3d& b) {
  const Marginal m = marginal(M);
  const Vector3d cp = a + b, cm = a - b;
  return {m.log_c, m.q, m.lin_row.dot(cp), cp.dot(m.quad_form * cp), m.lin_row.dot(cm), cm.dot(m.quad_form * cm)};
}

// ρ(r1) = 3 Σ pre·exp(-q|r1|²)·½[cosh(lp z1)e^{kp} - cosh(lm z1)e^{km}].
struct RhoModel {
  struct Term {
    double pre;
    SinhMarginal z;
  };
  std::vector<Term> terms;

  explicit RhoModel(const ECGBasis& basis) {
    const Prepared prep(basis);
    for (std::size_t n = 0; n < prep.size(); ++n)
      for (std::size_t m = 0; m < prep.size(); ++m)
        for (const Perm3& P : perms())
          for (const Perm3& Q : perms()) {
            const Matrix3d M = detail::permute_matrix(prep.A[n], P) + detail::permute_matrix(prep.A[m], Q);
            const SinhMarginal z = sinh_marginal(M, detail::permute_vector(prep.g[n], P),
                                                 detail::permute_vector(prep.g[m], Q));
            terms.push_back({prep.c[n] * prep.c[m] * P.sign() * Q.sign() * std::exp(2 * z.log_c), z});
          }
  }

  double operator()(const Point3& r) const {
    double s = 0;
    const double xy = r[0] * r[0] + r[1] * r[1];
    for (const auto& t : terms) s += t.pre * t.z.value(r[2], t.z.log_c - t.z.q * (xy + r[2] * r[2]));
    return 3 * s;
  }
};

// ---------------------------------------------------------------------------
// Importance sampling of (r2, r3) at fixed r1.

struct Component {
  Vector2d mean;
  Matrix2d L;  // Cholesky factor of the precision
  double log_norm;
};

struct AxisMixture {
  std::vector<Component> comps;
  std::vector<double> weights;  // normalized
  double log_mass = 0;

  double density(const Vector2d& w) const {
    double s = 0;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      const Vector2d d = comps[i].L.transpose() * (w - comps[i].mean);
      s += weights[i] * std::exp(comps[i].log_norm - 0.5 * d.squaredNorm());
    }
    return s;
  }
};

double log_sum_exp(const std::vector<double>& v) {
  const double m = *std::max_element(v.begin(), v.end());
  double s = 0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

std::vector<double> normalized_weights(const std::vector<double>& logs) {
  const double total = log_sum_exp(logs);
  std::vector<double> w;
  for (double x : logs) w.push_back(std::exp(x - total));
  return w;
}

std::size_t pick(const std::vector<double>& weights, double u) {
  for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
    if (u < weights[i]) return i;
    u -= weights[i];
  }
  return weights.size() - 1;
}

class Proposal {
 public:
  Proposal(const Prepared& prep, const Point3& r1) {
    std::vector<double> prim_logs;
    for (std::size_t n = 0; n < prep.size(); ++n) {
      std::array<AxisMixture, 3> axes;
      double log_w = 2 * std::log(std::abs(prep.c[n]) + 1e-300);
      for (int a = 0; a < 3; ++a) {
        std::vector<double> logs;
        for (const Perm3& P : perms()) {
          const Matrix3d Ap = detail::permute_matrix(prep.A[n], P);
          const Vector3d gp = detail::permute_vector(prep.g[n], P);
          for (int s : (a == 2 ? std::vector<int>{1, -1} : std::vector<int>{0})) {
            const double t = r1[a];
            const Matrix2d Lambda = 4 * kTemper * Ap.block<2, 2>(1, 1);
            const Vector2d h = kTemper * (-4 * t * Ap.block<2, 1>(1, 0) + 2.0 * s * gp.tail<2>());
            const double c0 = kTemper * (-2 * Ap(0, 0) * t * t + 2.0 * s * gp[0] * t);
            Eigen::LLT<Matrix2d> llt(Lambda);
            Component c;
            c.mean = llt.solve(h);
            c.L = llt.matrixL();
            const double log_det_L = std::log(c.L(0, 0)) + std::log(c.L(1, 1));
            c.log_norm = -kLog2Pi + log_det_L;
            logs.push_back(c0 + 0.5 * h.dot(c.mean) + kLog2Pi - log_det_L);
            axes[a].comps.push_back(c);
          }
        }
        axes[a].log_mass = log_sum_exp(logs);
        axes[a].weights = normalized_weights(logs);
        log_w += axes[a].log_mass;
      }
      prims_.push_back(std::move(axes));
      prim_logs.push_back(log_w);
    }
    prim_weights_ = normalized_weights(prim_logs);
  }

  // Fills the (r2, r3) coordinates of v and returns the proposal density.
  double sample(std::mt19937_64& rng, const Point3& r1, std::array<double, 9>& v) const {
    std::uniform_real_distribution<double> u(0, 1);
    std::normal_distribution<double> nd(0, 1);
    const auto& axes = prims_[pick(prim_weights_, u(rng))];
    for (int a = 0; a < 3; ++a) {
      const Component& c = axes[a].comps[pick(axes[a].weights, u(rng))];
      const Vector2d xi(nd(rng), nd(rng));
      const Vector2d w = c.mean + c.L.transpose().triangularView<Eigen::Upper>().solve(xi);
      v[3 * a] = r1[a];
      v[3 * a + 1] = w[0];
      v[3 * a + 2] = w[1];
    }
    return density(v);
  }

  double density(const std::array<double, 9>& v) const {
    double q = 0;
    for (std::size_t n = 0; n < prims_.size(); ++n) {
      double p = prim_weights_[n];
      for (int a = 0; a < 3; ++a) p *= prims_[n][a].density(Vector2d(v[3 * a + 1], v[3 * a + 2]));
      q += p;
    }
    return q;
  }

 private:
  std::vector<std::array<AxisMixture, 3>> prims_;
  std::vector<double> prim_weights_;
};

// target(v) returns nullopt for draws rejected by the guard.
using Target = std::function<std::optional<double>(const std::array<double, 9>&)>;

Estimate sample_mean(const Prepared& prep, const Point3& r1, const MonteCarloOptions& o, const Target& target,
                     int threads) {
  if (o.samples < 2 || o.batch < 1) throw InvalidInput("Monte Carlo budget must be at least 2 samples");
  if (!(o.eps > 0)) throw InvalidInput("coincidence guard must be positive");
  const Proposal proposal(prep, r1);
  const long batches = (o.samples + o.batch - 1) / o.batch;
  struct Acc {
    double sum = 0, sq = 0;
    long rejected = 0;
  };
  std::vector<Acc> acc(static_cast<std::size_t>(batches));
  parallel_for(
      static_cast<std::size_t>(batches),
      [&](std::size_t b) {
        std::mt19937_64 rng = substream(o.seed, b);
        const long count = std::min(o.batch, o.samples - static_cast<long>(b) * o.batch);
        Acc& a = acc[b];
        std::array<double, 9> v;
        for (long i = 0; i < count;) {
          const double q = proposal.sample(rng, r1, v);
          const auto f = target(v);
          if (!f) {
            if (++a.rejected > count) throw BudgetExhausted("coincidence guard rejected too many draws");
            continue;
          }
          const double x = *f / q;
          a.sum += x;
          a.sq += x * x;
          ++i;
        }
      },
      threads);
  Estimate e;
  double sum = 0, sq = 0;
  for (const auto& a : acc) {
    sum += a.sum;
    sq += a.sq;
    e.rejected += a.rejected;
  }
  const double n = static_cast<double>(o.samples);
  e.samples = o.samples;
  e.value = sum / n;
  const double var = std::max(0.0, (sq / n - e.value * e.value) * n / (n - 1));
  e.error = std::sqrt(var / n);
  return e;
}

void check_shape(int shape) {
  if (shape < 0 || shape >= kNumShapes) throw InvalidInput("shape index must be in 0..35");
}

Estimate bosonic_impl(const Prepared& prep, int shape, const Point3& r1, const MonteCarloOptions& o, int threads) {
  check_shape(shape);
  return sample_mean(
      prep, r1, o,
      [&](const std::array<double, 9>& v) -> std::optional<double> {
        try {
          const double phi = extract_component(psi_values(prep, v), v, shape, o.eps);
          return phi * phi;
        } catch (const NearSingular&) {
          return std::nullopt;
        }
      },
      threads);
}

// ---------------------------------------------------------------------------
// GSL helpers

template <class F>
double gsl_call(double x, void* p) {
  return (*static_cast<F*>(p))(x);
}

template <class F>
gsl_function as_gsl(F& f) {
  return {&gsl_call<F>, &f};
}

// ∫_0^∞ f(r) dr, adaptively.
template <class F>
double integrate_half_line(F f, double rel_tol, const char* what) {
  gsl_set_error_handler_off();
  gsl_integration_workspace* ws = gsl_integration_workspace_alloc(400);
  gsl_function gf = as_gsl(f);
  double result = 0, abserr = 0;
  const int status = gsl_integration_qagiu(&gf, 0.0, 0.0, rel_tol, 400, ws, &result, &abserr);
  gsl_integration_workspace_free(ws);
  if (status != GSL_SUCCESS && !(abserr <= 1e3 * rel_tol * std::abs(result)))
    throw NumericalError(std::string("quadrature did not converge: ") + what);
  return result;
}

}  // namespace

std::array<double, 36> permuted_values(const ECGBasis& basis, std::span<const double, 9> point) {
  return psi_values(Prepared(basis), point);
}

double one_electron_density(const ECGBasis& basis, const Point3& r1) { return RhoModel(basis)(r1); }

double integrated_density(const ECGBasis& basis, int polar, int azimuthal, double rel_tol) {
  if (polar < 2 || azimuthal < 1) throw InvalidInput("angular grid too small");
  const RhoModel rho(basis);
  gsl_integration_glfixed_table* table = gsl_integration_glfixed_table_alloc(polar);
  std::vector<std::pair<double, double>> nodes;  // (cosθ, weight)
  for (int i = 0; i < polar; ++i) {
    double x, w;
    gsl_integration_glfixed_point(-1, 1, i, &x, &w, table);
    nodes.emplace_back(x, w);
  }
  gsl_integration_glfixed_table_free(table);
  auto shell = [&](double r) {
    double s = 0;
    for (const auto& [ct, w] : nodes) {
      const double st = std::sqrt(1 - ct * ct);
      for (int k = 0; k < azimuthal; ++k) {
        const double ph = 2 * std::numbers::pi * (k + 0.5) / azimuthal;
        s += w * rho({r * st * std::cos(ph), r * st * std::sin(ph), r * ct});
      }
    }
    return s * 2 * std::numbers::pi / azimuthal * r * r;
  };
  return integrate_half_line(shell, rel_tol, "radial density");
}

Estimate bosonic_density(const ECGBasis& basis, int shape, const Point3& r1, const MonteCarloOptions& options) {
  return bosonic_impl(Prepared(basis), shape, r1, options, 0);
}

Estimate one_electron_density_mc(const ECGBasis& basis, const Point3& r1, const MonteCarloOptions& options) {
  const Prepared prep(basis);
  return sample_mean(
      prep, r1, options,
      [&](const std::array<double, 9>& v) -> std::optional<double> {
        const double psi = psi_values(prep, v)[0];
        return 3 * psi * psi;
      },
      0);
}

double d32_quadrature(const ECGBasis& basis, const Point3& r1, double rel_tol) {
  const Prepared prep(basis);
  const std::size_t N = prep.size();
  // g_0 = Σ_n C_n Xa_n(x) Ys_n(y) Zs_n(z): antisymmetric in x, symmetric in y
  // and z.  The y and z integrals are Gaussian; W collects them.
  Eigen::MatrixXd W(N, N);
  for (std::size_t n = 0; n < N; ++n)
    for (std::size_t m = 0; m < N; ++m) {
      double iy = 0, iz = 0;
      for (const Perm3& P : perms())
        for (const Perm3& Q : perms()) {
          const Matrix3d M = detail::permute_matrix(prep.A[n], P) + detail::permute_matrix(prep.A[m], Q);
          const SinhMarginal z =
              sinh_marginal(M, detail::permute_vector(prep.g[n], P), detail::permute_vector(prep.g[m], Q));
          iy += std::exp(z.log_c - z.q * r1[1] * r1[1]);
          iz += z(r1[2]);
        }
      W(n, m) = prep.c[n] * prep.c[m] * iy * iz;
    }

  const double x1 = r1[0];
  // Integrand over (x2, x3) = (x1 + r sinφ, x1 + r cosφ), times the Jacobian r.
  auto polar_integrand = [&](double r, double phi) {
    const double s = std::sin(phi), c = std::cos(phi);
    const double x[3] = {x1, x1 + r * s, x1 + r * c};
    Eigen::VectorXd xa(N);
    for (std::size_t n = 0; n < N; ++n) {
      double sum = 0;
      for (const Perm3& P : perms()) {
        const Vector3d u = gather(x, P);
        sum += P.sign() * std::exp(-u.dot(prep.A[n] * u));
      }
      xa[n] = sum;
    }
    const double angular = s * s * c * c * (s - c) * (s - c);
    return xa.dot(W * xa) / (angular * std::pow(r, 5));
  };

  // The Vandermonde factor vanishes at φ = 0, π/4, π/2, π, 5π/4, 3π/2.
  constexpr double pi = std::numbers::pi;
  const double breaks[] = {0, pi / 4, pi / 2, pi, 5 * pi / 4, 3 * pi / 2, 2 * pi};
  constexpr int kNodes = 32;
  gsl_integration_glfixed_table* table = gsl_integration_glfixed_table_alloc(kNodes);
  std::vector<std::pair<double, double>> nodes;
  for (int p = 0; p + 1 < 7; ++p)
    for (int i = 0; i < kNodes; ++i) {
      double x, w;
      gsl_integration_glfixed_point(breaks[p], breaks[p + 1], i, &x, &w, table);
      nodes.emplace_back(x, w);
    }
  gsl_integration_glfixed_table_free(table);

  auto radial = [&](double r) {
    if (r <= 0) return 0.0;
    double s = 0;
    for (const auto& [phi, w] : nodes) s += w * polar_integrand(r, phi);
    return s;
  };
  const double integral = integrate_half_line(radial, rel_tol, "collinear x factor");
  return kCollinearXPrefactor * kCollinearXPrefactor * integral;
}

// ---------------------------------------------------------------------------
// Grids

DensityKind DensityKind::parse(std::string_view text) {
  if (text == "rho") return {};
  if (text.size() >= 2 && (text[0] == 'D' || text[0] == 'd')) {
    int i = -1;
    const auto* end = text.data() + text.size();
    const auto [p, ec] = std::from_chars(text.data() + 1, end, i);
    if (ec == std::errc{} && p == end && i >= 0 && i < kNumShapes) return {i};
  }
  throw InvalidInput("density kind must be rho or D0..D35, got '" + std::string(text) + "'");
}

std::string DensityKind::name() const { return is_rho() ? "rho" : "D" + std::to_string(shape); }

GridAxis GridAxis::parse(std::string_view text) {
  std::string s(text);
  for (char& c : s)
    if (c == ':') c = ' ';
  std::istringstream in(s);
  in.imbue(std::locale::classic());
  GridAxis a;
  std::string rest;
  if (!(in >> a.lo >> a.hi >> a.count) || (in >> rest) || a.count < 1 || !(a.hi >= a.lo) ||
      (a.count == 1 && a.hi != a.lo))
    throw InvalidInput("grid axis must be lo:hi:count with lo <= hi and count >= 1, got '" + std::string(text) + "'");
  return a;
}

DensityGrid density_grid(const ECGBasis& basis, const DensityKind& kind, const std::array<GridAxis, 3>& axes,
                         const GridOptions& options) {
  for (const auto& a : axes)
    if (a.count < 1) throw InvalidInput("grid axis has no points");
  DensityMethod method = options.method;
  if (method == DensityMethod::Auto) method = kind.is_rho() ? DensityMethod::Quadrature : DensityMethod::MonteCarlo;
  if (method == DensityMethod::Quadrature && !kind.is_rho() && kind.shape != kCollinearXShape)
    throw InvalidInput("quadrature is available for rho and D32 only");

  DensityGrid grid;
  grid.kind = kind.name();
  grid.axes = axes;
  const std::size_t total = static_cast<std::size_t>(axes[0].count) * axes[1].count * axes[2].count;
  grid.values.assign(total, 0.0);
  const bool mc = method == DensityMethod::MonteCarlo;
  if (mc) grid.errors.assign(total, 0.0);

  const Prepared prep(basis);
  std::optional<RhoModel> rho;
  if (kind.is_rho() && !mc) rho.emplace(basis);

  parallel_for(total, [&](std::size_t idx) {
    const int k = static_cast<int>(idx % axes[2].count);
    const int j = static_cast<int>((idx / axes[2].count) % axes[1].count);
    const int i = static_cast<int>(idx / (static_cast<std::size_t>(axes[2].count) * axes[1].count));
    const Point3 r{axes[0].at(i), axes[1].at(j), axes[2].at(k)};
    if (!mc) {
      // Clamp rounding-level negatives; both densities are squares.
      grid.values[idx] = std::max(0.0, rho ? (*rho)(r) : d32_quadrature(basis, r));
      return;
    }
    MonteCarloOptions o = options.mc;
    o.seed = substream(options.mc.seed, idx)();
    Estimate e;
    if (kind.is_rho()) {
      e = sample_mean(
          prep, r, o,
          [&](const std::array<double, 9>& v) -> std::optional<double> {
            const double psi = psi_values(prep, v)[0];
            return 3 * psi * psi;
          },
          1);
    } else {
      e = bosonic_impl(prep, kind.shape, r, o, 1);
    }
    grid.values[idx] = e.value;
    grid.errors[idx] = e.error;
  });
  return grid;
}

void write_grid(std::ostream& out, const DensityGrid& grid) {
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s << std::setprecision(17);
  s << "shapedecomp-grid 1\n";
  s << "kind " << grid.kind << "\n";
  s << "origin " << grid.axes[0].lo << " " << grid.axes[1].lo << " " << grid.axes[2].lo << "\n";
  s << "step " << grid.axes[0].step() << " " << grid.axes[1].step() << " " << grid.axes[2].step() << "\n";
  s << "counts " << grid.axes[0].count << " " << grid.axes[1].count << " " << grid.axes[2].count << "\n";
  const char* names = "xyz";
  for (int a = 0; a < 3; ++a)
    s << "axis " << names[a] << " " << grid.axes[a].lo << " " << grid.axes[a].hi << " " << grid.axes[a].count << "\n";
  for (const auto& [key, value] : grid.metadata) s << "meta " << key << " " << value << "\n";
  s << "order x-major\n";
  s << "columns " << (grid.errors.empty() ? "value" : "value error") << "\n";
  s << "data\n";
  for (std::size_t i = 0; i < grid.values.size(); ++i) {
    s << grid.values[i];
    if (!grid.errors.empty()) s << " " << grid.errors[i];
    s << "\n";
  }
  out << s.str();
}

DensityGrid read_grid(std::istream& in) {
  in.imbue(std::locale::classic());
  DensityGrid g;
  std::string line, key;
  auto fail = [](const std::string& why) { return InvalidInput("malformed grid file: " + why); };
  if (!std::getline(in, line) || line != "shapedecomp-grid 1") throw fail("missing header");
  bool with_errors = false;
  int axes_seen = 0;
  while (std::getline(in, line) && line != "data") {
    std::istringstream ls(line);
    ls.imbue(std::locale::classic());
    ls >> key;
    if (key == "kind") {
      ls >> g.kind;
      DensityKind::parse(g.kind);
    } else if (key == "axis") {
      std::string name;
      ls >> name;
      const int a = name == "x" ? 0 : name == "y" ? 1 : name == "z" ? 2 : -1;
      if (a < 0 || !(ls >> g.axes[a].lo >> g.axes[a].hi >> g.axes[a].count)) throw fail("bad axis line");
      ++axes_seen;
    } else if (key == "meta") {
      std::string k, v;
      ls >> k;
      std::getline(ls >> std::ws, v);
      g.metadata.emplace_back(k, v);
    } else if (key == "columns") {
      with_errors = line.find("error") != std::string::npos;
    }
  }
  if (line != "data" || axes_seen != 3 || g.kind.empty()) throw fail("incomplete header");
  const std::size_t total = static_cast<std::size_t>(g.axes[0].count) * g.axes[1].count * g.axes[2].count;
  g.values.resize(total);
  if (with_errors) g.errors.resize(total);
  for (std::size_t i = 0; i < total; ++i) {
    if (!(in >> g.values[i])) throw fail("too few values");
    if (with_errors && !(in >> g.errors[i])) throw fail("too few values");
  }
  return g;
}

}  // namespace shapedecomp
