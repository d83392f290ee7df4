#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "ecg_kernel.hpp"
#include "shapedecomp/ecg.hpp"
#include "shapedecomp/errors.hpp"
#include "shapedecomp/parallel.hpp"

namespace shapedecomp {

using detail::Lobe;
using Eigen::Matrix3d;
using Eigen::Vector3d;

namespace {

// Per primitive: log L00, L10, log L11, L20, L21, log L22, γ1, γ2, γ3 with A = L Lᵀ.
using Params = Eigen::Matrix<double, 9, 1>;

constexpr double kInf = std::numeric_limits<double>::infinity();
// Merged stages are re-seeded until the overlap is comfortably conditioned.
constexpr double kMergeCondition = 1e10;

Matrix3d cholesky_factor(const Params& p) {
  Matrix3d L = Matrix3d::Zero();
  L(0, 0) = std::exp(p[0]);
  L(1, 0) = p[1];
  L(1, 1) = std::exp(p[2]);
  L(2, 0) = p[3];
  L(2, 1) = p[4];
  L(2, 2) = std::exp(p[5]);
  return L;
}

Lobe make_lobe(const Params& p) {
  const Matrix3d L = cholesky_factor(p);
  const Matrix3d A = L * L.transpose();
  const Vector3d g = p.tail<3>();
  return {A, g, detail::lobe_log_norm(A, g)};
}

Params params_of(const Matrix3d& A, const Vector3d& g) {
  Eigen::LLT<Matrix3d> llt(A);
  if (llt.info() != Eigen::Success) throw NotNegativeDefinite("primitive quadratic form is not negative definite");
  const Matrix3d L = llt.matrixL();
  Params p;
  p << std::log(L(0, 0)), L(1, 0), std::log(L(1, 1)), L(2, 0), L(2, 1), std::log(L(2, 2)), g;
  return p;
}

// Ψ(λr): A -> λ²A, γ -> λγ.
Params scaled(const Params& p, double lambda) {
  Params q = p;
  const double ll = std::log(lambda);
  q[0] += ll;
  q[2] += ll;
  q[5] += ll;
  q[1] *= lambda;
  q[3] *= lambda;
  q[4] *= lambda;
  q.tail<3>() *= lambda;
  return q;
}

class Model {
 public:
  explicit Model(std::vector<Params> p) : p_(std::move(p)) { rebuild(); }

  int size() const { return static_cast<int>(p_.size()); }
  const std::vector<Params>& params() const { return p_; }
  long evaluations() const { return evaluations_; }

  void rebuild() {
    const int n = size();
    lobes_.clear();
    for (const auto& q : p_) lobes_.push_back(make_lobe(q));
    S_.resize(n, n);
    T_.resize(n, n);
    V_.resize(n, n);
    for (int i = 0; i < n; ++i) fill_row(i);
  }

  // Replaces primitive i; returns false (and leaves the model unchanged) if the
  // new primitive is not normalizable.
  bool set(int i, const Params& q) {
    try {
      Lobe l = make_lobe(q);
      std::swap(lobes_[i], l);
      try {
        p_[i] = q;
        fill_row(i);
      } catch (const NotNegativeDefinite&) {
        std::swap(lobes_[i], l);
        throw;
      }
    } catch (const NotNegativeDefinite&) {
      return false;
    }
    return true;
  }

  void set_all(const std::vector<Params>& ps) {
    p_ = ps;
    rebuild();
  }

  // Lowest eigenvalue, +inf when the overlap is ill-conditioned.
  double energy(Eigen::VectorXd* c = nullptr) {
    ++evaluations_;
    try {
      const auto sol = solve_secular(T_ + V_, S_);
      if (c) *c = sol.C;
      return sol.energy;
    } catch (const NumericalError&) {
      return kInf;
    }
  }

  // dE/dp by Hellmann–Feynman, dE = cᵀ(dH - E dS)c, with central differences
  // of the changed row.
  Eigen::VectorXd gradient(const Eigen::VectorXd& c, double E) const {
    const int n = size();
    Eigen::VectorXd grad(9 * n);
    constexpr double h = 1e-5;
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t ii) {
      const int i = static_cast<int>(ii);
      for (int k = 0; k < 9; ++k) {
        Params qp = p_[i], qm = p_[i];
        qp[k] += h;
        qm[k] -= h;
        double d = 0;
        try {
          const Lobe lp = make_lobe(qp), lm = make_lobe(qm);
          for (int j = 0; j < n; ++j) {
            const PairElements ep = detail::lobe_pair(lp, j == i ? lp : lobes_[j]);
            const PairElements em = detail::lobe_pair(lm, j == i ? lm : lobes_[j]);
            const double dh = (ep.T + ep.V - em.T - em.V) / (2 * h);
            const double ds = (ep.S - em.S) / (2 * h);
            d += (j == i ? c[i] : 2 * c[j]) * (dh - E * ds);
          }
          d *= c[i];
        } catch (const NotNegativeDefinite&) {
          d = 0;
        }
        grad[9 * i + k] = d;
      }
    });
    return grad;
  }

  // ⟨T⟩ and ⟨V⟩ for coefficients c (in the scaled basis).
  std::pair<double, double> components(const Eigen::VectorXd& c) const { return {c.dot(T_ * c), c.dot(V_ * c)}; }

  ECGBasis to_basis(const Eigen::VectorXd& c, double energy, int stage) const {
    ECGBasis b;
    for (int i = 0; i < size(); ++i) {
      b.primitives.push_back(ECGPrimitive::from_matrix(lobes_[i].A, lobes_[i].g));
      b.coefficients.push_back(c[i] * std::exp(-lobes_[i].log_scale));
    }
    b.energy = energy;
    b.stage = stage;
    return b;
  }

  double condition() const { return overlap_condition(S_); }

 private:
  void fill_row(int i) {
    for (int j = 0; j < size(); ++j) {
      const PairElements e = detail::lobe_pair(lobes_[i], lobes_[j]);
      S_(i, j) = S_(j, i) = e.S;
      T_(i, j) = T_(j, i) = e.T;
      V_(i, j) = V_(j, i) = e.V;
    }
  }

  std::vector<Params> p_;
  std::vector<Lobe> lobes_;
  Eigen::MatrixXd S_, T_, V_;
  long evaluations_ = 0;
};

// A 1s-2s-2p_z-like starting guess with random widths and weak correlation.
Params random_primitive(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  auto logu = [&](double lo, double hi) { return std::exp(std::log(lo) + u(rng) * (std::log(hi) - std::log(lo))); };
  Matrix3d A = Matrix3d::Zero();
  A(0, 0) = logu(1.0, 8.0);
  A(1, 1) = logu(0.04, 0.5);
  A(2, 2) = logu(0.02, 0.4);
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) A(i, j) = A(j, i) = (u(rng) - 0.5) * 0.1 * std::sqrt(A(i, i) * A(j, j));
  std::normal_distribution<double> small(0, 0.05);
  Vector3d g(small(rng), small(rng), (u(rng) < 0.5 ? -1 : 1) * (0.05 + 0.9 * u(rng)));
  return params_of(A, g);
}

void random_search(Model& m, std::mt19937_64& rng, int sweeps, double step) {
  double E = m.energy();
  std::normal_distribution<double> nd(0, 1);
  std::vector<int> order(m.size());
  std::iota(order.begin(), order.end(), 0);
  for (int s = 0; s < sweeps; ++s) {
    std::shuffle(order.begin(), order.end(), rng);
    int accepted = 0;
    for (int i : order) {
      const Params old = m.params()[i];
      Params q = old;
      for (int k = 0; k < 9; ++k) q[k] += step * nd(rng);
      if (!m.set(i, q)) continue;
      const double e = m.energy();
      if (e < E) {
        E = e;
        ++accepted;
      } else {
        m.set(i, old);
      }
    }
    const double rate = static_cast<double>(accepted) / m.size();
    if (rate < 0.2)
      step *= 0.7;
    else if (rate > 0.5)
      step *= 1.3;
    step = std::clamp(step, 1e-4, 1.0);
  }
}

struct GslContext {
  Model* model;
  std::vector<Params> scratch;
};

void unpack(const gsl_vector* x, std::vector<Params>& ps) {
  for (std::size_t i = 0; i < ps.size(); ++i)
    for (int k = 0; k < 9; ++k) ps[i][k] = gsl_vector_get(x, 9 * i + k);
}

// Large finite stand-in for non-normalizable or ill-conditioned points so the
// line search can back off.
constexpr double kPenalty = 1e3;

double gsl_f(const gsl_vector* x, void* ctx) {
  auto* c = static_cast<GslContext*>(ctx);
  unpack(x, c->scratch);
  try {
    c->model->set_all(c->scratch);
  } catch (const NotNegativeDefinite&) {
    return kPenalty;
  }
  const double e = c->model->energy();
  return std::isfinite(e) ? e : kPenalty;
}

void gsl_fdf(const gsl_vector* x, void* ctx, double* f, gsl_vector* g) {
  auto* c = static_cast<GslContext*>(ctx);
  unpack(x, c->scratch);
  gsl_vector_set_zero(g);
  try {
    c->model->set_all(c->scratch);
  } catch (const NotNegativeDefinite&) {
    *f = kPenalty;
    return;
  }
  Eigen::VectorXd coef;
  const double e = c->model->energy(&coef);
  if (!std::isfinite(e)) {
    *f = kPenalty;
    return;
  }
  *f = e;
  const Eigen::VectorXd grad = c->model->gradient(coef, e);
  for (int i = 0; i < grad.size(); ++i) gsl_vector_set(g, i, grad[i]);
}

void gsl_df(const gsl_vector* x, void* ctx, gsl_vector* g) {
  double f;
  gsl_fdf(x, ctx, &f, g);
}

// Quasi-Newton polish over all nonlinear parameters; keeps the best point.
void polish(Model& m, int max_iterations) {
  if (max_iterations <= 0) return;
  gsl_set_error_handler_off();
  const int n = 9 * m.size();
  const std::vector<Params> start = m.params();
  const double e0 = m.energy();

  GslContext ctx{&m, start};
  gsl_multimin_function_fdf fdf{&gsl_f, &gsl_df, &gsl_fdf, static_cast<std::size_t>(n), &ctx};
  gsl_vector* x = gsl_vector_alloc(n);
  for (int i = 0; i < m.size(); ++i)
    for (int k = 0; k < 9; ++k) gsl_vector_set(x, 9 * i + k, start[i][k]);
  gsl_multimin_fdfminimizer* s = gsl_multimin_fdfminimizer_alloc(gsl_multimin_fdfminimizer_vector_bfgs2, n);
  gsl_multimin_fdfminimizer_set(s, &fdf, x, 0.01, 0.1);
  for (int it = 0; it < max_iterations; ++it) {
    if (gsl_multimin_fdfminimizer_iterate(s) != GSL_SUCCESS) break;
    if (gsl_multimin_test_gradient(s->gradient, 1e-7) == GSL_SUCCESS) break;
  }
  std::vector<Params> best = start;
  const double fbest = gsl_multimin_fdfminimizer_minimum(s);
  if (fbest < e0) unpack(gsl_multimin_fdfminimizer_x(s), best);
  gsl_multimin_fdfminimizer_free(s);
  gsl_vector_free(x);
  m.set_all(best);
}

// Rescales all primitives so that ⟨V⟩/⟨T⟩ = -2, the optimum along the
// dilation direction.
void apply_virial_scaling(Model& m) {
  Eigen::VectorXd c;
  if (!std::isfinite(m.energy(&c))) return;
  const auto [t, v] = m.components(c);
  const double lambda = -v / (2 * t);
  std::vector<Params> ps = m.params();
  for (auto& q : ps) q = scaled(q, lambda);
  const std::vector<Params> old = m.params();
  const double before = m.energy();
  m.set_all(ps);
  if (!(m.energy() <= before)) m.set_all(old);
}

void optimize_stage(Model& m, std::mt19937_64& rng, const OptimizeOptions& o) {
  random_search(m, rng, o.search_sweeps, 0.1);
  polish(m, o.max_iterations);
  apply_virial_scaling(m);
}

void add_best_candidate(std::vector<Params>& ps, std::mt19937_64& rng, int candidates) {
  Params best = random_primitive(rng);
  double ebest = kInf;
  for (int c = 0; c < candidates; ++c) {
    const Params q = random_primitive(rng);
    auto trial = ps;
    trial.push_back(q);
    Model m(trial);
    const double e = m.energy();
    if (e < ebest) {
      ebest = e;
      best = q;
    }
  }
  ps.push_back(best);
}

}  // namespace

std::vector<int> narayana_sizes(int count) {
  std::vector<int> n;
  for (int j = 0; j < count; ++j) n.push_back(j < 3 ? j + 1 : n[j - 1] + n[j - 3]);
  return n;
}

OptimizeResult optimize_basis(const OptimizeOptions& o) {
  if (o.sizes.empty()) throw InvalidInput("no basis sizes requested");
  const auto expected = narayana_sizes(static_cast<int>(o.sizes.size()));
  if (o.sizes != expected) throw InvalidInput("basis sizes must follow 1, 2, 3, 4, 6, 9, 13, ...");

  std::mt19937_64 rng(o.seed);
  OptimizeResult result;
  std::vector<std::vector<Params>> stage_params;

  auto finish = [&](Model& m, int stage, long evals_before) {
    Eigen::VectorXd c;
    const double e = m.energy(&c);
    if (!std::isfinite(e)) throw IllConditionedOverlap("optimized stage has an ill-conditioned overlap");
    const auto [t, v] = m.components(c);
    StageReport r;
    r.size = m.size();
    r.energy = e;
    r.virial = v / t;
    r.evaluations = m.evaluations() - evals_before;
    stage_params.push_back(m.params());
    const double prev = result.reports.empty() ? kInf : result.reports.back().energy;
    r.stalled = !(e < prev) && stage > 0;
    result.reports.push_back(r);
    result.stages.push_back(m.to_basis(c, e, stage));
    if (o.progress) o.progress(r);
  };

  for (std::size_t J = 0; J < o.sizes.size(); ++J) {
    const int stage = static_cast<int>(J);
    if (J == 0) {
      // Several random starts, each briefly optimized; keep the best.
      std::vector<Params> best;
      double ebest = kInf;
      for (int r = 0; r < std::max(1, o.restarts); ++r) {
        Model m({random_primitive(rng)});
        random_search(m, rng, o.search_sweeps, 0.2);
        polish(m, o.max_iterations / 10);
        const double e = m.energy();
        if (e < ebest) {
          ebest = e;
          best = m.params();
        }
      }
      Model m(best);
      optimize_stage(m, rng, o);
      finish(m, stage, 0);
      continue;
    }
    std::vector<Params> init;
    if (J < 3) {
      init = stage_params[J - 1];
      add_best_candidate(init, rng, 32);
    } else {
      init = stage_params[J - 1];
      const auto& older = stage_params[J - 3];
      init.insert(init.end(), older.begin(), older.end());
    }
    Model m(init);
    // Merged sets contain near-copies; nudge the appended primitives apart.
    std::normal_distribution<double> nd(0, 1);
    const int keep = static_cast<int>(stage_params[J - 1].size());
    double noise = 0.05;
    for (int attempt = 0; attempt < 200 && !(m.condition() < kMergeCondition); ++attempt) {
      for (int i = keep; i < m.size(); ++i) {
        Params q = m.params()[i];
        for (int k = 0; k < 9; ++k) q[k] += noise * nd(rng);
        m.set(i, q);
      }
      noise = std::min(0.5, noise * 1.2);
    }
    const long before = m.evaluations();
    optimize_stage(m, rng, o);
    finish(m, stage, before);
  }
  return result;
}

}  // namespace shapedecomp
