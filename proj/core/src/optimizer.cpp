#include "varcurve/optimizer.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <optional>
#include <thread>

#include "varcurve/error.hpp"

namespace varcurve {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::converged: return "converged";
    case Verdict::iter_limit: return "iter_limit";
    case Verdict::degenerate: return "degenerate";
  }
  return "?";
}

void SolveOptions::validate() const {
  if (max_iters < 0) throw ConfigError("max_iters must be >= 0");
  if (!(grad_tol > 0.0)) throw ConfigError("grad_tol must be > 0");
  if (!(armijo_c1 > 0.0 && armijo_c1 < 1.0)) throw ConfigError("armijo c1 must lie in (0, 1)");
  if (!(backtrack > 0.0 && backtrack < 1.0)) throw ConfigError("backtrack factor must lie in (0, 1)");
  if (!(initial_step > 0.0)) throw ConfigError("initial_step must be > 0");
  if (!(step_floor > 0.0)) throw ConfigError("step_floor must be > 0");
  if (record_every < 1) throw ConfigError("record_every must be >= 1");
  if (!(step_cap > 0.0)) throw ConfigError("step_cap must be > 0");
}

namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;

// Flat Sobolev operator of the objective's quadratic part on the free samples.
class Preconditioner {
 public:
  Preconditioner(const FunctionalSpec& spec, const DiscreteCurve& x, const std::vector<bool>& free) {
    const int count = x.sample_count();
    const int n = x.grid_size();
    position_.assign(static_cast<std::size_t>(count), -1);
    for (int j = 0; j < count; ++j) {
      if (free[static_cast<std::size_t>(j)]) {
        position_[static_cast<std::size_t>(j)] = size_++;
        free_.push_back(j);
      }
    }
    if (size_ == 0) return;

    std::vector<Eigen::Triplet<double>> entries;
    auto add = [&](int a, int b, double v) {
      const int pa = position_[static_cast<std::size_t>(x.index(a))];
      const int pb = position_[static_cast<std::size_t>(x.index(b))];
      if (pa >= 0 && pb >= 0) entries.emplace_back(pa, pb, v);
    };

    if (const double a = spec.acceleration_weight(); a > 0.0) {
      const Eigen::VectorXd w = acceleration_weights(x);
      const double n4 = std::pow(static_cast<double>(n), 4);
      const int first = x.domain() == DomainKind::circle ? 0 : 1;
      const int last = n;
      const int stencil[3] = {-1, 0, 1};
      const double coeff[3] = {1.0, -2.0, 1.0};
      for (int j = first; j < last; ++j) {
        const double s = a * n4 * w[j];
        for (int r = 0; r < 3; ++r) {
          for (int c = 0; c < 3; ++c) add(j + stencil[r], j + stencil[c], s * coeff[r] * coeff[c]);
        }
      }
    }
    double first_order = spec.speed_weight();
    if (spec.velocity_field()) first_order += 1.0;
    if (first_order > 0.0) {
      const double s = first_order * n;
      for (int j = 0; j < x.segment_count(); ++j) {
        add(j, j, s);
        add(j + 1, j + 1, s);
        add(j, j + 1, -s);
        add(j + 1, j, -s);
      }
    }

    SparseMatrix mat(size_, size_);
    mat.setFromTriplets(entries.begin(), entries.end());
    double max_diag = 0.0;
    for (int i = 0; i < size_; ++i) max_diag = std::max(max_diag, mat.coeff(i, i));
    // Small shift keeps operators with a constant null space (no fixed samples) invertible.
    const double shift = max_diag > 0.0 ? 1e-12 * max_diag : 1.0;
    SparseMatrix id(size_, size_);
    id.setIdentity();
    mat += shift * id;
    solver_.compute(mat);
    if (solver_.info() != Eigen::Success) throw Error("preconditioner factorization failed");
  }

  // Returns M^{-1} applied to each ambient row of g, on free columns only.
  Eigen::MatrixXd apply(const Eigen::MatrixXd& g) const {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(g.rows(), g.cols());
    if (size_ == 0) return out;
    Eigen::MatrixXd rhs(size_, g.rows());
    for (int i = 0; i < size_; ++i) rhs.row(i) = g.col(free_[static_cast<std::size_t>(i)]).transpose();
    const Eigen::MatrixXd sol = solver_.solve(rhs);
    for (int i = 0; i < size_; ++i) out.col(free_[static_cast<std::size_t>(i)]) = sol.row(i).transpose();
    return out;
  }

 private:
  std::vector<int> position_;
  std::vector<int> free_;
  int size_ = 0;
  Eigen::SimplicialLDLT<SparseMatrix> solver_;
};

IterationRecord record(int iteration, double objective, double grad_norm, double step, const DiscreteCurve& x) {
  IterationRecord r;
  r.iteration = iteration;
  r.objective = objective;
  r.grad_norm = grad_norm;
  r.step = step;
  r.length = length(x);
  r.sup_velocity = sup_speed(x);
  if (x.manifold().kind() == ManifoldKind::torus) r.winding = winding_numbers(x);
  return r;
}

DiscreteCurve step_along(const DiscreteCurve& x, const Eigen::MatrixXd& direction, double alpha,
                         const std::vector<bool>& free) {
  const Manifold& m = x.manifold();
  Eigen::MatrixXd s = x.samples();
  for (int j = 0; j < x.sample_count(); ++j) {
    if (free[static_cast<std::size_t>(j)]) s.col(j) = m.exp(x.sample(j), -alpha * direction.col(j));
  }
  return DiscreteCurve(x.manifold_ptr(), x.domain(), std::move(s));
}

}  // namespace

SolveReport minimize(const FunctionalSpec& spec, const ConstraintSet& c, const DiscreteCurve& x0,
                     const SolveOptions& opts) {
  opts.validate();
  const std::vector<bool> free = free_mask(c, x0.grid_size(), x0.domain());
  const Manifold& m = x0.manifold();

  SolveReport report{x0, {}, Verdict::iter_limit, 0, 0.0, 0.0, {}};
  DiscreteCurve x = x0;
  double f = 0.0;
  TangentField g = TangentField::zeros(x);
  try {
    f = evaluate(spec, x);
    g = gradient(spec, x, free);
  } catch (const DegenerateCurveError& e) {
    report.verdict = Verdict::degenerate;
    report.message = e.what();
    return report;
  }
  double residual = field_norm(g);
  report.history.push_back(record(0, f, residual, 0.0, x));

  const Preconditioner precond(spec, x, free);
  double last_step = 0.0;
  int iter = 0;
  bool recorded_last = true;

  auto finish = [&](Verdict v) {
    report.minimizer = x;
    report.verdict = v;
    report.iterations = iter;
    report.objective = f;
    report.residual = residual;
    if (!recorded_last) report.history.push_back(record(iter, f, residual, last_step, x));
    return report;
  };

  while (true) {
    if (residual <= opts.grad_tol) return finish(Verdict::converged);
    if (iter >= opts.max_iters) return finish(Verdict::iter_limit);

    Eigen::MatrixXd dir = precond.apply(g.vectors);
    for (int j = 0; j < x.sample_count(); ++j) dir.col(j) = m.project_tangent(x.sample(j), dir.col(j));
    const double slope = (g.vectors.array() * dir.array()).sum();
    if (!(slope > 0.0)) {
      report.message = "preconditioned direction is not a descent direction";
      return finish(Verdict::iter_limit);
    }

    double alpha = opts.initial_step;
    if (m.compact()) {
      const double widest = dir.colwise().norm().maxCoeff();
      if (alpha * widest > opts.step_cap) alpha = opts.step_cap / widest;
    }

    bool accepted = false;
    DiscreteCurve trial = x;
    double f_trial = f;
    while (alpha >= opts.step_floor) {
      try {
        trial = step_along(x, dir, alpha, free);
        f_trial = evaluate(spec, trial);
        if (f_trial < f && f_trial <= f - opts.armijo_c1 * alpha * slope) {
          accepted = true;
          break;
        }
      } catch (const DegenerateCurveError&) {
      } catch (const CutLocusError&) {
      }
      alpha *= opts.backtrack;
    }
    if (!accepted) {
      report.message = "step size fell below step_floor";
      return finish(Verdict::iter_limit);
    }

    TangentField g_trial = TangentField::zeros(trial);
    try {
      g_trial = gradient(spec, trial, free);
    } catch (const DegenerateCurveError& e) {
      report.message = e.what();
      return finish(Verdict::degenerate);
    }

    x = std::move(trial);
    f = f_trial;
    g = std::move(g_trial);
    residual = field_norm(g);
    last_step = alpha;
    ++iter;
    recorded_last = iter % opts.record_every == 0;
    if (recorded_last) report.history.push_back(record(iter, f, residual, alpha, x));
  }
}

std::vector<int> cluster_labels(const Eigen::MatrixXd& distance, double threshold) {
  const int n = static_cast<int>(distance.rows());
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[static_cast<std::size_t>(i)] != i) {
      parent[static_cast<std::size_t>(i)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
      i = parent[static_cast<std::size_t>(i)];
    }
    return i;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (distance(i, j) < threshold) {
        const int a = find(i), b = find(j);
        parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
      }
    }
  }
  std::vector<int> label(static_cast<std::size_t>(n), -1);
  std::vector<int> root_label(static_cast<std::size_t>(n), -1);
  int next = 0;
  for (int i = 0; i < n; ++i) {
    const int r = find(i);
    if (root_label[static_cast<std::size_t>(r)] < 0) root_label[static_cast<std::size_t>(r)] = next++;
    label[static_cast<std::size_t>(i)] = root_label[static_cast<std::size_t>(r)];
  }
  return label;
}

MultistartResult multistart(const FunctionalSpec& spec, const ConstraintSet& c, const std::vector<Seed>& seeds,
                            const SolveOptions& opts, int jobs) {
  const std::size_t n = seeds.size();
  std::vector<std::optional<SolveReport>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        slots[i] = minimize(spec, c, seeds[i].curve, opts);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int threads = std::clamp(jobs, 1, static_cast<int>(std::max<std::size_t>(n, 1)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  MultistartResult out;
  for (auto& s : slots) out.reports.push_back(std::move(*s));
  const int k = static_cast<int>(n);
  out.sup_distance = Eigen::MatrixXd::Zero(k, k);
  out.h2_distance = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      const auto& a = out.reports[static_cast<std::size_t>(i)].minimizer;
      const auto& b = out.reports[static_cast<std::size_t>(j)].minimizer;
      out.sup_distance(i, j) = out.sup_distance(j, i) = sup_distance(a, b);
      out.h2_distance(i, j) = out.h2_distance(j, i) = h2_distance(a, b);
    }
  }
  out.cluster = cluster_labels(out.sup_distance);
  out.cluster_count = out.cluster.empty() ? 0 : *std::max_element(out.cluster.begin(), out.cluster.end()) + 1;
  return out;
}

}  // namespace varcurve
