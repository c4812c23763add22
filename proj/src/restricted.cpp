#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "rgrasp/solvers.hpp"

namespace rgrasp {

namespace {

// Position of each coordinate inside T, -1 when outside.
std::vector<std::ptrdiff_t> support_positions(const SupportSet& support, std::size_t dim) {
  std::vector<std::ptrdiff_t> pos(dim, -1);
  for (std::size_t k = 0; k < support.size(); ++k) {
    pos[support[k]] = static_cast<std::ptrdiff_t>(k);
  }
  return pos;
}

RestrictedSolution solve_least_squares(const Objective& obj, const SupportSet& support) {
  const SparseDataset& data = obj.data();
  const std::size_t n = data.samples();
  const std::size_t d = data.dim();
  const auto k = static_cast<Eigen::Index>(support.size());
  const std::vector<std::ptrdiff_t> pos = support_positions(support, d);

  // Rows are samples restricted to T.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), k);
  Eigen::VectorXd y(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const SparseColumnView col = data.column(i);
    for (std::size_t e = 0; e < col.nnz(); ++e) {
      const std::ptrdiff_t p = pos[col.indices[e]];
      if (p >= 0) {
        a(static_cast<Eigen::Index>(i), p) = col.values[e];
      }
    }
    y(static_cast<Eigen::Index>(i)) = data.response(i);
  }

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
  const Eigen::VectorXd b = cod.solve(y);

  RestrictedSolution out;
  out.x.assign(d, 0.0);
  for (Eigen::Index p = 0; p < k; ++p) {
    out.x[support[static_cast<std::size_t>(p)]] = b(p);
  }
  out.rank_deficient = cod.rank() < k;
  out.iterations = 1;
  out.passes = 1;
  const Eigen::VectorXd grad = a.transpose() * (a * b - y) / static_cast<double>(n);
  out.gradient_norm = grad.norm();
  return out;
}

struct RestrictedEval {
  double value = 0.0;
  DenseVector gradient;  // zero off T
};

RestrictedEval evaluate_restricted(const Objective& obj, const std::vector<char>& mask, std::span<const double> x) {
  const SparseDataset& data = obj.data();
  const std::size_t n = data.samples();
  RestrictedEval out{0.0, DenseVector(obj.dim(), 0.0)};
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const SparseColumnView col = data.column(i);
    const double m = inner_product(col, x);
    const double y = data.response(i);
    out.value += obj.component_value(m, y);
    const double c = obj.coefficient(m, y) * inv_n;
    for (std::size_t e = 0; e < col.nnz(); ++e) {
      if (mask[col.indices[e]] != 0) {
        out.gradient[col.indices[e]] += c * col.values[e];
      }
    }
  }
  out.value *= inv_n;
  return out;
}

double restricted_norm(std::span<const double> g, const SupportSet& support) {
  double acc = 0.0;
  for (const std::size_t i : support) {
    acc += g[i] * g[i];
  }
  return std::sqrt(acc);
}

RestrictedSolution descend_logistic(const Objective& obj, const SupportSet& support, std::span<const double> x_start,
                                    double tol, std::size_t max_iterations) {
  const std::size_t d = obj.dim();
  std::vector<char> mask(d, 0);
  for (const std::size_t i : support) {
    mask[i] = 1;
  }
  RestrictedSolution out;
  out.x = restrict(x_start, support);
  RestrictedEval cur = evaluate_restricted(obj, mask, out.x);
  out.passes = 1;

  // Initial step from the restricted smoothness bound 1/4 max_i ||w_i|_T||^2.
  double lipschitz = 0.0;
  for (std::size_t i = 0; i < obj.components(); ++i) {
    const SparseColumnView col = obj.data().column(i);
    double acc = 0.0;
    for (std::size_t e = 0; e < col.nnz(); ++e) {
      if (mask[col.indices[e]] != 0) {
        acc += col.values[e] * col.values[e];
      }
    }
    lipschitz = std::max(lipschitz, acc);
  }
  lipschitz *= 0.25;
  double step = lipschitz > 0.0 ? 1.0 / lipschitz : 1.0;

  double gnorm = restricted_norm(cur.gradient, support);
  DenseVector trial(d, 0.0);
  while (gnorm > tol && out.iterations < max_iterations) {
    bool accepted = false;
    for (int backtrack = 0; backtrack < 60; ++backtrack) {
      for (const std::size_t i : support) {
        trial[i] = out.x[i] - step * cur.gradient[i];
      }
      RestrictedEval next = evaluate_restricted(obj, mask, trial);
      ++out.passes;
      if (next.value <= cur.value - 0.5 * step * gnorm * gnorm) {
        out.x = trial;
        cur = std::move(next);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    ++out.iterations;
    if (!accepted) {
      break;  // step underflow: current point is as good as descent can do
    }
    gnorm = restricted_norm(cur.gradient, support);
    step *= 2.0;
  }
  out.gradient_norm = gnorm;
  out.converged = gnorm <= tol;
  return out;
}

}  // namespace

RestrictedSolution restricted_minimize(const Objective& obj, const SupportSet& support, std::span<const double> x_start,
                                       double tol, std::size_t max_iterations) {
  const std::size_t d = obj.dim();
  if (x_start.size() != d) {
    throw InvalidArgument("restricted_minimize: dimension mismatch");
  }
  if (!support.fits(d)) {
    throw InvalidArgument("restricted_minimize: support index out of range");
  }
  if (support.empty() || obj.components() == 0) {
    RestrictedSolution out;
    out.x.assign(d, 0.0);
    return out;
  }
  if (obj.kind() == LossKind::least_squares) {
    return solve_least_squares(obj, support);
  }
  return descend_logistic(obj, support, x_start, tol, max_iterations);
}

InnerSolver exact_restricted_solver(double tol, std::size_t max_iterations) {
  InnerSolver inner;
  inner.name = "exact";
  inner.solve = [tol, max_iterations](const Objective& obj, const InnerContext& ctx, WorkCounters& counters) {
    RestrictedSolution sol = restricted_minimize(obj, *ctx.support, ctx.x_prev, tol, max_iterations);
    counters.data_passes += sol.passes;
    return std::move(sol.x);
  };
  inner.nominal_passes = [](std::size_t) { return 1.0; };
  return inner;
}

bool audit_descent(std::span<const double> b, std::span<const double> b_hat, std::span<const double> x_prev,
                   double c1) {
  return distance2(b, b_hat) <= c1 * distance2(x_prev, b_hat);
}

double descent_ratio(std::span<const double> b, std::span<const double> b_hat, std::span<const double> x_prev) {
  const double num = distance2(b, b_hat);
  const double den = distance2(x_prev, b_hat);
  if (den == 0.0) {
    return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return num / den;
}

}  // namespace rgrasp
