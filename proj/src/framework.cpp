#include <algorithm>
#include <string>

#include "rgrasp/solvers.hpp"
#include "trace_recorder.hpp"

namespace rgrasp {

RunResult rgrasp_run(const Objective& obj, const SolverConfig& cfg, const InnerSolver& inner,
                     std::span<const double> x0, const RunOptions& opts) {
  const std::size_t d = obj.dim();
  const std::size_t n = obj.components();
  cfg.validate(d);
  if (x0.size() != d) {
    throw InvalidArgument("rgrasp_run: x0 dimension mismatch");
  }
  if (count_nonzeros(x0) > cfg.sparsity) {
    throw InvalidArgument("rgrasp_run: x0 has more than s nonzeros");
  }

  detail::TraceRecorder recorder(obj, opts);
  WorkCounters counters;
  DenseVector x(x0.begin(), x0.end());

  const std::size_t direction_count = std::min(2 * cfg.sparsity, d);
  if (direction_count < 2 * cfg.sparsity) {
    recorder.warn("2s exceeds d; direction set clamped to all " + std::to_string(d) + " coordinates");
  }
  const double iteration_cost = 1.0 + (inner.nominal_passes ? inner.nominal_passes(n) : 0.0);

  recorder.record(0, x, counters);
  recorder.resume();
  for (std::size_t t = 1; t <= cfg.outer_iterations; ++t) {
    if (!detail::within_budget(cfg, counters.passes(n), iteration_cost)) {
      break;
    }
    const GradientWithMargins gm = full_gradient_with_margins(obj, x);
    ++counters.data_passes;
    if (!all_finite(gm.gradient)) {
      recorder.mark_diverged(t);
      break;
    }
    const SupportSet directions = top_support(gm.gradient, direction_count);
    const SupportSet merged = merge_supports(directions, support_of(x));

    InnerContext ctx;
    ctx.outer_iteration = t;
    ctx.x_prev = x;
    ctx.gradient = gm.gradient;
    ctx.snapshot_margins = gm.margins;
    ctx.support = &merged;

    DenseVector b;
    try {
      b = inner.solve(obj, ctx, counters);
    } catch (const Diverged&) {
      recorder.mark_diverged(t);
      break;
    }
    if (!all_finite(b)) {
      recorder.mark_diverged(t);
      break;
    }
    b = restrict(b, merged);
    hard_threshold_inplace(b, cfg.sparsity);
    ++counters.ht_ops;
    x = std::move(b);

    const double f = recorder.record(t, x, counters);
    if (recorder.runaway(f)) {
      recorder.mark_diverged(t);
      break;
    }
  }
  return {std::move(x), recorder.take()};
}

RunResult svrgsp_run(const Objective& obj, const SolverConfig& cfg, std::span<const double> x0,
                     const RunOptions& opts) {
  return rgrasp_run(obj, cfg, semi_stochastic_solver(cfg), x0, opts);
}

RunResult grasp_run(const Objective& obj, const SolverConfig& cfg, std::span<const double> x0,
                    const RunOptions& opts) {
  // Logistic restricted descent is capped so one GraSP iteration stays within a few dozen passes.
  return rgrasp_run(obj, cfg, exact_restricted_solver(1e-10, 50), x0, opts);
}

}  // namespace rgrasp
