#include <cmath>
#include <string>

#include "rgrasp/solvers.hpp"
#include "trace_recorder.hpp"

namespace rgrasp {

namespace {

void check_x0(const Objective& obj, std::span<const double> x0, const char* where) {
  if (x0.size() != obj.dim()) {
    throw InvalidArgument(std::string(where) + ": x0 dimension mismatch");
  }
}

}  // namespace

RunResult fght_run(const Objective& obj, const SolverConfig& cfg, std::span<const double> x0,
                   const RunOptions& opts) {
  cfg.validate(obj.dim());
  check_x0(obj, x0, "fght_run");
  const std::size_t n = obj.components();
  detail::TraceRecorder recorder(obj, opts);
  WorkCounters counters;
  DenseVector x(x0.begin(), x0.end());

  recorder.record(0, x, counters);
  recorder.resume();
  for (std::size_t t = 1; t <= cfg.outer_iterations; ++t) {
    if (!detail::within_budget(cfg, counters.passes(n), 1.0)) {
      break;
    }
    const DenseVector g = full_gradient(obj, x);
    ++counters.data_passes;
    DenseVector next(x);
    for (std::size_t i = 0; i < next.size(); ++i) {
      next[i] -= cfg.eta * g[i];
    }
    if (!all_finite(next)) {
      recorder.mark_diverged(t);
      break;
    }
    hard_threshold_inplace(next, cfg.sparsity);
    ++counters.ht_ops;
    x = std::move(next);
    const double f = recorder.record(t, x, counters);
    if (recorder.runaway(f)) {
      recorder.mark_diverged(t);
      break;
    }
  }
  return {std::move(x), recorder.take()};
}

RunResult sght_run(const Objective& obj, const SolverConfig& cfg, std::span<const double> x0,
                   const RunOptions& opts) {
  cfg.validate(obj.dim());
  check_x0(obj, x0, "sght_run");
  const std::size_t n = obj.components();
  const SparseDataset& data = obj.data();
  detail::TraceRecorder recorder(obj, opts);
  WorkCounters counters;
  DenseVector x(x0.begin(), x0.end());

  recorder.record(0, x, counters);
  recorder.resume();
  bool diverged = false;
  // One recorded iteration is n stochastic steps, i.e. one effective pass.
  for (std::size_t t = 1; t <= cfg.outer_iterations && !diverged; ++t) {
    if (n == 0 || !detail::within_budget(cfg, counters.passes(n), 1.0)) {
      break;
    }
    Rng rng(cfg.seed, t);
    for (std::size_t step = 0; step < n; ++step) {
      const std::size_t i = rng.index(n);
      const SparseColumnView col = data.column(i);
      const double margin = inner_product(col, x);
      ++counters.component_grads;
      if (!std::isfinite(margin)) {
        diverged = true;
        break;
      }
      add_scaled(x, -cfg.eta * obj.coefficient(margin, data.response(i)), col);
      if (!all_finite(x)) {
        diverged = true;
        break;
      }
      hard_threshold_inplace(x, cfg.sparsity);
      ++counters.ht_ops;
    }
    if (diverged) {
      recorder.mark_diverged(t);
      break;
    }
    const double f = recorder.record(t, x, counters);
    if (recorder.runaway(f)) {
      recorder.mark_diverged(t);
      break;
    }
  }
  return {std::move(x), recorder.take()};
}

DenseVector svrght_epoch(const Objective& obj, const EpochInput& in, const SolverConfig& cfg, Rng& rng,
                         WorkCounters& counters) {
  const std::size_t d = obj.dim();
  const std::size_t n = obj.components();
  if (in.x_start.size() != d || in.gradient.size() != d || in.snapshot_margins.size() != n) {
    throw InvalidArgument("svrght_epoch: dimension mismatch");
  }
  const SparseDataset& data = obj.data();
  DenseVector x(in.x_start.begin(), in.x_start.end());
  for (std::size_t j = 1; j <= cfg.epoch_length; ++j) {
    const std::size_t i = rng.index(n);
    const SparseColumnView col = data.column(i);
    const double margin = inner_product(col, x);
    if (!std::isfinite(margin)) {
      throw Diverged("svrght_epoch: non-finite iterate", j);
    }
    const double y = data.response(i);
    const double delta = obj.coefficient(margin, y) - obj.coefficient(in.snapshot_margins[i], y);
    counters.component_grads += 2;
    for (std::size_t k = 0; k < d; ++k) {
      x[k] -= cfg.eta * in.gradient[k];
    }
    add_scaled(x, -cfg.eta * delta, col);
    if (!all_finite(x)) {
      throw Diverged("svrght_epoch: non-finite iterate", j);
    }
    hard_threshold_inplace(x, cfg.sparsity);
    ++counters.ht_ops;
  }
  return x;
}

RunResult svrght_run(const Objective& obj, const SolverConfig& cfg, std::span<const double> x0,
                     const RunOptions& opts) {
  cfg.validate(obj.dim());
  check_x0(obj, x0, "svrght_run");
  const std::size_t n = obj.components();
  detail::TraceRecorder recorder(obj, opts);
  WorkCounters counters;
  DenseVector x(x0.begin(), x0.end());
  const double epoch_cost = passes_per_iteration(SolverKind::svrght, cfg, n);

  recorder.record(0, x, counters);
  recorder.resume();
  for (std::size_t t = 1; t <= cfg.outer_iterations; ++t) {
    if (n == 0 || !detail::within_budget(cfg, counters.passes(n), epoch_cost)) {
      break;
    }
    DenseVector snapshot = hard_threshold(x, cfg.sparsity);
    ++counters.ht_ops;
    const GradientWithMargins gm = full_gradient_with_margins(obj, snapshot);
    ++counters.data_passes;
    EpochInput in;
    in.x_start = snapshot;
    in.gradient = gm.gradient;
    in.snapshot_margins = gm.margins;
    Rng rng(cfg.seed, t);
    try {
      x = svrght_epoch(obj, in, cfg, rng, counters);
    } catch (const Diverged&) {
      recorder.mark_diverged(t);
      break;
    }
    const double f = recorder.record(t, x, counters);
    if (recorder.runaway(f)) {
      recorder.mark_diverged(t);
      break;
    }
  }
  return {std::move(x), recorder.take()};
}

const char* to_string(SolverKind kind) noexcept {
  switch (kind) {
    case SolverKind::grasp:
      return "grasp";
    case SolverKind::fght:
      return "fght";
    case SolverKind::sght:
      return "sght";
    case SolverKind::svrght:
      return "svrght";
    case SolverKind::svrgsp:
      return "svrgsp";
    case SolverKind::svrgsp_plus:
      return "svrgsp+";
  }
  return "unknown";
}

SolverKind parse_solver_kind(std::string_view name) {
  for (const SolverKind k : {SolverKind::grasp, SolverKind::fght, SolverKind::sght, SolverKind::svrght,
                             SolverKind::svrgsp, SolverKind::svrgsp_plus}) {
    if (name == to_string(k)) {
      return k;
    }
  }
  if (name == "svrgsp_plus") {
    return SolverKind::svrgsp_plus;
  }
  throw InvalidArgument("unknown solver '" + std::string(name) + "'");
}

RunResult run_solver(SolverKind kind, const Objective& obj, const SolverConfig& cfg, std::span<const double> x0,
                     const RunOptions& opts) {
  switch (kind) {
    case SolverKind::grasp:
      return grasp_run(obj, cfg, x0, opts);
    case SolverKind::fght:
      return fght_run(obj, cfg, x0, opts);
    case SolverKind::sght:
      return sght_run(obj, cfg, x0, opts);
    case SolverKind::svrght:
      return svrght_run(obj, cfg, x0, opts);
    case SolverKind::svrgsp:
    case SolverKind::svrgsp_plus: {
      SolverConfig c = cfg;
      c.mode = kind == SolverKind::svrgsp ? InnerMode::plain : InnerMode::fast;
      return svrgsp_run(obj, c, x0, opts);
    }
  }
  throw InvalidArgument("run_solver: unknown solver kind");
}

double passes_per_iteration(SolverKind kind, const SolverConfig& cfg, std::size_t samples) noexcept {
  const double inner = samples == 0 ? 0.0 : 2.0 * static_cast<double>(cfg.epoch_length) / static_cast<double>(samples);
  switch (kind) {
    case SolverKind::grasp:
      return 2.0;
    case SolverKind::fght:
    case SolverKind::sght:
      return 1.0;
    case SolverKind::svrght:
    case SolverKind::svrgsp:
    case SolverKind::svrgsp_plus:
      return 1.0 + inner;
  }
  return 1.0;
}

}  // namespace rgrasp
