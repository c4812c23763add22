#include <cmath>
#include <string>

#include "rgrasp/solvers.hpp"

namespace rgrasp {

const char* to_string(InnerMode mode) noexcept { return mode == InnerMode::plain ? "plain" : "fast"; }

const char* to_string(InnerScope scope) noexcept {
  return scope == InnerScope::restricted ? "restricted" : "unrestricted";
}

InnerScope parse_inner_scope(std::string_view name) {
  if (name == "restricted") {
    return InnerScope::restricted;
  }
  if (name == "unrestricted") {
    return InnerScope::unrestricted;
  }
  throw InvalidArgument("unknown inner scope '" + std::string(name) + "'");
}

void SolverConfig::validate(std::size_t dim) const {
  if (sparsity == 0 || sparsity > dim) {
    throw InvalidArgument("SolverConfig: sparsity must satisfy 1 <= s <= d (s=" + std::to_string(sparsity) +
                          ", d=" + std::to_string(dim) + ")");
  }
  if (!std::isfinite(eta) || eta < 0.0) {
    throw InvalidArgument("SolverConfig: step size must be finite and non-negative");
  }
  if (mode == InnerMode::fast && epoch_length > 0 && (ht_per_epoch == 0 || ht_per_epoch > epoch_length)) {
    throw InvalidArgument("SolverConfig: fast mode needs 1 <= m <= J");
  }
  if (pass_budget && !(*pass_budget >= 0.0)) {
    throw InvalidArgument("SolverConfig: pass budget must be non-negative");
  }
}

std::size_t default_epoch_length(std::size_t samples) noexcept { return 2 * samples; }

std::vector<std::size_t> fast_threshold_schedule(std::size_t epoch_length, std::size_t ht_per_epoch) {
  std::vector<std::size_t> out;
  if (epoch_length == 0 || ht_per_epoch == 0) {
    return out;
  }
  const std::size_t period = (epoch_length + ht_per_epoch - 1) / ht_per_epoch;
  for (std::size_t j = period; j <= epoch_length; j += period) {
    out.push_back(j);
  }
  return out;
}

namespace {

void check_epoch_input(const Objective& obj, const EpochInput& in) {
  const std::size_t d = obj.dim();
  if (in.support == nullptr) {
    throw InvalidArgument("semi_stochastic_epoch: missing support set");
  }
  if (in.x_start.size() != d || in.gradient.size() != d) {
    throw InvalidArgument("semi_stochastic_epoch: dimension mismatch");
  }
  if (in.snapshot_margins.size() != obj.components()) {
    throw InvalidArgument("semi_stochastic_epoch: snapshot margin count does not match sample count");
  }
  if (!in.support->fits(d)) {
    throw InvalidArgument("semi_stochastic_epoch: support index out of range");
  }
}

}  // namespace

DenseVector semi_stochastic_epoch(const Objective& obj, const EpochInput& in, const SolverConfig& cfg, Rng& rng,
                                  WorkCounters& counters) {
  check_epoch_input(obj, in);
  const std::size_t d = obj.dim();
  const std::size_t n = obj.components();
  const std::size_t J = cfg.epoch_length;
  const SupportSet& support = *in.support;
  if (J == 0) {
    return DenseVector(in.x_start.begin(), in.x_start.end());
  }
  if (n == 0) {
    throw InvalidArgument("semi_stochastic_epoch: empty dataset");
  }
  const bool restricted = cfg.scope == InnerScope::restricted;
  const bool fast = cfg.mode == InnerMode::fast;
  const double eta = cfg.eta;

  // z^j = u - eta * (j - anchor) * g_eff, with u changed only on sample supports.
  DenseVector u;
  DenseVector g_eff;
  std::vector<char> in_scope;
  if (restricted) {
    u = restrict(in.x_start, support);
    g_eff = restrict(in.gradient, support);
    in_scope.assign(d, 0);
    for (const std::size_t i : support) {
      in_scope[i] = 1;
    }
  } else {
    u.assign(in.x_start.begin(), in.x_start.end());
    g_eff.assign(in.gradient.begin(), in.gradient.end());
  }
  std::size_t anchor = 0;

  const auto materialize = [&](std::size_t j) {
    const double shift = eta * static_cast<double>(j - anchor);
    if (shift != 0.0) {
      if (restricted) {
        for (const std::size_t i : support) {
          u[i] -= shift * g_eff[i];
        }
      } else {
        for (std::size_t i = 0; i < d; ++i) {
          u[i] -= shift * g_eff[i];
        }
      }
    }
    anchor = j;
  };

  const std::size_t period = fast ? (J + cfg.ht_per_epoch - 1) / cfg.ht_per_epoch : 0;
  const std::size_t threshold_size = std::max<std::size_t>(support.size(), 1);
  const SparseDataset& data = obj.data();

  for (std::size_t j = 1; j <= J; ++j) {
    const std::size_t i = rng.index(n);
    const SparseColumnView col = data.column(i);
    double dot_u = 0.0;
    double dot_g = 0.0;
    for (std::size_t k = 0; k < col.nnz(); ++k) {
      const std::size_t idx = col.indices[k];
      dot_u += col.values[k] * u[idx];
      dot_g += col.values[k] * g_eff[idx];
    }
    const double margin = dot_u - eta * static_cast<double>(j - 1 - anchor) * dot_g;
    if (!std::isfinite(margin)) {
      throw Diverged("semi_stochastic_epoch: non-finite iterate", j);
    }
    const double y = data.response(i);
    const double delta = obj.coefficient(margin, y) - obj.coefficient(in.snapshot_margins[i], y);
    counters.component_grads += 2;
    if (delta != 0.0) {
      const double scale = -eta * delta;
      if (restricted) {
        for (std::size_t k = 0; k < col.nnz(); ++k) {
          const std::size_t idx = col.indices[k];
          if (in_scope[idx] != 0) {
            u[idx] += scale * col.values[k];
          }
        }
      } else {
        add_scaled(u, scale, col);
      }
    }
    if (fast && j % period == 0) {
      materialize(j);
      if (!all_finite(u)) {
        throw Diverged("semi_stochastic_epoch: non-finite iterate", j);
      }
      hard_threshold_inplace(u, std::min(threshold_size, d));
      ++counters.ht_ops;
      if (in.on_threshold) {
        in.on_threshold(j);
      }
    }
  }
  materialize(J);
  if (!all_finite(u)) {
    throw Diverged("semi_stochastic_epoch: non-finite iterate", J);
  }
  return u;
}

DenseVector semi_stochastic_epoch(const Objective& obj, std::span<const double> x_start, const SupportSet& support,
                                  const SolverConfig& cfg, Rng& rng, WorkCounters& counters) {
  const GradientWithMargins gm = full_gradient_with_margins(obj, x_start);
  ++counters.data_passes;
  EpochInput in;
  in.x_start = x_start;
  in.gradient = gm.gradient;
  in.snapshot_margins = gm.margins;
  in.support = &support;
  return semi_stochastic_epoch(obj, in, cfg, rng, counters);
}

InnerSolver semi_stochastic_solver(const SolverConfig& cfg) {
  InnerSolver inner;
  inner.name = cfg.mode == InnerMode::fast ? "svrgsp+" : "svrgsp";
  inner.solve = [cfg](const Objective& obj, const InnerContext& ctx, WorkCounters& counters) {
    // Each outer iteration draws from its own stream.
    Rng rng(cfg.seed, ctx.outer_iteration);
    EpochInput in;
    in.x_start = ctx.x_prev;
    in.gradient = ctx.gradient;
    in.snapshot_margins = ctx.snapshot_margins;
    in.support = ctx.support;
    return semi_stochastic_epoch(obj, in, cfg, rng, counters);
  };
  const std::size_t J = cfg.epoch_length;
  inner.nominal_passes = [J](std::size_t samples) {
    return samples == 0 ? 0.0 : 2.0 * static_cast<double>(J) / static_cast<double>(samples);
  };
  return inner;
}

}  // namespace rgrasp
