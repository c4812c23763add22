#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <memory>
#include <mutex>
#include <thread>

#include "rgrasp/bench.hpp"

namespace rgrasp {

std::size_t worker_count_from_env() {
  if (const char* env = std::getenv("RGRASP_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) {
      return v;
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<double> default_eta_grid(SolverKind kind, const Objective& obj, std::size_t sparsity, InnerScope scope) {
  const double curvature = obj.kind() == LossKind::logistic ? 0.25 : 1.0;
  const bool restricted_family =
      (kind == SolverKind::svrgsp || kind == SolverKind::svrgsp_plus) && scope == InnerScope::restricted;
  double lipschitz;
  int top_exponent = -1;
  if (restricted_family) {
    const double width = static_cast<double>(std::min(3 * sparsity, obj.dim()));
    lipschitz = curvature * width * mean_squared_entry(obj.data());
    top_exponent = 1;
  } else {
    lipschitz = curvature * max_column_norm_squared(obj.data());
  }
  if (!(lipschitz > 0.0)) {
    lipschitz = 1.0;
  }
  std::vector<double> grid;
  for (int e = -10; e <= top_exponent; ++e) {
    grid.push_back(std::ldexp(1.0, e) / lipschitz);
  }
  return grid;
}

namespace {

struct LoadedData {
  std::shared_ptr<const SparseDataset> data;
  std::optional<GroundTruth> truth;
};

LoadedData load_data(const DataSource& src) {
  LoadedData out;
  SparseDataset ds;
  if (src.synthetic) {
    SyntheticInstance inst = generate_synthetic(*src.synthetic);
    ds = std::move(inst.data);
    out.truth = std::move(inst.truth);
  } else {
    ds = parse_libsvm(src.path, src.libsvm);
  }
  if (src.normalize) {
    ds = normalize_samples(ds);
  }
  out.data = std::make_shared<const SparseDataset>(std::move(ds));
  return out;
}

struct Task {
  std::size_t solver_index;
  std::size_t eta_index;
  std::size_t seed_index;
  double eta;
};

SolverConfig make_solver_config(const ExperimentConfig& cfg, SolverKind kind, double eta, std::uint64_t seed,
                                std::size_t samples) {
  SolverConfig sc;
  sc.sparsity = cfg.sparsity;
  sc.eta = eta;
  sc.epoch_length = cfg.epoch_length.value_or(static_cast<std::size_t>(
      std::max(1.0, std::round(cfg.epoch_per_sample * static_cast<double>(samples)))));
  sc.ht_per_epoch = std::min(cfg.ht_per_epoch, sc.epoch_length);
  sc.scope = cfg.scope;
  sc.seed = seed;
  sc.mode = kind == SolverKind::svrgsp_plus ? InnerMode::fast : InnerMode::plain;
  sc.pass_budget = cfg.pass_budget;
  const double per_iteration = passes_per_iteration(kind, sc, samples);
  sc.outer_iterations = static_cast<std::size_t>(std::ceil(cfg.pass_budget / per_iteration)) + 1;
  return sc;
}

std::filesystem::path reference_cache_path(const ExperimentConfig& cfg) {
  std::filesystem::path p = cfg.data.path;
  p += std::string(".fstar-") + to_string(cfg.objective) + "-s" + std::to_string(cfg.sparsity) + "-b" +
       std::to_string(static_cast<long long>(std::llround(cfg.pass_budget)));
  return p;
}

double reference_run(const ExperimentConfig& cfg, const Objective& obj) {
  SolverConfig sc = make_solver_config(cfg, SolverKind::svrgsp_plus, 0.0, cfg.seeds.front(), obj.components());
  sc.eta = cfg.reference_eta.value_or(
      default_eta_grid(SolverKind::svrgsp_plus, obj, cfg.sparsity, cfg.scope)[7]);  // 2^-3 / L
  sc.pass_budget = 10.0 * cfg.pass_budget;
  sc.outer_iterations =
      static_cast<std::size_t>(std::ceil(*sc.pass_budget / passes_per_iteration(SolverKind::svrgsp_plus, sc,
                                                                                obj.components()))) + 1;
  RunOptions opts;
  opts.record_time = false;
  const DenseVector x0(obj.dim(), 0.0);
  const RunResult r = run_solver(SolverKind::svrgsp_plus, obj, sc, x0, opts);
  double best = std::numeric_limits<double>::infinity();
  for (const TraceRecord& rec : r.trace.records) {
    best = std::min(best, rec.objective);
  }
  return best;
}

std::optional<double> cached_reference(const ExperimentConfig& cfg, const Objective& obj) {
  const std::filesystem::path cache = reference_cache_path(cfg);
  if (std::ifstream in(cache); in) {
    double v = 0.0;
    if (in >> v) {
      return v;
    }
  }
  const double v = reference_run(cfg, obj);
  if (std::ofstream out(cache); out) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g\n", v);
    out << buf;
  }
  return v;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const LoadedData loaded = load_data(cfg.data);
  const Objective obj(cfg.objective, loaded.data);
  const std::size_t n = obj.components();
  const DenseVector x0(obj.dim(), 0.0);

  std::vector<std::vector<double>> grids;
  std::vector<Task> tasks;
  for (std::size_t si = 0; si < cfg.solvers.size(); ++si) {
    const SolverEntry& entry = cfg.solvers[si];
    grids.push_back(entry.etas.empty() ? default_eta_grid(entry.kind, obj, cfg.sparsity, cfg.scope) : entry.etas);
    for (std::size_t ei = 0; ei < grids.back().size(); ++ei) {
      for (std::size_t ki = 0; ki < cfg.seeds.size(); ++ki) {
        tasks.push_back({si, ei, ki, grids.back()[ei]});
      }
    }
  }

  std::vector<RunResult> results(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  RunOptions opts;
  opts.record_time = cfg.record_time;
  if (loaded.truth) {
    opts.x_star = loaded.truth->x_star;
  }

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t k = next++; k < tasks.size(); k = next++) {
      const Task& task = tasks[k];
      const SolverKind kind = cfg.solvers[task.solver_index].kind;
      try {
        const SolverConfig sc = make_solver_config(cfg, kind, task.eta, cfg.seeds[task.seed_index], n);
        results[k] = run_solver(kind, obj, sc, x0, opts);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::min(cfg.threads ? cfg.threads : worker_count_from_env(), tasks.size());
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back(worker);
    }
  }
  for (const auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }

  ExperimentResult out;
  ReferenceMode mode = cfg.reference;
  if (mode == ReferenceMode::automatic) {
    mode = loaded.truth ? ReferenceMode::truth : ReferenceMode::run;
  }
  if (cfg.f_star) {
    out.f_star = cfg.f_star;
  } else if (mode == ReferenceMode::truth) {
    out.f_star = loss(obj, loaded.truth->x_star);
  } else if (mode == ReferenceMode::run) {
    double observed = std::numeric_limits<double>::infinity();
    for (const RunResult& r : results) {
      for (const TraceRecord& rec : r.trace.records) {
        observed = std::min(observed, rec.objective);
      }
    }
    const double ref = cfg.data.synthetic ? reference_run(cfg, obj) : *cached_reference(cfg, obj);
    out.f_star = std::min(ref, observed);
  }

  // Per solver: the eta with the lowest median final objective across seeds.
  std::vector<std::size_t> best_eta(cfg.solvers.size(), 0);
  for (std::size_t si = 0; si < cfg.solvers.size(); ++si) {
    double best_score = std::numeric_limits<double>::infinity();
    for (std::size_t ei = 0; ei < grids[si].size(); ++ei) {
      std::vector<double> finals;
      for (std::size_t k = 0; k < tasks.size(); ++k) {
        if (tasks[k].solver_index == si && tasks[k].eta_index == ei) {
          const RunTrace& tr = results[k].trace;
          const double f = tr.diverged || tr.records.empty() ? std::numeric_limits<double>::infinity()
                                                             : tr.records.back().objective;
          finals.push_back(std::isfinite(f) ? f : std::numeric_limits<double>::infinity());
        }
      }
      std::sort(finals.begin(), finals.end());
      const double median = finals.size() % 2 == 1 ? finals[finals.size() / 2]
                                                   : 0.5 * (finals[finals.size() / 2 - 1] + finals[finals.size() / 2]);
      if (median < best_score) {
        best_score = median;
        best_eta[si] = ei;
      }
    }
  }

  // tasks are already in (solver, eta, seed) order.
  for (std::size_t k = 0; k < tasks.size(); ++k) {
    const Task& task = tasks[k];
    const RunTrace& tr = results[k].trace;
    for (const TraceRecord& rec : tr.records) {
      MetricRow row;
      row.solver = to_string(cfg.solvers[task.solver_index].kind);
      row.seed = cfg.seeds[task.seed_index];
      row.eta = task.eta;
      row.best = best_eta[task.solver_index] == task.eta_index;
      row.diverged = tr.diverged;
      row.iteration = rec.iteration;
      row.passes = rec.passes;
      row.seconds = rec.seconds;
      row.objective = rec.objective;
      if (out.f_star) {
        row.log_objective_gap = objective_gap(rec.objective, *out.f_star);
      }
      row.estimation_error = rec.estimation_error;
      row.ht_ops = rec.ht_ops;
      row.component_grads = rec.component_grads;
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

}  // namespace rgrasp
