#pragma once

#include <chrono>
#include <cmath>

#include "rgrasp/solvers.hpp"

namespace rgrasp::detail {

// Accumulates solver-only wall time; monitoring work runs while paused.
class Stopwatch {
 public:
  void resume() {
    if (!running_) {
      started_ = std::chrono::steady_clock::now();
      running_ = true;
    }
  }
  void pause() {
    if (running_) {
      elapsed_ += std::chrono::steady_clock::now() - started_;
      running_ = false;
    }
  }
  [[nodiscard]] double seconds() const {
    auto total = elapsed_;
    if (running_) {
      total += std::chrono::steady_clock::now() - started_;
    }
    return std::chrono::duration<double>(total).count();
  }

 private:
  std::chrono::steady_clock::duration elapsed_{};
  std::chrono::steady_clock::time_point started_{};
  bool running_ = false;
};

// Objective above this multiple of the starting objective aborts the run.
inline constexpr double kRunawayFactor = 1e6;
// Keeps the runaway test meaningful when the start is an exact fit.
inline constexpr double kRunawayFloor = 1e-12;

class TraceRecorder {
 public:
  TraceRecorder(const Objective& obj, const RunOptions& opts) : obj_(obj), opts_(opts) {}

  void resume() { watch_.resume(); }
  void pause() { watch_.pause(); }

  // Appends a record for iterate x and returns its objective value.
  double record(std::size_t iteration, std::span<const double> x, const WorkCounters& counters) {
    watch_.pause();
    TraceRecord r;
    r.iteration = iteration;
    r.objective = loss(obj_, x);
    if (!opts_.x_star.empty()) {
      const double ref = norm2(opts_.x_star);
      if (ref > 0.0) {
        r.estimation_error = distance2(x, opts_.x_star) / ref;
      }
    }
    r.passes = counters.passes(obj_.components());
    r.seconds = opts_.record_time ? watch_.seconds() : 0.0;
    r.ht_ops = counters.ht_ops;
    r.component_grads = counters.component_grads;
    r.support_size = count_nonzeros(x);
    if (trace_.records.empty()) {
      start_objective_ = r.objective;
    }
    trace_.records.push_back(r);
    watch_.resume();
    return r.objective;
  }

  [[nodiscard]] bool runaway(double objective) const {
    return !std::isfinite(objective) || objective > kRunawayFactor * std::max(start_objective_, kRunawayFloor);
  }

  void mark_diverged(std::size_t iteration) {
    trace_.diverged = true;
    trace_.diverged_at = iteration;
  }

  void warn(std::string message) { trace_.warnings.push_back(std::move(message)); }

  RunTrace take() {
    watch_.pause();
    return std::move(trace_);
  }

 private:
  const Objective& obj_;
  const RunOptions& opts_;
  Stopwatch watch_;
  RunTrace trace_;
  double start_objective_ = 0.0;
};

inline bool within_budget(const SolverConfig& cfg, double used, double next_cost) {
  return !cfg.pass_budget || used + next_cost <= *cfg.pass_budget + 1e-9;
}

}  // namespace rgrasp::detail
