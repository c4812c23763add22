#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rgrasp/core.hpp"
#include "rgrasp/objectives.hpp"
#include "rgrasp/rng.hpp"

namespace rgrasp {

/// A non-finite iterate or runaway objective. Carries the inner step (or
/// outer iteration) at which it was detected.
class Diverged : public std::runtime_error {
 public:
  Diverged(const std::string& what, std::size_t iteration)
      : std::runtime_error(what + " (iteration " + std::to_string(iteration) + ")"), iteration_(iteration) {}
  [[nodiscard]] std::size_t iteration() const noexcept { return iteration_; }

 private:
  std::size_t iteration_;
};

/// plain: no thresholding inside an epoch. fast: H_{|T|} every ceil(J/m) steps.
enum class InnerMode { plain, fast };

/// Where the semi-stochastic inner steps live.
///
/// restricted: every step is the gradient of the sub-problem over T, so the
///   iterate stays supported on T. This is the default.
/// unrestricted: steps use the full d-dimensional gradient and T is imposed
///   only when the epoch output is restricted to T.
enum class InnerScope { restricted, unrestricted };

const char* to_string(InnerMode mode) noexcept;
const char* to_string(InnerScope scope) noexcept;
InnerScope parse_inner_scope(std::string_view name);

struct SolverConfig {
  std::size_t sparsity = 1;          // s
  double eta = 0.0;                  // step size
  std::size_t epoch_length = 0;      // J, inner steps per epoch
  std::size_t ht_per_epoch = 6;      // m, fast mode only
  std::size_t outer_iterations = 1;  // T
  InnerMode mode = InnerMode::plain;
  InnerScope scope = InnerScope::restricted;
  std::uint64_t seed = 0;
  std::optional<double> c1;           // descent-condition audit tolerance, tests only
  std::optional<double> pass_budget;  // stop before an iteration would exceed this many passes

  /// Throws InvalidArgument when s is not in [1, dim], eta is negative or
  /// non-finite, or fast mode has m outside [1, J].
  void validate(std::size_t dim) const;
};

/// J = 2n, the usual epoch length.
std::size_t default_epoch_length(std::size_t samples) noexcept;

/// Work tallies. Effective passes are derived: every full-data sweep
/// counts 1, every component-gradient evaluation counts 1/n.
struct WorkCounters {
  std::uint64_t data_passes = 0;
  std::uint64_t component_grads = 0;
  std::uint64_t ht_ops = 0;

  [[nodiscard]] double passes(std::size_t samples) const noexcept {
    return static_cast<double>(data_passes) +
           (samples == 0 ? 0.0 : static_cast<double>(component_grads) / static_cast<double>(samples));
  }
};

struct TraceRecord {
  std::size_t iteration = 0;
  double objective = 0.0;
  std::optional<double> estimation_error;
  double passes = 0.0;
  double seconds = 0.0;
  std::uint64_t ht_ops = 0;
  std::uint64_t component_grads = 0;
  std::size_t support_size = 0;
};

struct RunTrace {
  std::vector<TraceRecord> records;
  bool diverged = false;
  std::optional<std::size_t> diverged_at;
  std::vector<std::string> warnings;
};

struct RunResult {
  DenseVector x;
  RunTrace trace;
};

struct RunOptions {
  /// Ground truth for the estimation-error column; empty when unknown.
  std::span<const double> x_star;
  /// When false, the seconds column stays 0 (byte-reproducible traces).
  bool record_time = true;
};

/// What the framework hands to the inner solver at outer iteration t.
struct InnerContext {
  std::size_t outer_iteration = 0;
  std::span<const double> x_prev;
  std::span<const double> gradient;          // grad F(x_prev)
  std::span<const double> snapshot_margins;  // w_i^T x_prev
  const SupportSet* support = nullptr;       // T
};

struct InnerSolver {
  std::string name;
  std::function<DenseVector(const Objective&, const InnerContext&, WorkCounters&)> solve;
  /// Passes one call is expected to consume, for budget planning.
  std::function<double(std::size_t samples)> nominal_passes;
};

// ---------------------------------------------------------------------------
// Inner solvers
// ---------------------------------------------------------------------------

/// Inner steps j in 1..J at which fast mode thresholds: j mod ceil(J/m) == 0.
std::vector<std::size_t> fast_threshold_schedule(std::size_t epoch_length, std::size_t ht_per_epoch);

struct EpochInput {
  std::span<const double> x_start;           // z^0 = snapshot
  std::span<const double> gradient;          // g = grad F(x_start)
  std::span<const double> snapshot_margins;  // w_i^T x_start
  const SupportSet* support = nullptr;       // T
  /// Called with j after each fast-mode thresholding.
  std::function<void(std::size_t)> on_threshold;
};

/// One epoch of the semi-stochastic solver.
///
/// z^j = z^{j-1} - eta (grad f_i(z^{j-1}) - grad f_i(snapshot) + g), i uniform
/// with replacement. The dense g term is applied lazily, so a step costs
/// O(nnz(w_i)) and the iterate is materialized only at thresholding points
/// and at the end. Throws Diverged on a non-finite iterate.
DenseVector semi_stochastic_epoch(const Objective& obj, const EpochInput& in, const SolverConfig& cfg, Rng& rng,
                                  WorkCounters& counters);

/// Convenience overload that evaluates g and the snapshot margins itself
/// (charged as one pass).
DenseVector semi_stochastic_epoch(const Objective& obj, std::span<const double> x_start, const SupportSet& support,
                                  const SolverConfig& cfg, Rng& rng, WorkCounters& counters);

InnerSolver semi_stochastic_solver(const SolverConfig& cfg);

struct RestrictedSolution {
  DenseVector x;
  bool rank_deficient = false;
  bool converged = true;
  std::size_t iterations = 0;
  double gradient_norm = 0.0;  // ||grad F(x)|_T||
  std::uint64_t passes = 0;
};

/// argmin F(x) s.t. x|_{T^c} = 0.
///
/// Least squares: solves the restricted normal equations through a
/// complete orthogonal decomposition of W_T^T; on rank deficiency the
/// minimum-norm solution is returned and rank_deficient is set.
/// Logistic: restricted gradient descent with Armijo backtracking until
/// the restricted gradient norm is at most tol, or max_iterations is hit
/// (converged = false, best iterate returned).
RestrictedSolution restricted_minimize(const Objective& obj, const SupportSet& support, std::span<const double> x_start,
                                       double tol, std::size_t max_iterations = 2000);

InnerSolver exact_restricted_solver(double tol = 1e-10, std::size_t max_iterations = 2000);

/// ||b - b_hat|| <= c1 ||x_prev - b_hat||
bool audit_descent(std::span<const double> b, std::span<const double> b_hat, std::span<const double> x_prev,
                   double c1);

/// ||b - b_hat|| / ||x_prev - b_hat||; +inf when the denominator is zero and b != b_hat.
double descent_ratio(std::span<const double> b, std::span<const double> b_hat, std::span<const double> x_prev);

// ---------------------------------------------------------------------------
// Runs
// ---------------------------------------------------------------------------

/// Relaxed gradient support pursuit:
///   g = grad F(x), Z = supp(g, 2s), T = Z u supp(x), b = inner(x, T),
///   b|_{T^c} = 0, x = H_s(b).
/// One trace record per outer iteration plus the initial point.
RunResult rgrasp_run(const Objective& obj, const SolverConfig& cfg, const InnerSolver& inner,
                     std::span<const double> x0, const RunOptions& opts = {});

/// rgrasp_run with the semi-stochastic inner solver (SVRGSP, or SVRGSP+ when cfg.mode is fast).
RunResult svrgsp_run(const Objective& obj, const SolverConfig& cfg, std::span<const double> x0,
                     const RunOptions& opts = {});

/// rgrasp_run with the exact restricted minimizer.
RunResult grasp_run(const Objective& obj, const SolverConfig& cfg, std::span<const double> x0,
                    const RunOptions& opts = {});

/// x = H_s(x - eta grad F(x)); one pass and one HT per iteration.
RunResult fght_run(const Objective& obj, const SolverConfig& cfg, std::span<const double> x0,
                   const RunOptions& opts = {});

/// x = H_s(x - eta grad f_i(x)); one HT per step. One trace record per
/// n steps (one effective pass).
RunResult sght_run(const Objective& obj, const SolverConfig& cfg, std::span<const double> x0,
                   const RunOptions& opts = {});

/// One SVRGHT epoch from a thresholded snapshot: J steps, each followed by H_s.
DenseVector svrght_epoch(const Objective& obj, const EpochInput& in, const SolverConfig& cfg, Rng& rng,
                         WorkCounters& counters);

/// SVRG outer loop with a hard threshold at every inner step. Each epoch
/// thresholds its snapshot once and every inner iterate, J + 1 HT in total.
RunResult svrght_run(const Objective& obj, const SolverConfig& cfg, std::span<const double> x0,
                     const RunOptions& opts = {});

enum class SolverKind { grasp, fght, sght, svrght, svrgsp, svrgsp_plus };

const char* to_string(SolverKind kind) noexcept;
SolverKind parse_solver_kind(std::string_view name);

/// Dispatches to the matching run function. svrgsp/svrgsp_plus override cfg.mode.
RunResult run_solver(SolverKind kind, const Objective& obj, const SolverConfig& cfg, std::span<const double> x0,
                     const RunOptions& opts = {});

/// Passes consumed by one outer iteration of the given solver (nominal for
/// logistic GraSP, whose inner descent length varies).
double passes_per_iteration(SolverKind kind, const SolverConfig& cfg, std::size_t samples) noexcept;

}  // namespace rgrasp
