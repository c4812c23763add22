#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rgrasp/data.hpp"
#include "rgrasp/objectives.hpp"
#include "rgrasp/solvers.hpp"

namespace rgrasp {

class UndefinedMetric : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// ||x - x*|| / ||x*||. Throws UndefinedMetric when x* = 0.
double estimation_error(std::span<const double> x, std::span<const double> x_star);

/// Floor added inside the logarithm of objective_gap.
inline constexpr double kGapFloor = 1e-15;

/// log10(F(x) - f_star + floor). A slightly negative gap (f_star from an
/// approximate reference) is treated as zero.
double objective_gap(const Objective& obj, std::span<const double> x, double f_star);
double objective_gap(double objective, double f_star) noexcept;

struct DataSource {
  std::optional<SyntheticSpec> synthetic;  // set: generate; unset: read `path`
  std::filesystem::path path;
  LibsvmOptions libsvm;
  bool normalize = false;
};

struct SolverEntry {
  SolverKind kind = SolverKind::svrgsp;
  std::vector<double> etas;  // empty: default grid
};

enum class ReferenceMode { automatic, none, truth, run };

struct ExperimentConfig {
  DataSource data;
  LossKind objective = LossKind::least_squares;
  std::size_t sparsity = 1;
  std::vector<SolverEntry> solvers;
  double pass_budget = 30.0;
  std::vector<std::uint64_t> seeds{1};
  double epoch_per_sample = 2.0;             // J = epoch_per_sample * n ...
  std::optional<std::size_t> epoch_length;   // ... unless given explicitly
  std::size_t ht_per_epoch = 6;
  InnerScope scope = InnerScope::restricted;
  ReferenceMode reference = ReferenceMode::automatic;
  std::optional<double> f_star;
  std::optional<double> reference_eta;
  bool record_time = true;
  std::filesystem::path output;
  std::size_t threads = 0;  // 0: RGRASP_THREADS, else hardware concurrency

  void validate() const;
};

/// Reads the flat `key = value` config format (see README). Relative data
/// and output paths resolve against the config file's directory.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
ExperimentConfig parse_experiment_config(std::istream& in, const std::filesystem::path& base_dir = {},
                                         const std::string& source_name = "<config>");

struct MetricRow {
  std::string solver;
  std::uint64_t seed = 0;
  double eta = 0.0;
  bool best = false;
  bool diverged = false;
  std::size_t iteration = 0;
  double passes = 0.0;
  double seconds = 0.0;
  double objective = 0.0;
  std::optional<double> log_objective_gap;
  std::optional<double> estimation_error;
  std::uint64_t ht_ops = 0;
  std::uint64_t component_grads = 0;

  friend bool operator==(const MetricRow&, const MetricRow&) = default;
};

struct ExperimentResult {
  std::vector<MetricRow> rows;
  std::optional<double> f_star;
};

/// Default step-size grid {2^-10, ..., 2^-1} / L. L is max_i ||w_i||^2 for
/// least squares (a quarter of that for logistic). For SVRGSP/SVRGSP+ in
/// restricted scope L is min(3s, d) times the mean squared coordinate and
/// the grid runs up to 2^1.
std::vector<double> default_eta_grid(SolverKind kind, const Objective& obj, std::size_t sparsity, InnerScope scope);

/// Loads the data, runs every (solver, eta, seed) under the pass budget,
/// and returns one row per outer iteration in deterministic order.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Header names, in column order.
const std::vector<std::string>& csv_columns();

/// Header line then one line per row; reals with 17 significant digits,
/// missing optional metrics as empty fields.
void write_csv(std::ostream& out, const std::vector<MetricRow>& rows);
void emit_csv(const std::vector<MetricRow>& rows, const std::filesystem::path& path);
std::vector<MetricRow> read_csv(std::istream& in);

/// Worker count from RGRASP_THREADS, falling back to hardware concurrency.
std::size_t worker_count_from_env();

}  // namespace rgrasp
