#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "rgrasp/core.hpp"

namespace rgrasp {

/// Read-only view of one sample w_i: parallel index/value arrays, indices
/// strictly increasing.
struct SparseColumnView {
  std::span<const std::uint32_t> indices;
  std::span<const double> values;

  [[nodiscard]] std::size_t nnz() const noexcept { return indices.size(); }
};

/// Design matrix W (d x n) stored as n sparse columns, plus responses y.
///
/// Storage is compressed: column i occupies [offsets[i], offsets[i+1]) of
/// the index and value arrays. Immutable once constructed.
class SparseDataset {
 public:
  SparseDataset() = default;

  /// Validates every invariant: offsets well formed, indices < dim and
  /// strictly increasing per column, values finite and nonzero, y finite
  /// with one entry per column.
  SparseDataset(std::size_t dim, std::vector<std::size_t> offsets, std::vector<std::uint32_t> indices,
                std::vector<double> values, std::vector<double> responses);

  [[nodiscard]] std::size_t samples() const noexcept { return responses_.size(); }
  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] std::size_t nnz() const noexcept { return values_.size(); }

  [[nodiscard]] SparseColumnView column(std::size_t i) const {
    const std::size_t lo = offsets_[i];
    const std::size_t hi = offsets_[i + 1];
    return {std::span<const std::uint32_t>(indices_).subspan(lo, hi - lo),
            std::span<const double>(values_).subspan(lo, hi - lo)};
  }
  [[nodiscard]] std::span<const double> responses() const noexcept { return responses_; }
  [[nodiscard]] double response(std::size_t i) const { return responses_[i]; }

  [[nodiscard]] std::span<const std::size_t> offsets() const noexcept { return offsets_; }
  [[nodiscard]] std::span<const std::uint32_t> indices() const noexcept { return indices_; }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }

  /// True when every response is -1 or +1.
  [[nodiscard]] bool has_sign_labels() const noexcept;

  friend bool operator==(const SparseDataset&, const SparseDataset&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::uint32_t> indices_;
  std::vector<double> values_;
  std::vector<double> responses_;
};

/// Incremental construction of a SparseDataset, one sample at a time.
class DatasetBuilder {
 public:
  explicit DatasetBuilder(std::size_t dim = 0) : dim_(dim) {}

  /// Appends a sample. Exact zeros are dropped; other invariants are checked by build().
  void add_sample(std::span<const std::uint32_t> indices, std::span<const double> values, double response);
  /// Appends a dense sample, storing only its nonzero coordinates.
  void add_dense_sample(std::span<const double> row, double response);

  /// Dimension grows to cover the largest index seen unless set explicitly larger.
  void set_dim(std::size_t dim) { dim_ = dim; }
  [[nodiscard]] std::size_t max_index_plus_one() const noexcept { return max_seen_; }
  [[nodiscard]] std::size_t samples() const noexcept { return responses_.size(); }

  SparseDataset build() &&;

 private:
  std::size_t dim_;
  std::size_t max_seen_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::uint32_t> indices_;
  std::vector<double> values_;
  std::vector<double> responses_;
};

enum class LossKind { least_squares, logistic };

const char* to_string(LossKind kind) noexcept;
LossKind parse_loss_kind(std::string_view name);

/// F(x) = (1/n) sum_i f_i(x) over a shared dataset.
///
/// least_squares: f_i(x) = 1/2 (y_i - w_i^T x)^2
/// logistic:      f_i(x) = log(1 + exp(-y_i w_i^T x)), y_i in {-1, +1}
class Objective {
 public:
  Objective(LossKind kind, std::shared_ptr<const SparseDataset> data);

  [[nodiscard]] LossKind kind() const noexcept { return kind_; }
  [[nodiscard]] const SparseDataset& data() const noexcept { return *data_; }
  [[nodiscard]] const std::shared_ptr<const SparseDataset>& data_ptr() const noexcept { return data_; }
  [[nodiscard]] std::size_t components() const noexcept { return data_->samples(); }
  [[nodiscard]] std::size_t dim() const noexcept { return data_->dim(); }

  /// f_i as a function of the margin m = w_i^T x.
  [[nodiscard]] double component_value(double margin, double response) const noexcept;
  /// df_i/dm, so that grad f_i(x) = coefficient(m, y_i) * w_i.
  [[nodiscard]] double coefficient(double margin, double response) const noexcept;

 private:
  LossKind kind_;
  std::shared_ptr<const SparseDataset> data_;
};

/// Sparse gradient over the support of one column.
struct SparseGradient {
  std::vector<std::uint32_t> indices;
  std::vector<double> values;

  [[nodiscard]] DenseVector densify(std::size_t dim) const;
};

/// Full gradient together with the per-sample margins w_i^T x it was built from.
struct GradientWithMargins {
  DenseVector gradient;
  std::vector<double> margins;
};

double inner_product(const SparseColumnView& column, std::span<const double> x);

/// x += alpha * column
void add_scaled(std::span<double> x, double alpha, const SparseColumnView& column);

double loss(const Objective& obj, std::span<const double> x);

/// f_i(x) without the 1/n factor.
double component_loss(const Objective& obj, std::size_t i, std::span<const double> x);

/// grad f_i(x), un-normalized, supported on the support of w_i.
SparseGradient component_gradient(const Objective& obj, std::size_t i, std::span<const double> x);

DenseVector full_gradient(const Objective& obj, std::span<const double> x);
GradientWithMargins full_gradient_with_margins(const Objective& obj, std::span<const double> x);

/// Per-sample margins w_i^T x.
std::vector<double> margins(const Objective& obj, std::span<const double> x);

/// max_i ||w_i||^2; the per-component smoothness bound for least squares.
double max_column_norm_squared(const SparseDataset& data) noexcept;

/// Average squared coordinate, sum of all squared stored values / (n d).
double mean_squared_entry(const SparseDataset& data) noexcept;

}  // namespace rgrasp
