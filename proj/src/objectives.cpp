#include "rgrasp/objectives.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

namespace rgrasp {

SparseDataset::SparseDataset(std::size_t dim, std::vector<std::size_t> offsets,
                             std::vector<std::uint32_t> indices, std::vector<double> values,
                             std::vector<double> responses)
    : dim_(dim),
      offsets_(std::move(offsets)),
      indices_(std::move(indices)),
      values_(std::move(values)),
      responses_(std::move(responses)) {
  if (offsets_.empty() || offsets_.front() != 0) {
    throw InvalidInput("SparseDataset: offsets must start at 0");
  }
  if (offsets_.size() != responses_.size() + 1) {
    throw InvalidInput("SparseDataset: response count does not match column count");
  }
  if (indices_.size() != values_.size() || offsets_.back() != indices_.size()) {
    throw InvalidInput("SparseDataset: index/value storage size mismatch");
  }
  for (std::size_t i = 0; i + 1 < offsets_.size(); ++i) {
    if (offsets_[i] > offsets_[i + 1]) {
      throw InvalidInput("SparseDataset: offsets not monotone at column " + std::to_string(i));
    }
    for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) {
      if (indices_[k] >= dim_) {
        throw InvalidInput("SparseDataset: index out of range in column " + std::to_string(i));
      }
      if (k > offsets_[i] && indices_[k - 1] >= indices_[k]) {
        throw InvalidInput("SparseDataset: indices not strictly increasing in column " + std::to_string(i));
      }
      if (!std::isfinite(values_[k]) || values_[k] == 0.0) {
        throw InvalidInput("SparseDataset: stored value must be finite and nonzero (column " +
                           std::to_string(i) + ")");
      }
    }
  }
  if (!all_finite(responses_)) {
    throw InvalidInput("SparseDataset: non-finite response");
  }
}

bool SparseDataset::has_sign_labels() const noexcept {
  return std::all_of(responses_.begin(), responses_.end(), [](double v) { return v == 1.0 || v == -1.0; });
}

void DatasetBuilder::add_sample(std::span<const std::uint32_t> indices, std::span<const double> values,
                                double response) {
  if (indices.size() != values.size()) {
    throw InvalidArgument("DatasetBuilder::add_sample: index/value length mismatch");
  }
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (values[k] == 0.0) {
      continue;
    }
    indices_.push_back(indices[k]);
    values_.push_back(values[k]);
    max_seen_ = std::max<std::size_t>(max_seen_, std::size_t{indices[k]} + 1);
  }
  offsets_.push_back(indices_.size());
  responses_.push_back(response);
}

void DatasetBuilder::add_dense_sample(std::span<const double> row, double response) {
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (row[j] != 0.0) {
      indices_.push_back(static_cast<std::uint32_t>(j));
      values_.push_back(row[j]);
    }
  }
  max_seen_ = std::max(max_seen_, row.size());
  offsets_.push_back(indices_.size());
  responses_.push_back(response);
}

SparseDataset DatasetBuilder::build() && {
  const std::size_t dim = std::max(dim_, max_seen_);
  return SparseDataset(dim, std::move(offsets_), std::move(indices_), std::move(values_), std::move(responses_));
}

const char* to_string(LossKind kind) noexcept {
  return kind == LossKind::least_squares ? "least_squares" : "logistic";
}

LossKind parse_loss_kind(std::string_view name) {
  if (name == "least_squares" || name == "ls") {
    return LossKind::least_squares;
  }
  if (name == "logistic") {
    return LossKind::logistic;
  }
  throw InvalidArgument("unknown objective '" + std::string(name) + "'");
}

Objective::Objective(LossKind kind, std::shared_ptr<const SparseDataset> data)
    : kind_(kind), data_(std::move(data)) {
  if (!data_) {
    throw InvalidArgument("Objective: null dataset");
  }
  if (kind_ == LossKind::logistic && !data_->has_sign_labels()) {
    throw InvalidInput("Objective: logistic loss needs every response in {-1, +1}");
  }
}

double Objective::component_value(double margin, double response) const noexcept {
  if (kind_ == LossKind::least_squares) {
    const double r = response - margin;
    return 0.5 * r * r;
  }
  // log(1 + exp(-t)) = max(-t, 0) + log1p(exp(-|t|))
  const double t = response * margin;
  return std::max(-t, 0.0) + std::log1p(std::exp(-std::fabs(t)));
}

double Objective::coefficient(double margin, double response) const noexcept {
  if (kind_ == LossKind::least_squares) {
    return margin - response;
  }
  // -y * sigma(-y m), sigma(-t) = 1 / (1 + exp(t)), evaluated without overflow.
  const double t = response * margin;
  double sig;
  if (t >= 0.0) {
    const double e = std::exp(-t);
    sig = e / (1.0 + e);
  } else {
    sig = 1.0 / (1.0 + std::exp(t));
  }
  return -response * sig;
}

DenseVector SparseGradient::densify(std::size_t dim) const {
  DenseVector out(dim, 0.0);
  for (std::size_t k = 0; k < indices.size(); ++k) {
    out[indices[k]] += values[k];
  }
  return out;
}

double inner_product(const SparseColumnView& column, std::span<const double> x) {
  double acc = 0.0;
  for (std::size_t k = 0; k < column.indices.size(); ++k) {
    acc += column.values[k] * x[column.indices[k]];
  }
  return acc;
}

void add_scaled(std::span<double> x, double alpha, const SparseColumnView& column) {
  for (std::size_t k = 0; k < column.indices.size(); ++k) {
    x[column.indices[k]] += alpha * column.values[k];
  }
}

namespace {

void check_dim(const Objective& obj, std::span<const double> x, const char* where) {
  if (x.size() != obj.dim()) {
    throw InvalidArgument(std::string(where) + ": dimension mismatch (x has " + std::to_string(x.size()) +
                          ", objective has " + std::to_string(obj.dim()) + ")");
  }
}

void check_index(const Objective& obj, std::size_t i, const char* where) {
  if (i >= obj.components()) {
    throw InvalidArgument(std::string(where) + ": sample index " + std::to_string(i) + " out of range");
  }
}

}  // namespace

double loss(const Objective& obj, std::span<const double> x) {
  check_dim(obj, x, "loss");
  const SparseDataset& data = obj.data();
  const std::size_t n = data.samples();
  if (n == 0) {
    return 0.0;
  }
  // Running mean: a constant loss (logistic at x = 0) comes back exact.
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = obj.component_value(inner_product(data.column(i), x), data.response(i));
    mean += (v - mean) / static_cast<double>(i + 1);
  }
  return mean;
}

double component_loss(const Objective& obj, std::size_t i, std::span<const double> x) {
  check_dim(obj, x, "component_loss");
  check_index(obj, i, "component_loss");
  const SparseDataset& data = obj.data();
  return obj.component_value(inner_product(data.column(i), x), data.response(i));
}

SparseGradient component_gradient(const Objective& obj, std::size_t i, std::span<const double> x) {
  check_dim(obj, x, "component_gradient");
  check_index(obj, i, "component_gradient");
  const SparseColumnView col = obj.data().column(i);
  const double c = obj.coefficient(inner_product(col, x), obj.data().response(i));
  SparseGradient g;
  g.indices.assign(col.indices.begin(), col.indices.end());
  g.values.resize(col.nnz());
  for (std::size_t k = 0; k < col.nnz(); ++k) {
    g.values[k] = c * col.values[k];
  }
  assert(g.indices.size() == col.nnz() && std::equal(g.indices.begin(), g.indices.end(), col.indices.begin()));
  return g;
}

GradientWithMargins full_gradient_with_margins(const Objective& obj, std::span<const double> x) {
  check_dim(obj, x, "full_gradient");
  const SparseDataset& data = obj.data();
  const std::size_t n = data.samples();
  GradientWithMargins out{DenseVector(obj.dim(), 0.0), std::vector<double>(n)};
  if (n == 0) {
    return out;
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const SparseColumnView col = data.column(i);
    const double m = inner_product(col, x);
    out.margins[i] = m;
    add_scaled(out.gradient, obj.coefficient(m, data.response(i)) * inv_n, col);
  }
  return out;
}

DenseVector full_gradient(const Objective& obj, std::span<const double> x) {
  return full_gradient_with_margins(obj, x).gradient;
}

std::vector<double> margins(const Objective& obj, std::span<const double> x) {
  check_dim(obj, x, "margins");
  const SparseDataset& data = obj.data();
  std::vector<double> out(data.samples());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = inner_product(data.column(i), x);
  }
  return out;
}

double max_column_norm_squared(const SparseDataset& data) noexcept {
  double best = 0.0;
  for (std::size_t i = 0; i < data.samples(); ++i) {
    double acc = 0.0;
    for (const double v : data.column(i).values) {
      acc += v * v;
    }
    best = std::max(best, acc);
  }
  return best;
}

double mean_squared_entry(const SparseDataset& data) noexcept {
  if (data.samples() == 0 || data.dim() == 0) {
    return 0.0;
  }
  double acc = 0.0;
  for (const double v : data.values()) {
    acc += v * v;
  }
  return acc / (static_cast<double>(data.samples()) * static_cast<double>(data.dim()));
}

}  // namespace rgrasp
