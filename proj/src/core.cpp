#include "rgrasp/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rgrasp {

SupportSet::SupportSet(std::initializer_list<std::size_t> indices)
    : SupportSet(from_unsorted(std::vector<std::size_t>(indices))) {}

SupportSet SupportSet::from_unsorted(std::vector<std::size_t> indices) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  SupportSet out;
  out.indices_ = std::move(indices);
  return out;
}

SupportSet SupportSet::from_sorted(std::vector<std::size_t> indices) {
  for (std::size_t k = 1; k < indices.size(); ++k) {
    if (indices[k - 1] >= indices[k]) {
      throw InvalidArgument("SupportSet::from_sorted: indices not strictly increasing");
    }
  }
  SupportSet out;
  out.indices_ = std::move(indices);
  return out;
}

bool SupportSet::contains(std::size_t i) const noexcept {
  return std::binary_search(indices_.begin(), indices_.end(), i);
}

bool SupportSet::fits(std::size_t dim) const noexcept {
  return indices_.empty() || indices_.back() < dim;
}

namespace {

void check_finite(std::span<const double> x, const char* where) {
  if (!all_finite(x)) {
    throw InvalidInput(std::string(where) + ": non-finite entry in input vector");
  }
}

// Strict total order: larger magnitude first, then lower index.
struct MagnitudeOrder {
  std::span<const double> x;
  SelectionStats* stats;
  bool operator()(std::size_t a, std::size_t b) const {
    if (stats != nullptr) {
      ++stats->comparisons;
    }
    const double ma = std::fabs(x[a]);
    const double mb = std::fabs(x[b]);
    return ma > mb || (ma == mb && a < b);
  }
};

// Moves the k best candidates (by MagnitudeOrder) to the front.
void select_front(std::vector<std::size_t>& candidates, std::size_t k, std::span<const double> x,
                  SelectionStats* stats) {
  if (k == 0 || k >= candidates.size()) {
    return;
  }
  std::nth_element(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k - 1),
                   candidates.end(), MagnitudeOrder{x, stats});
}

}  // namespace

SupportSet top_support(std::span<const double> x, std::size_t k, SelectionStats* stats) {
  const std::size_t d = x.size();
  if (k == 0 || k > d) {
    throw InvalidArgument("top_support: k must satisfy 1 <= k <= d (k=" + std::to_string(k) +
                          ", d=" + std::to_string(d) + ")");
  }
  check_finite(x, "top_support");
  std::vector<std::size_t> idx(d);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  select_front(idx, k, x, stats);
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return SupportSet::from_sorted(std::move(idx));
}

void hard_threshold_inplace(std::span<double> x, std::size_t s) {
  const std::size_t d = x.size();
  if (s == 0 || s > d) {
    throw InvalidArgument("hard_threshold: s must satisfy 1 <= s <= d (s=" + std::to_string(s) +
                          ", d=" + std::to_string(d) + ")");
  }
  check_finite(x, "hard_threshold");
  // Zero entries never change the result, so only nonzeros compete.
  std::vector<std::size_t> nonzero;
  for (std::size_t i = 0; i < d; ++i) {
    if (x[i] != 0.0) {
      nonzero.push_back(i);
    }
  }
  if (nonzero.size() <= s) {
    return;
  }
  select_front(nonzero, s, x, nullptr);
  for (std::size_t k = s; k < nonzero.size(); ++k) {
    x[nonzero[k]] = 0.0;
  }
}

DenseVector hard_threshold(std::span<const double> x, std::size_t s) {
  DenseVector out(x.begin(), x.end());
  hard_threshold_inplace(out, s);
  return out;
}

SupportSet merge_supports(const SupportSet& a, const SupportSet& b) {
  std::vector<std::size_t> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return SupportSet::from_sorted(std::move(out));
}

DenseVector restrict(std::span<const double> x, const SupportSet& t) {
  if (!t.fits(x.size())) {
    throw InvalidArgument("restrict: support index out of range");
  }
  DenseVector out(x.size(), 0.0);
  for (const std::size_t i : t) {
    out[i] = x[i];
  }
  return out;
}

SupportSet support_of(std::span<const double> x) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != 0.0) {
      idx.push_back(i);
    }
  }
  return SupportSet::from_sorted(std::move(idx));
}

std::size_t count_nonzeros(std::span<const double> x) noexcept {
  return static_cast<std::size_t>(std::count_if(x.begin(), x.end(), [](double v) { return v != 0.0; }));
}

double norm2(std::span<const double> x) noexcept {
  double acc = 0.0;
  for (const double v : x) {
    acc += v * v;
  }
  return std::sqrt(acc);
}

double distance2(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw InvalidArgument("distance2: dimension mismatch");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    acc += diff * diff;
  }
  return std::sqrt(acc);
}

bool all_finite(std::span<const double> x) noexcept {
  return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace rgrasp
