#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rgrasp {

/// Raised when an argument violates an operation's precondition
/// (k = 0, k > d, index out of range, dimension mismatch).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when input data carries non-finite values or breaks a data invariant.
class InvalidInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Model parameters, gradients and intermediate iterates. Length is the
/// ambient dimension d of the problem.
using DenseVector = std::vector<double>;

/// Sorted set of distinct 0-based coordinate indices.
class SupportSet {
 public:
  SupportSet() = default;
  SupportSet(std::initializer_list<std::size_t> indices);

  /// Takes arbitrary indices; sorts and removes duplicates.
  static SupportSet from_unsorted(std::vector<std::size_t> indices);
  /// Takes indices already strictly increasing; throws InvalidArgument otherwise.
  static SupportSet from_sorted(std::vector<std::size_t> indices);

  [[nodiscard]] std::size_t size() const noexcept { return indices_.size(); }
  [[nodiscard]] bool empty() const noexcept { return indices_.empty(); }
  [[nodiscard]] bool contains(std::size_t i) const noexcept;
  [[nodiscard]] std::span<const std::size_t> indices() const noexcept { return indices_; }
  [[nodiscard]] auto begin() const noexcept { return indices_.begin(); }
  [[nodiscard]] auto end() const noexcept { return indices_.end(); }
  [[nodiscard]] std::size_t operator[](std::size_t k) const { return indices_[k]; }
  /// True when every index is below `dim`.
  [[nodiscard]] bool fits(std::size_t dim) const noexcept;

  friend bool operator==(const SupportSet&, const SupportSet&) = default;

 private:
  std::vector<std::size_t> indices_;
};

/// Tally of element comparisons made by the selection routine. Used to
/// check that selection cost is linear in d.
struct SelectionStats {
  std::uint64_t comparisons = 0;
};

/// Index set of the k largest-magnitude entries of x, returned sorted.
/// Ties in magnitude go to the lower index. Selection is an expected
/// linear-time partial partition, not a full sort.
SupportSet top_support(std::span<const double> x, std::size_t k, SelectionStats* stats = nullptr);

/// H_s: keeps the s largest-magnitude entries of x, zeroes the rest.
/// Kept values are copied bit-for-bit. A vector with at most s nonzeros
/// is returned unchanged.
DenseVector hard_threshold(std::span<const double> x, std::size_t s);

/// In-place H_s. Same semantics as hard_threshold.
void hard_threshold_inplace(std::span<double> x, std::size_t s);

SupportSet merge_supports(const SupportSet& a, const SupportSet& b);

/// x|_T: equals x on t, zero elsewhere.
DenseVector restrict(std::span<const double> x, const SupportSet& t);

/// Indices of the nonzero entries of x.
SupportSet support_of(std::span<const double> x);

std::size_t count_nonzeros(std::span<const double> x) noexcept;

double norm2(std::span<const double> x) noexcept;
double distance2(std::span<const double> a, std::span<const double> b);

bool all_finite(std::span<const double> x) noexcept;

}  // namespace rgrasp
