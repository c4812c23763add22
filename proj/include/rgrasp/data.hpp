#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "rgrasp/core.hpp"
#include "rgrasp/objectives.hpp"

namespace rgrasp {

enum class Covariance { identity, uniform_offdiag };

/// real: y = W x* + eps. sign: y = sign(W x* + eps), zero mapped to +1.
enum class ResponseKind { real, sign };

struct SyntheticSpec {
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t s_star = 0;
  Covariance covariance = Covariance::identity;
  double rho = 0.0;  // off-diagonal correlation for uniform_offdiag
  double noise_variance = 0.0;
  std::uint64_t seed = 0;
  ResponseKind response = ResponseKind::real;

  void validate() const;
};

struct GroundTruth {
  DenseVector x_star;
  SupportSet support;
};

struct SyntheticInstance {
  SparseDataset data;
  GroundTruth truth;
};

/// Rows w_i ~ N(0, Sigma) with Sigma = I or (1 - rho) I + rho 11^T. The
/// correlated case uses w = sqrt(1 - rho) z + sqrt(rho) u 1, an O(d) draw per
/// row. x* has a uniform random support of size s*, nonzeros uniform on
/// [-1, 1] (exact zeros redrawn). Noise eps_i ~ N(0, sigma^2).
///
/// Draw order for a given seed: support, then x* values, then per-row
/// features followed by that row's noise. The same seed always gives the
/// same instance.
SyntheticInstance generate_synthetic(const SyntheticSpec& spec);

/// Parse "n=500,d=1000,s_star=50,rho=0.1,noise_variance=0.01,seed=3,response=real".
/// covariance is inferred from rho unless given explicitly.
SyntheticSpec parse_synthetic_spec(std::string_view text);

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& message)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + message), line_(line) {}
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

enum class LabelMode {
  automatic,  // {0,1} or {-1,+1} label sets become {-1,+1}; anything else kept
  keep,
  binary,  // positive -> +1, everything else -> -1
};

struct LibsvmOptions {
  std::optional<std::size_t> dim;  // overrides max index seen; must not be smaller
  LabelMode labels = LabelMode::automatic;
};

/// SVMlight / LIBSVM text: `label idx:val idx:val ... # comment`, 1-based
/// indices strictly increasing per line. Blank and comment-only lines are
/// skipped, `qid:` tokens ignored, explicit zero values dropped.
SparseDataset parse_libsvm(std::istream& in, const std::string& source_name = "<stream>",
                           const LibsvmOptions& opts = {});
SparseDataset parse_libsvm(const std::filesystem::path& path, const LibsvmOptions& opts = {});

/// Writes 1-based indices and values with 17 significant digits so that
/// parse_libsvm reproduces the dataset exactly.
void write_libsvm(std::ostream& out, const SparseDataset& data);
void write_libsvm(const std::filesystem::path& path, const SparseDataset& data);

struct DatasetStats {
  std::size_t samples = 0;
  std::size_t dim = 0;
  std::size_t nnz = 0;
  double density = 0.0;  // nnz / (n d)
};

DatasetStats dataset_stats(const SparseDataset& data) noexcept;

/// Scales every sample to unit Euclidean norm. Empty samples stay empty.
SparseDataset normalize_samples(const SparseDataset& data);

}  // namespace rgrasp
