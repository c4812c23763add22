#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "rgrasp/data.hpp"

namespace rgrasp {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f'; }

bool parse_real(std::string_view text, double& out) {
  if (!text.empty() && text.front() == '+') {
    text.remove_prefix(1);
  }
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end && !text.empty();
}

bool parse_index(std::string_view text, std::uint64_t& out) {
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end && !text.empty();
}

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t k = 0;
  while (k < line.size()) {
    while (k < line.size() && is_space(line[k])) {
      ++k;
    }
    const std::size_t start = k;
    while (k < line.size() && !is_space(line[k])) {
      ++k;
    }
    if (k > start) {
      tokens.push_back(line.substr(start, k - start));
    }
  }
  return tokens;
}

std::vector<double> map_labels(std::vector<double> labels, LabelMode mode) {
  if (mode == LabelMode::keep) {
    return labels;
  }
  if (mode == LabelMode::binary) {
    for (double& y : labels) {
      y = y > 0.0 ? 1.0 : -1.0;
    }
    return labels;
  }
  bool has_neg = false;
  bool has_zero = false;
  for (const double y : labels) {
    if (y == -1.0) {
      has_neg = true;
    } else if (y == 0.0) {
      has_zero = true;
    } else if (y != 1.0) {
      return labels;  // real-valued responses
    }
  }
  if (has_neg && has_zero) {
    return labels;
  }
  for (double& y : labels) {
    if (y == 0.0) {
      y = -1.0;
    }
  }
  return labels;
}

}  // namespace

SparseDataset parse_libsvm(std::istream& in, const std::string& source_name, const LibsvmOptions& opts) {
  std::vector<std::size_t> offsets{0};
  std::vector<std::uint32_t> indices;
  std::vector<double> values;
  std::vector<double> labels;
  std::size_t max_index = 0;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    const std::vector<std::string_view> tokens = tokenize(view);
    if (tokens.empty()) {
      continue;
    }
    double label = 0.0;
    if (!parse_real(tokens[0], label) || !std::isfinite(label)) {
      throw ParseError(source_name, line_no, "bad label '" + std::string(tokens[0]) + "'");
    }
    std::uint64_t prev = 0;
    for (std::size_t t = 1; t < tokens.size(); ++t) {
      const std::string_view tok = tokens[t];
      const auto colon = tok.find(':');
      if (colon == std::string_view::npos) {
        throw ParseError(source_name, line_no, "expected index:value, got '" + std::string(tok) + "'");
      }
      const std::string_view key = tok.substr(0, colon);
      if (key == "qid") {
        continue;
      }
      std::uint64_t idx = 0;
      double val = 0.0;
      if (!parse_index(key, idx) || idx == 0) {
        throw ParseError(source_name, line_no, "bad feature index '" + std::string(key) + "' (indices are 1-based)");
      }
      if (idx > std::uint64_t{std::numeric_limits<std::uint32_t>::max()}) {
        throw ParseError(source_name, line_no, "feature index too large");
      }
      if (!parse_real(tok.substr(colon + 1), val) || !std::isfinite(val)) {
        throw ParseError(source_name, line_no, "bad feature value in '" + std::string(tok) + "'");
      }
      if (idx <= prev) {
        throw ParseError(source_name, line_no, "feature indices must be strictly increasing");
      }
      prev = idx;
      if (val == 0.0) {
        continue;
      }
      indices.push_back(static_cast<std::uint32_t>(idx - 1));
      values.push_back(val);
      max_index = std::max<std::size_t>(max_index, idx);
    }
    offsets.push_back(indices.size());
    labels.push_back(label);
  }
  if (in.bad()) {
    throw ParseError(source_name, line_no, "read error");
  }
  if (labels.empty()) {
    throw ParseError(source_name, line_no, "empty file: no samples");
  }
  std::size_t dim = max_index;
  if (opts.dim) {
    if (*opts.dim < max_index) {
      throw ParseError(source_name, line_no,
                       "dimension override " + std::to_string(*opts.dim) + " is below the largest index " +
                           std::to_string(max_index));
    }
    dim = *opts.dim;
  }
  return SparseDataset(dim, std::move(offsets), std::move(indices), std::move(values),
                       map_labels(std::move(labels), opts.labels));
}

SparseDataset parse_libsvm(const std::filesystem::path& path, const LibsvmOptions& opts) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open '" + path.string() + "'");
  }
  return parse_libsvm(in, path.string(), opts);
}

void write_libsvm(std::ostream& out, const SparseDataset& data) {
  char buf[64];
  for (std::size_t i = 0; i < data.samples(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", data.response(i));
    out << buf;
    const SparseColumnView col = data.column(i);
    for (std::size_t k = 0; k < col.nnz(); ++k) {
      std::snprintf(buf, sizeof buf, " %u:%.17g", static_cast<unsigned>(col.indices[k] + 1), col.values[k]);
      out << buf;
    }
    out << '\n';
  }
}

void write_libsvm(const std::filesystem::path& path, const SparseDataset& data) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write '" + path.string() + "'");
  }
  write_libsvm(out, data);
  if (!out) {
    throw std::runtime_error("write failed for '" + path.string() + "'");
  }
}

DatasetStats dataset_stats(const SparseDataset& data) noexcept {
  DatasetStats s;
  s.samples = data.samples();
  s.dim = data.dim();
  s.nnz = data.nnz();
  const double cells = static_cast<double>(s.samples) * static_cast<double>(s.dim);
  s.density = cells > 0.0 ? static_cast<double>(s.nnz) / cells : 0.0;
  return s;
}

SparseDataset normalize_samples(const SparseDataset& data) {
  std::vector<double> values(data.values().begin(), data.values().end());
  for (std::size_t i = 0; i < data.samples(); ++i) {
    const std::size_t lo = data.offsets()[i];
    const std::size_t hi = data.offsets()[i + 1];
    double acc = 0.0;
    for (std::size_t k = lo; k < hi; ++k) {
      acc += values[k] * values[k];
    }
    if (acc > 0.0) {
      const double inv = 1.0 / std::sqrt(acc);
      for (std::size_t k = lo; k < hi; ++k) {
        values[k] *= inv;
      }
    }
  }
  return SparseDataset(data.dim(), std::vector<std::size_t>(data.offsets().begin(), data.offsets().end()),
                       std::vector<std::uint32_t>(data.indices().begin(), data.indices().end()), std::move(values),
                       std::vector<double>(data.responses().begin(), data.responses().end()));
}

}  // namespace rgrasp
