#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <string>

#include "rgrasp/data.hpp"
#include "rgrasp/rng.hpp"

namespace rgrasp {

void SyntheticSpec::validate() const {
  if (n == 0 || d == 0) {
    throw InvalidArgument("SyntheticSpec: n and d must be positive");
  }
  if (s_star > d) {
    throw InvalidArgument("SyntheticSpec: s_star must not exceed d");
  }
  if (!(noise_variance >= 0.0) || !std::isfinite(noise_variance)) {
    throw InvalidArgument("SyntheticSpec: noise variance must be finite and non-negative");
  }
  if (covariance == Covariance::uniform_offdiag && !(rho >= 0.0 && rho < 1.0)) {
    throw InvalidArgument("SyntheticSpec: rho must lie in [0, 1)");
  }
  if (d > std::size_t{UINT32_MAX}) {
    throw InvalidArgument("SyntheticSpec: d exceeds 32-bit index range");
  }
}

SyntheticInstance generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);

  // Partial Fisher-Yates for a uniform s*-subset.
  std::vector<std::size_t> perm(spec.d);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t k = 0; k < spec.s_star; ++k) {
    const std::size_t r = k + rng.index(spec.d - k);
    std::swap(perm[k], perm[r]);
  }
  perm.resize(spec.s_star);
  SupportSet support = SupportSet::from_unsorted(perm);

  DenseVector x_star(spec.d, 0.0);
  for (const std::size_t i : support) {
    double v = 0.0;
    while (v == 0.0) {
      v = rng.uniform(-1.0, 1.0);
    }
    x_star[i] = v;
  }

  const bool correlated = spec.covariance == Covariance::uniform_offdiag && spec.rho > 0.0;
  const double own = correlated ? std::sqrt(1.0 - spec.rho) : 1.0;
  const double shared = correlated ? std::sqrt(spec.rho) : 0.0;
  const double sigma = std::sqrt(spec.noise_variance);

  DatasetBuilder builder(spec.d);
  DenseVector row(spec.d);
  for (std::size_t i = 0; i < spec.n; ++i) {
    const double common = correlated ? rng.gaussian() : 0.0;
    for (std::size_t j = 0; j < spec.d; ++j) {
      row[j] = own * rng.gaussian() + shared * common;
    }
    double y = 0.0;
    for (const std::size_t j : support) {
      y += row[j] * x_star[j];
    }
    if (sigma > 0.0) {
      y += sigma * rng.gaussian();
    }
    if (spec.response == ResponseKind::sign) {
      y = y >= 0.0 ? 1.0 : -1.0;
    }
    builder.add_dense_sample(row, y);
  }
  return {std::move(builder).build(), {std::move(x_star), std::move(support)}};
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw InvalidArgument("synthetic spec: bad value '" + std::string(text) + "' for " + std::string(key));
  }
  return value;
}

}  // namespace

SyntheticSpec parse_synthetic_spec(std::string_view text) {
  SyntheticSpec spec;
  std::optional<Covariance> explicit_cov;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view item = trim(text.substr(0, comma));
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    if (item.empty()) {
      continue;
    }
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw InvalidArgument("synthetic spec: expected key=value, got '" + std::string(item) + "'");
    }
    const std::string_view key = trim(item.substr(0, eq));
    const std::string_view value = trim(item.substr(eq + 1));
    if (key == "n") {
      spec.n = parse_number<std::size_t>(key, value);
    } else if (key == "d") {
      spec.d = parse_number<std::size_t>(key, value);
    } else if (key == "s_star") {
      spec.s_star = parse_number<std::size_t>(key, value);
    } else if (key == "rho") {
      spec.rho = parse_number<double>(key, value);
    } else if (key == "noise_variance") {
      spec.noise_variance = parse_number<double>(key, value);
    } else if (key == "seed") {
      spec.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "covariance") {
      if (value == "identity") {
        explicit_cov = Covariance::identity;
      } else if (value == "offdiag" || value == "uniform_offdiag") {
        explicit_cov = Covariance::uniform_offdiag;
      } else {
        throw InvalidArgument("synthetic spec: unknown covariance '" + std::string(value) + "'");
      }
    } else if (key == "response") {
      if (value == "real") {
        spec.response = ResponseKind::real;
      } else if (value == "sign") {
        spec.response = ResponseKind::sign;
      } else {
        throw InvalidArgument("synthetic spec: unknown response '" + std::string(value) + "'");
      }
    } else {
      throw InvalidArgument("synthetic spec: unknown key '" + std::string(key) + "'");
    }
  }
  spec.covariance = explicit_cov.value_or(spec.rho > 0.0 ? Covariance::uniform_offdiag : Covariance::identity);
  spec.validate();
  return spec;
}

}  // namespace rgrasp
