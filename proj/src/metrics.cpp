#include <cmath>

#include "rgrasp/bench.hpp"

namespace rgrasp {

double estimation_error(std::span<const double> x, std::span<const double> x_star) {
  const double ref = norm2(x_star);
  if (!(ref > 0.0)) {
    throw UndefinedMetric("estimation_error: reference vector is zero");
  }
  return distance2(x, x_star) / ref;
}

double objective_gap(double objective, double f_star) noexcept {
  return std::log10(std::max(objective - f_star, 0.0) + kGapFloor);
}

double objective_gap(const Objective& obj, std::span<const double> x, double f_star) {
  return objective_gap(loss(obj, x), f_star);
}

}  // namespace rgrasp
