#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "rgrasp/bench.hpp"

namespace rgrasp {

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> columns{
      "solver", "seed",      "eta",       "best",    "diverged", "iteration", "passes",
      "seconds", "objective", "log_objective_gap", "estimation_error", "ht_ops", "component_grads"};
  return columns;
}

namespace {

std::string real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string optional_real(const std::optional<double>& v) { return v ? real(*v) : std::string(); }

double to_real(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::runtime_error("read_csv: bad number '" + s + "'");
  }
  return v;
}

template <typename T>
T to_integer(const std::string& s) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::runtime_error("read_csv: bad integer '" + s + "'");
  }
  return v;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<MetricRow>& rows) {
  const auto& cols = csv_columns();
  for (std::size_t k = 0; k < cols.size(); ++k) {
    out << (k ? "," : "") << cols[k];
  }
  out << '\n';
  for (const MetricRow& r : rows) {
    out << r.solver << ',' << r.seed << ',' << real(r.eta) << ',' << (r.best ? 1 : 0) << ','
        << (r.diverged ? 1 : 0) << ',' << r.iteration << ',' << real(r.passes) << ',' << real(r.seconds) << ','
        << real(r.objective) << ',' << optional_real(r.log_objective_gap) << ','
        << optional_real(r.estimation_error) << ',' << r.ht_ops << ',' << r.component_grads << '\n';
  }
}

void emit_csv(const std::vector<MetricRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("emit_csv: cannot open '" + path.string() + "' for writing");
  }
  write_csv(out, rows);
  out.flush();
  if (!out) {
    throw std::runtime_error("emit_csv: write failed for '" + path.string() + "'");
  }
}

std::vector<MetricRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("read_csv: missing header");
  }
  std::vector<MetricRow> rows;
  const std::size_t ncols = csv_columns().size();
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      f.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
      f.emplace_back();
    }
    if (f.size() != ncols) {
      throw std::runtime_error("read_csv: expected " + std::to_string(ncols) + " fields, got " +
                               std::to_string(f.size()));
    }
    MetricRow r;
    r.solver = f[0];
    r.seed = to_integer<std::uint64_t>(f[1]);
    r.eta = to_real(f[2]);
    r.best = f[3] == "1";
    r.diverged = f[4] == "1";
    r.iteration = to_integer<std::size_t>(f[5]);
    r.passes = to_real(f[6]);
    r.seconds = to_real(f[7]);
    r.objective = to_real(f[8]);
    if (!f[9].empty()) {
      r.log_objective_gap = to_real(f[9]);
    }
    if (!f[10].empty()) {
      r.estimation_error = to_real(f[10]);
    }
    r.ht_ops = to_integer<std::uint64_t>(f[11]);
    r.component_grads = to_integer<std::uint64_t>(f[12]);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace rgrasp
