#include <charconv>
#include <fstream>
#include <istream>
#include <string>

#include "rgrasp/bench.hpp"

namespace rgrasp {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (!s.empty()) {
    const auto comma = s.find(',');
    const std::string_view item = trim(s.substr(0, comma));
    if (!item.empty()) {
      out.push_back(item);
    }
    if (comma == std::string_view::npos) {
      break;
    }
    s = s.substr(comma + 1);
  }
  return out;
}

class LineError {
 public:
  LineError(const std::string& source, std::size_t line) : source_(source), line_(line) {}
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(source_, line_, message); }

  template <typename T>
  T number(std::string_view text) const {
    T value{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || text.empty()) {
      fail("bad number '" + std::string(text) + "'");
    }
    return value;
  }

  bool boolean(std::string_view text) const {
    if (text == "true" || text == "1" || text == "yes") {
      return true;
    }
    if (text == "false" || text == "0" || text == "no") {
      return false;
    }
    fail("expected true/false, got '" + std::string(text) + "'");
  }

 private:
  const std::string& source_;
  std::size_t line_;
};

std::filesystem::path resolve(const std::filesystem::path& base, std::string_view p) {
  std::filesystem::path path{std::string(p)};
  if (path.is_relative() && !base.empty()) {
    return base / path;
  }
  return path;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (solvers.empty()) {
    throw InvalidArgument("experiment config: at least one solver is required");
  }
  if (!(pass_budget >= 0.0)) {
    throw InvalidArgument("experiment config: pass budget must be non-negative");
  }
  if (seeds.empty()) {
    throw InvalidArgument("experiment config: at least one seed is required");
  }
  if (sparsity == 0) {
    throw InvalidArgument("experiment config: sparsity must be positive");
  }
  if (!data.synthetic && data.path.empty()) {
    throw InvalidArgument("experiment config: no data source");
  }
  if (epoch_length && *epoch_length == 0) {
    throw InvalidArgument("experiment config: epoch length must be positive");
  }
  if (!epoch_length && !(epoch_per_sample > 0.0)) {
    throw InvalidArgument("experiment config: epoch length must be positive");
  }
  if (reference == ReferenceMode::truth && !data.synthetic) {
    throw InvalidArgument("experiment config: reference=truth needs synthetic data");
  }
}

ExperimentConfig parse_experiment_config(std::istream& in, const std::filesystem::path& base_dir,
                                         const std::string& source_name) {
  ExperimentConfig cfg;
  cfg.solvers.clear();
  std::vector<std::pair<std::string, std::vector<double>>> eta_overrides;
  std::vector<std::string> solver_names;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const LineError err(source_name, line_no);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      err.fail("expected key = value");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (value.empty()) {
      err.fail("empty value for '" + key + "'");
    }
    try {
      if (key == "objective") {
        cfg.objective = parse_loss_kind(value);
      } else if (key == "data") {
        if (value == "synthetic") {
          if (!cfg.data.synthetic) {
            cfg.data.synthetic = SyntheticSpec{};
          }
        } else {
          cfg.data.synthetic.reset();
          cfg.data.path = resolve(base_dir, value);
        }
      } else if (key == "synthetic") {
        cfg.data.synthetic = parse_synthetic_spec(value);
      } else if (key == "data.dim") {
        cfg.data.libsvm.dim = err.number<std::size_t>(value);
      } else if (key == "data.normalize") {
        cfg.data.normalize = err.boolean(value);
      } else if (key == "data.labels") {
        if (value == "auto") {
          cfg.data.libsvm.labels = LabelMode::automatic;
        } else if (value == "keep") {
          cfg.data.libsvm.labels = LabelMode::keep;
        } else if (value == "binary") {
          cfg.data.libsvm.labels = LabelMode::binary;
        } else {
          err.fail("data.labels must be auto, keep or binary");
        }
      } else if (key == "sparsity") {
        cfg.sparsity = err.number<std::size_t>(value);
      } else if (key == "budget") {
        cfg.pass_budget = err.number<double>(value);
      } else if (key == "seeds") {
        cfg.seeds.clear();
        for (const auto item : split_list(value)) {
          cfg.seeds.push_back(err.number<std::uint64_t>(item));
        }
      } else if (key == "solvers") {
        solver_names.clear();
        for (const auto item : split_list(value)) {
          solver_names.emplace_back(item);
        }
      } else if (key.rfind("eta.", 0) == 0) {
        std::vector<double> etas;
        if (value != "default") {
          for (const auto item : split_list(value)) {
            etas.push_back(err.number<double>(item));
          }
        }
        eta_overrides.emplace_back(key.substr(4), std::move(etas));
      } else if (key == "epoch_length") {
        if (value.back() == 'n') {
          cfg.epoch_per_sample = err.number<double>(trim(value.substr(0, value.size() - 1)));
          cfg.epoch_length.reset();
        } else {
          cfg.epoch_length = err.number<std::size_t>(value);
        }
      } else if (key == "ht_per_epoch") {
        cfg.ht_per_epoch = err.number<std::size_t>(value);
      } else if (key == "inner_scope") {
        cfg.scope = parse_inner_scope(value);
      } else if (key == "reference") {
        if (value == "auto") {
          cfg.reference = ReferenceMode::automatic;
        } else if (value == "none") {
          cfg.reference = ReferenceMode::none;
        } else if (value == "truth") {
          cfg.reference = ReferenceMode::truth;
        } else if (value == "run") {
          cfg.reference = ReferenceMode::run;
        } else {
          err.fail("reference must be auto, none, truth or run");
        }
      } else if (key == "reference.eta") {
        cfg.reference_eta = err.number<double>(value);
      } else if (key == "f_star") {
        cfg.f_star = err.number<double>(value);
      } else if (key == "record_time") {
        cfg.record_time = err.boolean(value);
      } else if (key == "output") {
        cfg.output = resolve(base_dir, value);
      } else {
        err.fail("unknown key '" + key + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      err.fail(e.what());
    }
  }

  for (const std::string& name : solver_names) {
    cfg.solvers.push_back({parse_solver_kind(name), {}});
  }
  for (auto& [name, etas] : eta_overrides) {
    const SolverKind kind = parse_solver_kind(name);
    bool found = false;
    for (SolverEntry& entry : cfg.solvers) {
      if (entry.kind == kind) {
        entry.etas = etas;
        found = true;
      }
    }
    if (!found) {
      throw ParseError(source_name, line_no, "eta given for solver '" + name + "' not listed in solvers");
    }
  }
  if (cfg.data.synthetic && cfg.data.synthetic->n == 0) {
    throw ParseError(source_name, line_no, "data = synthetic needs a 'synthetic = ...' spec");
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config '" + path.string() + "'");
  }
  return parse_experiment_config(in, path.parent_path(), path.string());
}

}  // namespace rgrasp
