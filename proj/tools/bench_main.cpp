#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "rgrasp/bench.hpp"
#include "rgrasp/data.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& out_path, bool no_timing) {
  rgrasp::ExperimentConfig cfg = rgrasp::load_experiment_config(config_path);
  if (no_timing) {
    cfg.record_time = false;
  }
  if (!out_path.empty()) {
    cfg.output = out_path;
  }
  const rgrasp::ExperimentResult result = rgrasp::run_experiment(cfg);
  if (cfg.output.empty()) {
    rgrasp::write_csv(std::cout, result.rows);
    std::cout.flush();
  } else {
    rgrasp::emit_csv(result.rows, cfg.output);
    std::cerr << "wrote " << result.rows.size() << " rows to " << cfg.output.string() << '\n';
  }
  return 0;
}

int cmd_gen(const std::string& spec_text, const std::string& out_path, const std::string& truth_path) {
  const rgrasp::SyntheticSpec spec = rgrasp::parse_synthetic_spec(spec_text);
  const rgrasp::SyntheticInstance inst = rgrasp::generate_synthetic(spec);
  rgrasp::write_libsvm(out_path, inst.data);
  if (!truth_path.empty()) {
    std::ofstream out(truth_path);
    if (!out) {
      throw std::runtime_error("cannot open '" + truth_path + "' for writing");
    }
    char buf[64];
    for (const std::size_t i : inst.truth.support) {
      std::snprintf(buf, sizeof buf, "%zu %.17g\n", i + 1, inst.truth.x_star[i]);
      out << buf;
    }
    if (!out.flush()) {
      throw std::runtime_error("write failed for '" + truth_path + "'");
    }
  }
  return 0;
}

int cmd_stats(const std::string& data_path, std::size_t dim) {
  rgrasp::LibsvmOptions opts;
  if (dim > 0) {
    opts.dim = dim;
  }
  const rgrasp::DatasetStats st = rgrasp::dataset_stats(rgrasp::parse_libsvm(data_path, opts));
  std::printf("samples %zu\ndim %zu\nnnz %zu\ndensity %.6g\n", st.samples, st.dim, st.nnz, st.density);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparsity-constrained solver benchmark"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  bool no_timing = false;
  CLI::App* run = app.add_subcommand("run", "Run an experiment config and write the CSV trace");
  run->add_option("--config", config_path, "Experiment config file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_path, "CSV output (overrides the config; stdout when neither is set)");
  run->add_flag("--no-timing", no_timing, "Leave the seconds column at 0 for byte-reproducible output");

  std::string spec_text;
  std::string gen_out;
  std::string truth_path;
  CLI::App* gen = app.add_subcommand("gen", "Generate a synthetic instance in SVMlight format");
  gen->add_option("--spec", spec_text, "e.g. n=500,d=1000,s_star=50,noise_variance=0.01,seed=1")->required();
  gen->add_option("--out", gen_out, "SVMlight output file")->required();
  gen->add_option("--truth", truth_path, "Also write x* as 1-based 'index value' lines");

  std::string data_path;
  std::size_t dim = 0;
  CLI::App* stats = app.add_subcommand("stats", "Print n, d, nnz and density of an SVMlight file");
  stats->add_option("--data", data_path, "SVMlight file")->required()->check(CLI::ExistingFile);
  stats->add_option("--dim", dim, "Dimension override");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      return cmd_run(config_path, out_path, no_timing);
    }
    if (*gen) {
      return cmd_gen(spec_text, gen_out, truth_path);
    }
    return cmd_stats(data_path, dim);
  } catch (const std::exception& e) {
    std::cerr << "bench: " << e.what() << '\n';
    return 1;
  }
}
