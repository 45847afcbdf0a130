#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace credal {

// Method names accepted by experiments: "credal" plus the belief strategies.
const std::vector<std::string>& experiment_methods();

struct ExperimentSpec {
  std::size_t n = 2;
  std::size_t k = 2;
  std::size_t samples = 2000;
  std::optional<double> epsilon;
  std::vector<std::string> methods;
  std::uint64_t seed = 0;
  std::filesystem::path out;
  double band = 0.75;  // central mass of the reported width band
  // 0 means: hardware concurrency, capped by CREDAL_CHAIN_THREADS.
  std::size_t threads = 0;

  void validate() const;
};

struct WidthRecord {
  std::size_t step = 0;  // node index, 1 = prior
  std::string method;
  double mean_width = 0.0;
  double band_low = 0.0;
  double band_high = 0.0;
  std::size_t samples = 0;
};

struct MethodSummary {
  std::string method;
  // Node 2 against the exact credal interval: mean over chains and states of
  // (width - credal width) / credal width, and of width - credal width.
  double riw = 0.0;
  double mean_enlargement = 0.0;
  double final_mean_width = 0.0;
  // final_mean_width / credal final_mean_width
  double final_width_ratio = 0.0;
  // Share of chains whose final-node width is at most 3 * epsilon.
  std::optional<double> within_three_epsilon;
};

struct ExperimentResult {
  std::vector<WidthRecord> records;  // step-major, methods in spec order
  std::vector<MethodSummary> summaries;
  std::size_t threads_used = 0;
};

// Worker count: `requested` (or hardware concurrency when 0) capped by the
// CREDAL_CHAIN_THREADS environment variable and by `jobs`.
std::size_t worker_count(std::size_t requested, std::size_t jobs);

ExperimentResult run_experiment(const ExperimentSpec& spec);

std::string format_csv(const std::vector<WidthRecord>& records);
std::string format_summary(const ExperimentSpec& spec, const ExperimentResult& result);

// Writes spec.out and spec.out + ".summary.json". Nothing is left behind on
// failure.
void write_experiment(const ExperimentSpec& spec, const ExperimentResult& result);

}  // namespace credal
