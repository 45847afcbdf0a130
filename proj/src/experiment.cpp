#include "credal_chain/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "credal_chain/credal.hpp"
#include "credal_chain/errors.hpp"
#include "credal_chain/inference.hpp"
#include "credal_chain/sampling.hpp"

namespace credal {

const std::vector<std::string>& experiment_methods() {
  static const std::vector<std::string> names{"credal", "sgm-uniform", "sgm-adhoc", "adhoc-mass",
                                              "full-mass"};
  return names;
}

void ExperimentSpec::validate() const {
  if (n < 2) throw DomainError("experiment: n must be at least 2");
  if (n > 16) throw DomainError("experiment: n must be at most 16");
  if (k < 2) throw DomainError("experiment: k must be at least 2");
  if (samples == 0) throw DomainError("experiment: need at least one sample");
  if (epsilon && !(*epsilon > 0.0 && *epsilon <= 1.0)) {
    throw DomainError("experiment: epsilon must lie in (0, 1]");
  }
  if (methods.empty()) throw DomainError("experiment: no methods given");
  for (const auto& m : methods) {
    const auto& known = experiment_methods();
    if (std::find(known.begin(), known.end(), m) == known.end()) {
      throw DomainError("experiment: unknown method " + m);
    }
    if (std::count(methods.begin(), methods.end(), m) > 1) {
      throw DomainError("experiment: method listed twice: " + m);
    }
  }
  if (!(band > 0.0 && band <= 1.0)) throw DomainError("experiment: band must lie in (0, 1]");
}

std::size_t worker_count(std::size_t requested, std::size_t jobs) {
  std::size_t threads = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CREDAL_CHAIN_THREADS")) {
    char* end = nullptr;
    const unsigned long cap = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0) threads = std::min<std::size_t>(threads, cap);
  }
  return std::max<std::size_t>(1, std::min(threads, jobs));
}

namespace {

// Everything one chain contributes, per requested method.
struct ChainOutcome {
  std::vector<std::vector<double>> widths;  // [method][node]
  std::vector<double> riw;                  // [method], mean over counted states
  std::vector<std::size_t> riw_states;      // [method]
  std::vector<double> enlargement;          // [method]
};

double node_width(const std::vector<double>& lower, const std::vector<double>& upper) {
  double w = 0.0;
  for (std::size_t j = 0; j < lower.size(); ++j) w += upper[j] - lower[j];
  return w / static_cast<double>(lower.size());
}

ChainOutcome run_chain(const ExperimentSpec& spec, std::size_t index) {
  SamplerConfig cfg;
  cfg.n = spec.n;
  cfg.epsilon = spec.epsilon;
  cfg.seed = derive_seed(spec.seed, index);
  const ChainModel chain = sample_chain(cfg, spec.k);
  const std::vector<NodeBounds> exact = credal_chain_bounds(chain);

  ChainOutcome out;
  const double prior_width = chain.prior().mean_width();
  for (const auto& method : spec.methods) {
    std::vector<double> widths{prior_width};
    double riw = 0.0;
    std::size_t counted = 0;
    double enlargement = 0.0;
    const std::vector<double>* lower2 = nullptr;
    const std::vector<double>* upper2 = nullptr;
    std::vector<InferenceResult> inferred;
    if (method == "credal") {
      for (const auto& nb : exact) widths.push_back(node_width(nb.lower, nb.upper));
      lower2 = &exact.front().lower;
      upper2 = &exact.front().upper;
    } else {
      inferred = propagate_chain(chain, *parse_strategy(method));
      for (const auto& r : inferred) widths.push_back(node_width(r.lower, r.upper));
      lower2 = &inferred.front().lower;
      upper2 = &inferred.front().upper;
    }
    const NodeBounds& ref = exact.front();
    for (std::size_t j = 0; j < ref.lower.size(); ++j) {
      const double cw = ref.upper[j] - ref.lower[j];
      const double bw = (*upper2)[j] - (*lower2)[j];
      enlargement += bw - cw;
      if (cw >= 1e-12) {
        riw += (bw - cw) / cw;
        ++counted;
      }
    }
    out.widths.push_back(std::move(widths));
    out.riw.push_back(riw);
    out.riw_states.push_back(counted);
    out.enlargement.push_back(enlargement / static_cast<double>(ref.lower.size()));
  }
  return out;
}

// Linear interpolation between order statistics.
double quantile(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

double mean(const std::vector<double>& values) {
  double total = 0.0;
  for (double v : values) total += v;
  return total / static_cast<double>(values.size());
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  std::vector<std::optional<ChainOutcome>> outcomes(spec.samples);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::size_t error_index = spec.samples;
  std::exception_ptr error;

  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= spec.samples || failed.load()) return;
      try {
        outcomes[i] = run_chain(spec, i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
        failed = true;
      }
    }
  };

  ExperimentResult result;
  result.threads_used = worker_count(spec.threads, spec.samples);
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < result.threads_used; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);

  // Ordered reduction, independent of completion order.
  const std::size_t methods = spec.methods.size();
  const double tail = (1.0 - spec.band) / 2.0;
  for (std::size_t step = 0; step < spec.k; ++step) {
    for (std::size_t m = 0; m < methods; ++m) {
      std::vector<double> widths;
      widths.reserve(spec.samples);
      for (const auto& o : outcomes) widths.push_back(o->widths[m][step]);
      result.records.push_back({step + 1, spec.methods[m], mean(widths), quantile(widths, tail),
                                quantile(widths, 1.0 - tail), spec.samples});
    }
  }

  const auto credal_it = std::find(spec.methods.begin(), spec.methods.end(), "credal");
  for (std::size_t m = 0; m < methods; ++m) {
    MethodSummary s;
    s.method = spec.methods[m];
    double riw = 0.0;
    std::size_t counted = 0;
    std::vector<double> enlargement, final_widths;
    std::size_t within = 0;
    for (const auto& o : outcomes) {
      riw += o->riw[m];
      counted += o->riw_states[m];
      enlargement.push_back(o->enlargement[m]);
      const double w = o->widths[m].back();
      final_widths.push_back(w);
      if (spec.epsilon && w <= 3.0 * *spec.epsilon + 1e-12) ++within;
    }
    s.riw = counted ? riw / static_cast<double>(counted) : 0.0;
    s.mean_enlargement = mean(enlargement);
    s.final_mean_width = mean(final_widths);
    if (spec.epsilon) s.within_three_epsilon = static_cast<double>(within) / spec.samples;
    result.summaries.push_back(s);
  }
  if (credal_it != spec.methods.end()) {
    const double ref = result.summaries[credal_it - spec.methods.begin()].final_mean_width;
    for (auto& s : result.summaries) s.final_width_ratio = ref > 0.0 ? s.final_mean_width / ref : 0.0;
  }
  return result;
}

std::string format_csv(const std::vector<WidthRecord>& records) {
  std::string out = "step,method,mean_width,band_low,band_high,samples\n";
  char buf[256];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%zu,%s,%.6f,%.6f,%.6f,%zu\n", r.step, r.method.c_str(),
                  r.mean_width, r.band_low, r.band_high, r.samples);
    out += buf;
  }
  return out;
}

std::string format_summary(const ExperimentSpec& spec, const ExperimentResult& result) {
  using nlohmann::ordered_json;
  ordered_json config{{"n", spec.n},
                      {"k", spec.k},
                      {"samples", spec.samples},
                      {"epsilon", spec.epsilon ? ordered_json(*spec.epsilon) : ordered_json(nullptr)},
                      {"seed", spec.seed},
                      {"band", spec.band},
                      {"generator", std::string(kGeneratorName)},
                      {"burn_in", SamplerConfig{}.burn_in},
                      {"thinning", SamplerConfig{}.thinning}};
  ordered_json methods = ordered_json::array();
  for (const auto& s : result.summaries) {
    ordered_json m{{"method", s.method},
                   {"riw", s.riw},
                   {"mean_enlargement", s.mean_enlargement},
                   {"final_mean_width", s.final_mean_width}};
    if (std::find(spec.methods.begin(), spec.methods.end(), "credal") != spec.methods.end()) {
      m["final_width_ratio"] = s.final_width_ratio;
    }
    if (s.within_three_epsilon) m["within_three_epsilon"] = *s.within_three_epsilon;
    methods.push_back(m);
  }
  return ordered_json{{"config", config}, {"methods", methods}}.dump(2) + "\n";
}

void write_experiment(const ExperimentSpec& spec, const ExperimentResult& result) {
  const std::filesystem::path csv = spec.out;
  const std::filesystem::path summary = spec.out.string() + ".summary.json";
  auto write = [](const std::filesystem::path& path, const std::string& text) {
    const std::filesystem::path tmp = path.string() + ".partial";
    {
      std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
      if (!f) throw std::runtime_error("cannot write " + tmp.string());
      f << text;
      f.flush();
      if (!f) {
        f.close();
        std::filesystem::remove(tmp);
        throw std::runtime_error("write failed: " + tmp.string());
      }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
      std::filesystem::remove(tmp);
      throw std::runtime_error("cannot move " + tmp.string() + " into place: " + ec.message());
    }
  };
  try {
    write(csv, format_csv(result.records));
    write(summary, format_summary(spec, result));
  } catch (...) {
    std::error_code ec;
    std::filesystem::remove(csv, ec);
    std::filesystem::remove(summary, ec);
    throw;
  }
}

}  // namespace credal
