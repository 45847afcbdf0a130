#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "credal_chain/credal.hpp"
#include "credal_chain/errors.hpp"
#include "credal_chain/experiment.hpp"
#include "credal_chain/inference.hpp"
#include "credal_chain/model_io.hpp"
#include "credal_chain/sampling.hpp"

namespace {

using namespace credal;
using nlohmann::ordered_json;

constexpr int kOk = 0;
constexpr int kDomain = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string vec(const std::vector<double>& v) {
  std::string out = "(";
  char buf[64];
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s%.6g", i ? "," : "", std::abs(v[i]) < 1e-12 ? 0.0 : v[i]);
    out += buf;
  }
  return out + ")";
}

const char* condition_name(CoherenceCondition c) {
  switch (c) {
    case CoherenceCondition::kCoh1: return "Coh1";
    case CoherenceCondition::kCoh2: return "Coh2";
    case CoherenceCondition::kCoh3: return "Coh3";
  }
  return "?";
}

// One report line per interval; returns whether it is coherent.
bool report_interval(const std::string& name, const ProbabilityInterval& iv) {
  const CoherenceVerdict verdict = validate_coherence(iv);
  if (!verdict.coherent()) {
    std::cout << name << ": incoherent";
    for (const auto& v : verdict.violations) {
      std::cout << " [" << condition_name(v.condition);
      if (v.index) std::cout << " state " << *v.index;
      std::cout << ": " << v.detail << "]";
    }
    std::cout << "\n";
    return false;
  }
  const GoodnessReport g = goodness(iv);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", std::abs(g.delta) < 1e-12 ? 0.0 : g.delta);
  std::cout << name << ": coherent, " << (g.good() ? "good" : "bad") << ", delta=" << buf
            << ", slack r=" << vec(g.slack) << "\n";
  return true;
}

int cmd_check(const std::string& file) {
  const ModelFile model = read_model(file);
  bool ok = report_interval("prior", model.prior);
  for (std::size_t l = 0; l < model.links.size(); ++l) {
    for (std::size_t i = 0; i < model.links[l].size(); ++i) {
      const std::string name = "X" + std::to_string(l + 2) + " | X" + std::to_string(l + 1) + "=" +
                               model.frames[l].label(i);
      ok = report_interval(name, model.links[l][i]) && ok;
    }
  }
  return ok ? kOk : kDomain;
}

ordered_json diagnostics_json(const StepDiagnostics& d) {
  ordered_json j;
  if (!std::isnan(d.parent_delta)) j["parent_delta"] = d.parent_delta;
  j["parent_fixed"] = d.parent_fixed;
  if (!d.uniform_fix.empty()) j["uniform_fix"] = d.uniform_fix;
  if (!d.lower_fix.empty()) j["lower_fix"] = d.lower_fix;
  if (!d.upper_fix.empty()) j["upper_fix"] = d.upper_fix;
  if (!d.lower_epsilon.empty()) j["lower_epsilon"] = d.lower_epsilon;
  if (!d.upper_epsilon.empty()) j["upper_epsilon"] = d.upper_epsilon;
  j["closure_applied"] = d.closure_applied;
  j["multiplications"] = d.multiplications;
  return j;
}

int cmd_infer(const std::string& file, const std::string& method, std::optional<std::size_t> node,
              const std::string& prior_mass_file) {
  const bool credal_method = method == "credal";
  const std::optional<Strategy> strategy = parse_strategy(method);
  if (!credal_method && !strategy) throw UsageError("unknown method " + method);
  if (credal_method && !prior_mass_file.empty()) {
    throw UsageError("--prior-mass applies to belief methods only");
  }
  const ChainModel chain = read_model(file).chain();
  if (node && (*node < 2 || *node > chain.length())) {
    throw UsageError("--node must lie in 2.." + std::to_string(chain.length()));
  }
  std::optional<MassFunction> prior_mass;
  if (!prior_mass_file.empty()) prior_mass = read_mass(prior_mass_file);

  ordered_json nodes = ordered_json::array();
  if (credal_method) {
    for (const auto& nb : credal_chain_bounds(chain)) {
      if (node && nb.node != *node) continue;
      nodes.push_back({{"node", nb.node}, {"lower", nb.lower}, {"upper", nb.upper}});
    }
  } else {
    try {
      for (const auto& r : propagate_chain(chain, *strategy, prior_mass)) {
        if (node && r.node != *node) continue;
        nodes.push_back({{"node", r.node},
                         {"lower", r.lower},
                         {"upper", r.upper},
                         {"diagnostics", diagnostics_json(r.diagnostics)}});
      }
    } catch (const std::exception& e) {
      // Keep the exception type for the exit code, add the method.
      if (dynamic_cast<const DomainError*>(&e)) throw DomainError(method + ": " + e.what());
      throw;
    }
  }
  std::cout << ordered_json{{"method", method}, {"nodes", nodes}}.dump(2) << "\n";
  return kOk;
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int cmd_experiment(ExperimentSpec spec, const std::string& methods) {
  spec.methods = split(methods);
  try {
    spec.validate();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  const ExperimentResult result = run_experiment(spec);
  write_experiment(spec, result);
  std::cout << format_summary(spec, result);
  return kOk;
}

int cmd_sample(std::size_t n, std::size_t count, std::size_t k, std::optional<double> eps,
               std::uint64_t seed, const std::filesystem::path& dir) {
  SamplerConfig cfg;
  cfg.n = n;
  cfg.epsilon = eps;
  try {
    cfg.validate();
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  std::filesystem::create_directories(dir);
  const std::size_t digits = std::max<std::size_t>(4, std::to_string(count).size());
  for (std::size_t c = 0; c < count; ++c) {
    cfg.seed = derive_seed(seed, c);
    const ChainModel chain = sample_chain(cfg, k);
    std::string index = std::to_string(c + 1);
    index.insert(0, digits - std::min<std::size_t>(digits, index.size()), '0');
    const std::filesystem::path path = dir / ("sample_" + index + ".json");
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << format_model(chain);
    if (!f) throw std::runtime_error("write failed: " + path.string());
  }
  std::cout << "wrote " << count << " model files to " << dir.string() << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Belief-function and credal inference on chains of interval models"};
  app.require_subcommand(1);

  std::string check_file;
  auto* check = app.add_subcommand("check", "Coherence and goodness of every interval in a model");
  check->add_option("file", check_file, "model file")->required();

  std::string infer_file, method, prior_mass;
  std::optional<std::size_t> node;
  auto* infer = app.add_subcommand("infer", "Node bounds for one method");
  infer->add_option("file", infer_file, "model file")->required();
  infer->add_option("--method", method, "credal, sgm-uniform, sgm-adhoc, adhoc-mass, full-mass")
      ->required();
  infer->add_option("--node", node, "report only this node (2..k)");
  infer->add_option("--prior-mass", prior_mass, "mass file used for the first node");

  ExperimentSpec spec;
  std::string methods;
  std::optional<double> exp_eps;
  auto* experiment = app.add_subcommand("experiment", "Width statistics over sampled chains");
  experiment->add_option("--n", spec.n, "frame size")->required();
  experiment->add_option("--k", spec.k, "chain length")->required();
  experiment->add_option("--samples", spec.samples, "number of chains")->required();
  experiment->add_option("--eps", exp_eps, "width cap for sampled intervals");
  experiment->add_option("--methods", methods, "comma-separated methods")->required();
  experiment->add_option("--seed", spec.seed, "base seed")->required();
  experiment->add_option("--out", spec.out, "CSV output path")->required();
  experiment->add_option("--band", spec.band, "central mass of the width band")
      ->capture_default_str();

  std::size_t sample_n = 0, sample_count = 0, sample_k = 2;
  std::optional<double> sample_eps;
  std::uint64_t sample_seed = 0;
  std::filesystem::path sample_dir;
  auto* sample = app.add_subcommand("sample", "Write sampled chain models");
  sample->add_option("--n", sample_n, "frame size")->required();
  sample->add_option("--count", sample_count, "number of files")->required();
  sample->add_option("--k", sample_k, "chain length")->capture_default_str();
  sample->add_option("--eps", sample_eps, "width cap");
  sample->add_option("--seed", sample_seed, "base seed")->required();
  sample->add_option("--out", sample_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*check) return cmd_check(check_file);
    if (*infer) return cmd_infer(infer_file, method, node, prior_mass);
    if (*experiment) {
      spec.epsilon = exp_eps;
      return cmd_experiment(spec, methods);
    }
    if (*sample) return cmd_sample(sample_n, sample_count, sample_k, sample_eps, sample_seed, sample_dir);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomain;
  }
  return kUsage;
}
