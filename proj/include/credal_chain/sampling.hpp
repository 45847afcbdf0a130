#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "credal_chain/chain.hpp"
#include "credal_chain/interval.hpp"

namespace credal {

inline constexpr std::string_view kGeneratorName = "mt19937_64";

struct SamplerConfig {
  std::size_t n = 2;
  std::optional<double> epsilon;  // cap on every u_i - l_i
  std::size_t burn_in = 1000;
  std::size_t thinning = 100;
  std::uint64_t seed = 0;

  void validate() const;
};

// Stream seed for one worker or chain; splitmix64 of the base seed and index.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// Hit-and-run over the coherent (l, u) polytope of size n with the optional
// width cap. For n = 2 the polytope is 2-dimensional (u_1 = 1 - l_2,
// u_2 = 1 - l_1) and the walk runs in (l_1, l_2).
class IntervalSampler {
 public:
  explicit IntervalSampler(SamplerConfig config);

  // Next thinned sample. The first call also performs the burn-in.
  ProbabilityInterval next();
  const SamplerConfig& config() const { return config_; }

 private:
  void step();
  std::vector<double> point() const;  // (l, u) of the current state
  double uniform();
  double normal();

  SamplerConfig config_;
  std::mt19937_64 rng_;
  std::optional<double> spare_normal_;
  bool burned_in_ = false;
  // Polytope a * y <= b in walk coordinates y.
  std::vector<std::vector<double>> a_;
  std::vector<double> b_;
  std::vector<double> y_;
};

std::vector<ProbabilityInterval> sample_intervals(const SamplerConfig& config, std::size_t count);

// 1 prior and n * (k - 1) conditionals drawn from one sampler; frames X1..Xk.
ChainModel sample_chain(const SamplerConfig& config, std::size_t k);

}  // namespace credal
