#include "credal_chain/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "credal_chain/errors.hpp"

namespace credal {

void SamplerConfig::validate() const {
  if (n < 2) throw StructuralError("sampler: n must be at least 2");
  if (n > kMaxStates) throw StructuralError("sampler: n too large");
  if (epsilon && !(*epsilon > 0.0 && *epsilon <= 1.0)) {
    throw DomainError("sampler: epsilon must lie in (0, 1]");
  }
  if (thinning == 0) throw DomainError("sampler: thinning must be positive");
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

// Rows of the coherence polytope in z = (l_1..l_n, u_1..u_n).
void polytope_rows(std::size_t n, const std::optional<double>& eps,
                   std::vector<std::vector<double>>& rows, std::vector<double>& rhs) {
  auto add = [&](std::vector<double> row, double b) {
    rows.push_back(std::move(row));
    rhs.push_back(b);
  };
  const std::size_t d = 2 * n;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> r(d, 0.0);
    r[i] = -1.0;
    add(r, 0.0);  // l_i >= 0
    r.assign(d, 0.0);
    r[i] = 1.0;
    r[n + i] = -1.0;
    add(r, 0.0);  // l_i <= u_i
    r.assign(d, 0.0);
    r[n + i] = 1.0;
    add(r, 1.0);  // u_i <= 1
    if (eps) {
      r.assign(d, 0.0);
      r[n + i] = 1.0;
      r[i] = -1.0;
      add(r, *eps);
    }
    r.assign(d, 0.0);
    for (std::size_t h = 0; h < n; ++h) {
      if (h != i) r[n + h] = -1.0;
    }
    r[i] = -1.0;
    add(r, -1.0);  // l_i >= 1 - sum_{h != i} u_h
    r.assign(d, 0.0);
    for (std::size_t h = 0; h < n; ++h) {
      if (h != i) r[h] = 1.0;
    }
    r[n + i] = 1.0;
    add(r, 1.0);  // u_i <= 1 - sum_{h != i} l_h
  }
  std::vector<double> r(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) r[i] = 1.0;
  add(r, 1.0);
  r.assign(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) r[n + i] = -1.0;
  add(r, -1.0);
}

// z = map * y + offset
struct Embedding {
  std::vector<std::vector<double>> map;  // 2n x dim
  std::vector<double> offset;
};

Embedding walk_embedding(std::size_t n) {
  Embedding e;
  if (n == 2) {
    // y = (l_1, l_2); u_1 = 1 - l_2, u_2 = 1 - l_1.
    e.map = {{1, 0}, {0, 1}, {0, -1}, {-1, 0}};
    e.offset = {0, 0, 1, 1};
    return e;
  }
  e.map.assign(2 * n, std::vector<double>(2 * n, 0.0));
  for (std::size_t i = 0; i < 2 * n; ++i) e.map[i][i] = 1.0;
  e.offset.assign(2 * n, 0.0);
  return e;
}

}  // namespace

IntervalSampler::IntervalSampler(SamplerConfig config) : config_(std::move(config)) {
  config_.validate();
  rng_.seed(config_.seed);
  const std::size_t n = config_.n;
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  polytope_rows(n, config_.epsilon, rows, rhs);

  const Embedding e = walk_embedding(n);
  const std::size_t dim = e.map.front().size();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::vector<double> row(dim, 0.0);
    double b = rhs[r];
    bool zero = true;
    for (std::size_t z = 0; z < 2 * n; ++z) {
      b -= rows[r][z] * e.offset[z];
      for (std::size_t c = 0; c < dim; ++c) row[c] += rows[r][z] * e.map[z][c];
    }
    for (double v : row) zero = zero && std::abs(v) < 1e-15;
    if (zero) continue;  // constant row, satisfied on the embedding
    a_.push_back(std::move(row));
    b_.push_back(b);
  }

  const double delta = std::min(config_.epsilon.value_or(1.0), 1.0 / static_cast<double>(n)) / 2.0;
  const double centre = 1.0 / static_cast<double>(n);
  if (n == 2) {
    y_ = {centre - delta, centre - delta};
  } else {
    y_.assign(2 * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      y_[i] = centre - delta;
      y_[n + i] = centre + delta;
    }
  }
}

double IntervalSampler::uniform() {
  return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

double IntervalSampler::normal() {
  if (spare_normal_) {
    const double v = *spare_normal_;
    spare_normal_.reset();
    return v;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_normal_ = radius * std::sin(angle);
  return radius * std::cos(angle);
}

void IntervalSampler::step() {
  const std::size_t dim = y_.size();
  std::vector<double> d(dim);
  double norm = 0.0;
  do {
    norm = 0.0;
    for (double& v : d) {
      v = normal();
      norm += v * v;
    }
  } while (norm == 0.0);
  norm = std::sqrt(norm);
  for (double& v : d) v /= norm;

  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < a_.size(); ++r) {
    double ad = 0.0;
    double ay = 0.0;
    for (std::size_t c = 0; c < dim; ++c) {
      ad += a_[r][c] * d[c];
      ay += a_[r][c] * y_[c];
    }
    const double slack = std::max(b_[r] - ay, 0.0);
    if (ad > 1e-15) {
      hi = std::min(hi, slack / ad);
    } else if (ad < -1e-15) {
      lo = std::max(lo, slack / ad);
    }
  }
  if (!(lo <= hi)) return;
  const double t = lo + (hi - lo) * uniform();
  for (std::size_t c = 0; c < dim; ++c) y_[c] += t * d[c];
}

std::vector<double> IntervalSampler::point() const {
  const std::size_t n = config_.n;
  if (n == 2) return {y_[0], y_[1], 1.0 - y_[1], 1.0 - y_[0]};
  return y_;
}

ProbabilityInterval IntervalSampler::next() {
  if (!burned_in_) {
    for (std::size_t s = 0; s < config_.burn_in; ++s) step();
    burned_in_ = true;
  }
  for (std::size_t s = 0; s < config_.thinning; ++s) step();
  const std::size_t n = config_.n;
  const std::vector<double> z = point();
  std::vector<double> lower(n), upper(n);
  for (std::size_t i = 0; i < n; ++i) {
    lower[i] = std::clamp(z[i], 0.0, 1.0);
    upper[i] = std::clamp(z[n + i], lower[i], 1.0);
  }
  return ProbabilityInterval(std::move(lower), std::move(upper));
}

std::vector<ProbabilityInterval> sample_intervals(const SamplerConfig& config, std::size_t count) {
  IntervalSampler sampler(config);
  std::vector<ProbabilityInterval> out;
  out.reserve(count);
  for (std::size_t c = 0; c < count; ++c) out.push_back(sampler.next());
  return out;
}

ChainModel sample_chain(const SamplerConfig& config, std::size_t k) {
  if (k < 2) throw StructuralError("sample_chain: k must be at least 2");
  IntervalSampler sampler(config);
  ProbabilityInterval prior = sampler.next();
  std::vector<std::vector<ProbabilityInterval>> links(k - 1);
  for (auto& link : links) {
    for (std::size_t i = 0; i < config.n; ++i) link.push_back(sampler.next());
  }
  return ChainModel(std::move(prior), std::move(links));
}

}  // namespace credal
