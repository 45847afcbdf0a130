#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "credal_chain/credal.hpp"
#include "credal_chain/errors.hpp"
#include "credal_chain/representability.hpp"
#include "support.hpp"

using namespace credal;
using namespace testing_support;

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

bool inside(const ProbabilityInterval& iv, const std::vector<double>& x, double tol) {
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < iv.lower(i) - tol || x[i] > iv.upper(i) + tol) return false;
    total += x[i];
  }
  return near(total, 1.0, tol);
}

// Minimum by scanning every vertex, each found as a point with all but one
// coordinate at a bound.
double vertex_scan_min(const ProbabilityInterval& iv, const std::vector<double>& c) {
  const std::size_t n = iv.size();
  double best = 1e300;
  for (std::size_t free = 0; free < n; ++free) {
    for (Subset at_upper = 0; at_upper < (Subset{1} << n); ++at_upper) {
      if ((at_upper >> free) & 1U) continue;
      std::vector<double> x(n);
      double rest = 1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (i == free) continue;
        x[i] = ((at_upper >> i) & 1U) ? iv.upper(i) : iv.lower(i);
        rest -= x[i];
      }
      x[free] = rest;
      if (inside(iv, x, 1e-12)) best = std::min(best, dot(c, x));
    }
  }
  return best;
}

}  // namespace

TEST_CASE("greedy optimum on the four-state prior") {
  const ProbabilityInterval iv({0.2, 0.2, 0.2, 0.2}, {0.3, 0.3, 0.3, 0.3});
  const auto r = greedy_linear_min({{0.2, 0.4, 0.8, 0.9}, iv});
  CHECK(near(r.value, 0.52, 1e-12));
  const std::vector<double> x{0.3, 0.3, 0.2, 0.2};
  for (std::size_t i = 0; i < 4; ++i) CHECK(near(r.x[i], x[i], 1e-12));
}

TEST_CASE("greedy optimum on the urn") {
  const ProbabilityInterval urn({0.06, 0.10, 0.15, 0.25}, {0.33, 0.42, 0.32, 0.58});
  const auto r = greedy_linear_min({{0.8, 0.6, 0.4, 0.2}, urn});
  CHECK(near(r.value, 0.328, 1e-12));
  const std::vector<double> x{0.06, 0.10, 0.26, 0.58};
  for (std::size_t i = 0; i < 4; ++i) CHECK(near(r.x[i], x[i], 1e-12));
  // Upper side of heads: 1 - min over the tails column.
  CHECK(near(1.0 - greedy_linear_min({{0.1, 0.3, 0.5, 0.7}, urn}).value, 0.636, 1e-12));
}

TEST_CASE("ties are broken by index") {
  const ProbabilityInterval iv({0.0, 0.0, 0.0}, {1.0, 1.0, 1.0});
  const auto r = greedy_linear_min({{0.5, 0.5, 0.5}, iv});
  CHECK(r.x == std::vector<double>{1.0, 0.0, 0.0});
}

TEST_CASE("greedy optima match vertex scans and are feasible") {
  Rng rng(61);
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = pick(rng, 2, 7);
    const auto iv = random_coherent_interval(rng, n);
    std::vector<double> c(n);
    for (double& v : c) v = uniform(rng, -1, 1);
    const auto lo = greedy_linear_min({c, iv});
    const auto hi = greedy_linear_max({c, iv});
    CHECK(inside(iv, lo.x, 1e-12));
    CHECK(inside(iv, hi.x, 1e-12));
    CHECK(near(lo.value, dot(c, lo.x), 1e-12));
    CHECK(near(lo.value, vertex_scan_min(iv, c), 1e-12));
    std::vector<double> neg(c);
    for (double& v : neg) v = -v;
    CHECK(near(hi.value, -greedy_linear_min({neg, iv}).value, 1e-12));
    CHECK(lo.value <= hi.value + 1e-12);
  }
}

TEST_CASE("vertex enumeration") {
  const ProbabilityInterval vac({0.0, 0.0, 0.0}, {1.0, 1.0, 1.0});
  CHECK(credal_set_vertices(vac).size() == 3);
  Rng rng(62);
  for (int t = 0; t < 200; ++t) {
    const auto binary = random_coherent_interval(rng, 2);
    const auto v = credal_set_vertices(binary);
    CHECK(v.size() <= 2);
    CHECK(!v.empty());
    const auto iv = random_coherent_interval(rng, pick(rng, 3, 5));
    for (const auto& x : credal_set_vertices(iv)) CHECK(inside(iv, x, 1e-12));
  }
}

TEST_CASE("incoherent inputs are rejected") {
  // Coh3 fails: upper[0] exceeds 1 - lower[1].
  const ProbabilityInterval bad({0.6, 0.3}, {0.8, 0.4});
  CHECK_THROWS_AS(greedy_linear_min({{1.0, 0.0}, bad}), DomainError);
  const ProbabilityInterval ok({0.5, 0.5}, {0.5, 0.5});
  CHECK_THROWS_AS(greedy_linear_min({{1.0}, ok}), StructuralError);
}

TEST_CASE("backward recursion matches forward enumeration") {
  Rng rng(63);
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = pick(rng, 2, 3);
    const std::size_t k = pick(rng, 2, 4);
    const auto chain = random_chain(rng, n, k);
    const auto exact = credal_chain_bounds(chain);
    const auto oracle = brute_force_bounds(chain);
    REQUIRE(exact.size() == k - 1);
    for (std::size_t node = 0; node + 1 < k; ++node) {
      CHECK(exact[node].node == node + 2);
      for (std::size_t j = 0; j < n; ++j) {
        CHECK(near(exact[node].lower[j], oracle[node].lower[j], 1e-9));
        CHECK(near(exact[node].upper[j], oracle[node].upper[j], 1e-9));
      }
    }
  }
}

TEST_CASE("exact bounds are coherent and widen with the inputs") {
  Rng rng(64);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = pick(rng, 2, 6);
    const std::size_t k = pick(rng, 2, 6);
    const auto chain = random_chain(rng, n, k);
    const auto exact = credal_chain_bounds(chain);
    for (const auto& b : exact) CHECK(is_coherent(ProbabilityInterval(b.lower, b.upper), 1e-9));

    const double eps = uniform(rng, 0.0, 0.1);
    std::vector<std::vector<ProbabilityInterval>> links;
    for (const auto& link : chain.links()) {
      links.emplace_back();
      for (const auto& iv : link) links.back().push_back(widen(iv, eps));
    }
    const ChainModel wider(widen(chain.prior(), eps), links);
    const auto looser = credal_chain_bounds(wider);
    for (std::size_t node = 0; node < exact.size(); ++node) {
      for (std::size_t j = 0; j < n; ++j) {
        CHECK(looser[node].lower[j] <= exact[node].lower[j] + 1e-12);
        CHECK(looser[node].upper[j] >= exact[node].upper[j] - 1e-12);
      }
    }
  }
}

TEST_CASE("precise chains give the matrix product") {
  const ProbabilityInterval prior({0.25, 0.75}, {0.25, 0.75});
  const ChainModel chain(prior, {{ProbabilityInterval({0.5, 0.5}, {0.5, 0.5}),
                                  ProbabilityInterval({0.125, 0.875}, {0.125, 0.875})}});
  const auto b = credal_chain_bounds(chain);
  CHECK(near(b[0].lower[0], 0.25 * 0.5 + 0.75 * 0.125, 1e-15));
  CHECK(near(b[0].upper[0], b[0].lower[0], 1e-15));
  CHECK(b[0].mean_width() < 1e-15);
}

TEST_CASE("oracle guards") {
  Rng rng(65);
  CHECK_THROWS_AS(brute_force_bounds(random_chain(rng, 4, 2)), StructuralError);
  CHECK_THROWS_AS(brute_force_bounds(random_chain(rng, 2, 5)), StructuralError);
}
