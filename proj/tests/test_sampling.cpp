#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "credal_chain/errors.hpp"
#include "credal_chain/sampling.hpp"
#include "support.hpp"

using namespace credal;
using namespace testing_support;

namespace {

double mean_width(const std::vector<ProbabilityInterval>& s) {
  double total = 0.0;
  for (const auto& iv : s) {
    for (std::size_t i = 0; i < iv.size(); ++i) total += iv.width(i) / static_cast<double>(iv.size());
  }
  return total / static_cast<double>(s.size());
}

// Mean width under the uniform law on the coherent (l, u) polytope, by
// rejection from a box (n = 3) or the unit square in (l_1, l_2) (n = 2).
double rejection_mean_width(std::size_t n, std::optional<double> eps, std::size_t accepted) {
  Rng rng(99);
  double total = 0.0;
  std::size_t got = 0;
  while (got < accepted) {
    std::vector<double> l(n), u(n);
    if (n == 2) {
      l = {uniform(rng), uniform(rng)};
      u = {1.0 - l[1], 1.0 - l[0]};
    } else {
      // u = l + w with w uniform on [0, eps] is a unit-Jacobian shear.
      for (std::size_t i = 0; i < n; ++i) {
        l[i] = uniform(rng);
        u[i] = l[i] + uniform(rng, 0.0, eps.value_or(1.0));
      }
    }
    double sl = 0.0, su = 0.0, w = 0.0;
    bool ok = true;
    for (std::size_t i = 0; i < n; ++i) {
      ok = ok && l[i] <= u[i] && u[i] <= 1.0 && (!eps || u[i] - l[i] <= *eps);
      sl += l[i];
      su += u[i];
      w += u[i] - l[i];
    }
    ok = ok && sl <= 1.0 && su >= 1.0;
    for (std::size_t i = 0; i < n && ok; ++i) {
      ok = u[i] + sl - l[i] <= 1.0 && l[i] + su - u[i] >= 1.0;
    }
    if (!ok) continue;
    total += w / static_cast<double>(n);
    ++got;
  }
  return total / static_cast<double>(accepted);
}

}  // namespace

TEST_CASE("configuration checks") {
  CHECK_THROWS_AS((SamplerConfig{1, {}, 10, 1, 0}.validate()), StructuralError);
  CHECK_THROWS_AS((SamplerConfig{65, {}, 10, 1, 0}.validate()), StructuralError);
  CHECK_THROWS_AS((SamplerConfig{3, 0.0, 10, 1, 0}.validate()), DomainError);
  CHECK_THROWS_AS((SamplerConfig{3, 1.5, 10, 1, 0}.validate()), DomainError);
  CHECK_THROWS_AS((SamplerConfig{3, {}, 10, 0, 0}.validate()), DomainError);
  CHECK_NOTHROW((SamplerConfig{3, 0.1, 0, 1, 0}.validate()));
}

TEST_CASE("samples are coherent and respect the width cap") {
  for (std::size_t n : {2, 3, 5, 8}) {
    for (std::optional<double> eps : {std::optional<double>{}, std::optional<double>{0.1}}) {
      const auto s = sample_intervals({n, eps, 200, 10, 7 + n}, 300);
      REQUIRE(s.size() == 300);
      for (const auto& iv : s) {
        CHECK(iv.size() == n);
        CHECK(is_coherent(iv, 1e-9));
        if (eps) {
          for (std::size_t i = 0; i < n; ++i) CHECK(iv.width(i) <= *eps + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("binary samples are symmetric") {
  const auto s = sample_intervals({2, {}, 1000, 20, 11}, 10000);
  double total = 0.0;
  for (const auto& iv : s) total += iv.lower(0) + iv.upper(0);
  CHECK(near(total / 10000.0, 1.0, 0.02));
  for (const auto& iv : s) CHECK(near(iv.upper(0), 1.0 - iv.lower(1), 1e-12));
}

TEST_CASE("mean width matches rejection sampling") {
  CHECK(near(rejection_mean_width(2, {}, 200000), 1.0 / 3.0, 0.005));
  struct Case {
    std::size_t n;
    std::optional<double> eps;
  };
  for (const Case c : {Case{2, {}}, Case{2, 0.2}, Case{3, {}}, Case{3, 0.3}}) {
    const double walk = mean_width(sample_intervals({c.n, c.eps, 1000, 50, 13}, 8000));
    const double oracle = rejection_mean_width(c.n, c.eps, 40000);
    INFO("n=" << c.n << " walk=" << walk << " oracle=" << oracle);
    CHECK(near(walk, oracle, 0.01));
  }
}

TEST_CASE("seeded runs are reproducible") {
  const SamplerConfig cfg{4, 0.2, 100, 5, 2024};
  const auto a = sample_intervals(cfg, 50);
  const auto b = sample_intervals(cfg, 50);
  for (std::size_t t = 0; t < a.size(); ++t) {
    CHECK(a[t].lower() == b[t].lower());
    CHECK(a[t].upper() == b[t].upper());
  }
  const auto c = sample_intervals({4, 0.2, 100, 5, 2025}, 1);
  CHECK(c[0].lower() != a[0].lower());

  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(5, 9) == derive_seed(5, 9));
}

TEST_CASE("chains draw prior and conditionals from one stream") {
  const SamplerConfig cfg{3, {}, 100, 5, 31};
  const auto chain = sample_chain(cfg, 2);
  CHECK(chain.length() == 2);
  CHECK(chain.frame(0).name() == "X1");
  CHECK(chain.frame(1).name() == "X2");
  const auto flat = sample_intervals(cfg, 4);
  CHECK(chain.prior().lower() == flat[0].lower());
  for (std::size_t i = 0; i < 3; ++i) CHECK(chain.link(0)[i].lower() == flat[i + 1].lower());

  const auto longer = sample_chain({5, 0.1, 50, 2, 32}, 6);
  CHECK(longer.links().size() == 5);
  CHECK_THROWS_AS(sample_chain(cfg, 1), StructuralError);
}
