#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "credal_chain/credal.hpp"
#include "credal_chain/errors.hpp"
#include "credal_chain/experiment.hpp"
#include "credal_chain/inference.hpp"
#include "credal_chain/model_io.hpp"
#include "credal_chain/sampling.hpp"
#include "support.hpp"

using namespace credal;
using namespace testing_support;
namespace fs = std::filesystem;

namespace {

const fs::path kData = CREDAL_CHAIN_DATA_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("credal_chain_test_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir / name;
}

struct EnvGuard {
  explicit EnvGuard(const char* value) {
    if (const char* old = std::getenv("CREDAL_CHAIN_THREADS")) saved = old;
    if (value) {
      ::setenv("CREDAL_CHAIN_THREADS", value, 1);
    } else {
      ::unsetenv("CREDAL_CHAIN_THREADS");
    }
  }
  ~EnvGuard() {
    if (saved) {
      ::setenv("CREDAL_CHAIN_THREADS", saved->c_str(), 1);
    } else {
      ::unsetenv("CREDAL_CHAIN_THREADS");
    }
  }
  std::optional<std::string> saved;
};

}  // namespace

TEST_CASE("model files round trip") {
  const auto urn = read_model(kData / "urn.json");
  CHECK(urn.frames.size() == 2);
  CHECK(urn.frames[0].label(0) == "R");
  CHECK(urn.frames[1].label(1) == "T");
  const auto chain = urn.chain();
  const auto again = parse_model(format_model(chain)).chain();
  CHECK(again == chain);

  Rng rng(71);
  for (int t = 0; t < 50; ++t) {
    const auto c = random_chain(rng, pick(rng, 2, 5), pick(rng, 2, 5));
    CHECK(parse_model(format_model(c)).chain() == c);
  }
}

TEST_CASE("model parse errors") {
  try {
    parse_model("{\"states\": [2, 2], \"prior\": ");
    FAIL("no exception");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("byte") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_model("[]"), ParseError);
  CHECK_THROWS_AS(parse_model(R"({"states": [2, 2], "links": []})"), ParseError);
  CHECK_THROWS_AS(parse_model(R"({"states": [2, 2], "prior": {"lower": [0.1, "x"], "upper": [1, 1]},
                                  "links": [[{"lower": [0, 0], "upper": [1, 1]},
                                             {"lower": [0, 0], "upper": [1, 1]}]]})"),
                  ParseError);
  // Wrong number of conditionals per link.
  CHECK_THROWS_AS(parse_model(R"({"states": [2, 2], "prior": {"lower": [0, 0], "upper": [1, 1]},
                                  "links": [[{"lower": [0, 0], "upper": [1, 1]}]]})"),
                  ParseError);
  // lower > upper is a value error.
  CHECK_THROWS_AS(parse_model(R"({"states": [2, 2], "prior": {"lower": [0.6, 0], "upper": [0.5, 1]},
                                  "links": [[{"lower": [0, 0], "upper": [1, 1]},
                                             {"lower": [0, 0], "upper": [1, 1]}]]})"),
                  DomainError);
  CHECK_THROWS_AS(read_model(kData / "does_not_exist.json"), ParseError);
}

TEST_CASE("mass files") {
  const auto m = read_mass(kData / "four_state_prior_mass.json");
  CHECK(m.frame().num_states() == 4);
  CHECK(near(m.mass(0b0011), 0.1, 1e-15));
  CHECK(near(m.mass(0b0001), 0.2, 1e-15));
  CHECK_THROWS_AS(parse_mass(R"({"states": 2, "focal": [{"set": [0], "mass": 0.5}]})"), DomainError);
  CHECK_THROWS_AS(parse_mass(R"({"states": 2, "focal": [{"set": [3], "mass": 1.0}]})"), ParseError);
  CHECK_THROWS_AS(parse_mass(R"({"states": 2})"), ParseError);
}

TEST_CASE("csv layout") {
  const std::vector<WidthRecord> recs{{1, "credal", 0.5, 0.25, 0.75, 10}, {2, "sgm-adhoc", 1.0 / 3.0, 0, 1, 10}};
  CHECK(format_csv(recs) ==
        "step,method,mean_width,band_low,band_high,samples\n"
        "1,credal,0.500000,0.250000,0.750000,10\n"
        "2,sgm-adhoc,0.333333,0.000000,1.000000,10\n");
}

TEST_CASE("spec validation") {
  ExperimentSpec s;
  s.methods = {"credal"};
  CHECK_NOTHROW(s.validate());
  s.methods = {"credal", "credal"};
  CHECK_THROWS_AS(s.validate(), DomainError);
  s.methods = {"nope"};
  CHECK_THROWS_AS(s.validate(), DomainError);
  s.methods = {"credal"};
  s.epsilon = 0.0;
  CHECK_THROWS_AS(s.validate(), DomainError);
  s.epsilon.reset();
  s.samples = 0;
  CHECK_THROWS_AS(s.validate(), DomainError);
}

TEST_CASE("worker count honours the environment cap") {
  {
    EnvGuard env("2");
    CHECK(worker_count(8, 100) == 2);
    CHECK(worker_count(1, 100) == 1);
    CHECK(worker_count(0, 100) <= 2);
  }
  {
    EnvGuard env(nullptr);
    CHECK(worker_count(8, 100) == 8);
    CHECK(worker_count(8, 3) == 3);
  }
  {
    EnvGuard env("junk");
    CHECK(worker_count(4, 100) == 4);
  }
}

TEST_CASE("results do not depend on the thread count") {
  ExperimentSpec spec;
  spec.n = 3;
  spec.k = 4;
  spec.samples = 40;
  spec.epsilon = 0.3;
  spec.methods = {"credal", "sgm-uniform", "sgm-adhoc", "adhoc-mass", "full-mass"};
  spec.seed = 5;
  spec.threads = 1;
  const auto one = run_experiment(spec);
  spec.threads = 4;
  const auto four = run_experiment(spec);
  CHECK(one.threads_used == 1);
  CHECK(format_csv(one.records) == format_csv(four.records));
  CHECK(format_summary(spec, one) == format_summary(spec, four));
  CHECK(one.records.size() == spec.k * spec.methods.size());
}

TEST_CASE("experiment aggregates match a direct recomputation") {
  ExperimentSpec spec;
  spec.n = 3;
  spec.k = 3;
  spec.samples = 30;
  spec.methods = {"sgm-adhoc", "credal"};
  spec.seed = 12;
  const auto res = run_experiment(spec);

  std::vector<double> final_belief, final_credal;
  double riw = 0.0;
  std::size_t counted = 0;
  for (std::size_t i = 0; i < spec.samples; ++i) {
    SamplerConfig cfg;
    cfg.n = spec.n;
    cfg.seed = derive_seed(spec.seed, i);
    const auto chain = sample_chain(cfg, spec.k);
    const auto belief = propagate_chain(chain, Strategy::kSgmAdhocFix);
    const auto exact = credal_chain_bounds(chain);
    final_belief.push_back(belief.back().mean_width());
    final_credal.push_back(exact.back().mean_width());
    for (std::size_t j = 0; j < spec.n; ++j) {
      const double cw = exact[0].upper[j] - exact[0].lower[j];
      const double bw = belief[0].upper[j] - belief[0].lower[j];
      // Belief bounds always contain the credal ones.
      CHECK(bw >= cw - 1e-9);
      if (cw >= 1e-12) {
        riw += (bw - cw) / cw;
        ++counted;
      }
    }
  }
  const auto avg = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  REQUIRE(res.summaries.size() == 2);
  CHECK(near(res.summaries[0].final_mean_width, avg(final_belief), 1e-12));
  CHECK(near(res.summaries[1].final_mean_width, avg(final_credal), 1e-12));
  CHECK(near(res.summaries[0].riw, riw / static_cast<double>(counted), 1e-12));
  CHECK(near(res.summaries[1].riw, 0.0, 1e-12));
  CHECK(near(res.summaries[0].final_width_ratio, avg(final_belief) / avg(final_credal), 1e-12));

  // Bands bracket the means.
  for (const auto& r : res.records) {
    CHECK(r.band_low <= r.mean_width + 1e-12);
    CHECK(r.band_high >= r.mean_width - 1e-12);
  }
}

TEST_CASE("written outputs") {
  ExperimentSpec spec;
  spec.n = 2;
  spec.k = 3;
  spec.samples = 10;
  spec.epsilon = 0.2;
  spec.methods = {"credal", "adhoc-mass"};
  spec.seed = 3;
  spec.out = scratch("widths.csv");
  const auto res = run_experiment(spec);
  write_experiment(spec, res);
  CHECK(slurp(spec.out) == format_csv(res.records));
  const auto summary = nlohmann::json::parse(slurp(spec.out.string() + ".summary.json"));
  CHECK(summary["config"]["generator"] == "mt19937_64");
  CHECK(summary["config"]["epsilon"] == 0.2);
  CHECK(summary["methods"].size() == 2);
  CHECK(summary["methods"][1]["method"] == "adhoc-mass");
  CHECK(summary["methods"][1].contains("within_three_epsilon"));
  CHECK_FALSE(fs::exists(spec.out.string() + ".partial"));

  // The summary target is a non-empty directory: nothing may be left behind.
  ExperimentSpec blocked = spec;
  blocked.out = scratch("blocked.csv");
  fs::create_directories(blocked.out.string() + ".summary.json/inner");
  CHECK_THROWS(write_experiment(blocked, res));
  CHECK_FALSE(fs::exists(blocked.out));
  CHECK_FALSE(fs::exists(blocked.out.string() + ".partial"));
  CHECK_FALSE(fs::exists(blocked.out.string() + ".summary.json.partial"));
  fs::remove_all(spec.out.parent_path());
}
