#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "credal_chain/credal.hpp"
#include "credal_chain/errors.hpp"
#include "credal_chain/experiment.hpp"
#include "credal_chain/inference.hpp"
#include "credal_chain/interval.hpp"
#include "credal_chain/mass.hpp"
#include "credal_chain/model_io.hpp"
#include "credal_chain/sampling.hpp"

namespace py = pybind11;
using namespace credal;

namespace {

Subset to_mask(const py::iterable& states, std::size_t n) {
  Subset s = 0;
  for (const auto& item : states) {
    const auto i = item.cast<std::size_t>();
    if (i >= n) throw StructuralError("state index " + std::to_string(i) + " out of range");
    s |= subsets::singleton(i);
  }
  return s;
}

py::frozenset to_states(Subset s) {
  py::list out;
  for (std::size_t i : subsets::members(s)) out.append(i);
  return py::frozenset(out);
}

py::dict mass_dict(const MassFunction& m) {
  py::dict d;
  for (const auto& [s, v] : m.focal_sets()) d[to_states(s)] = v;
  return d;
}

MassFunction mass_from_dict(std::size_t n, const py::dict& focal) {
  std::map<Subset, double> masses;
  for (const auto& [k, v] : focal) masses[to_mask(py::reinterpret_borrow<py::iterable>(k), n)] += v.cast<double>();
  return MassFunction(Frame(n, "X1"), masses);
}

py::dict diagnostics_dict(const StepDiagnostics& d) {
  py::dict out;
  out["parent_delta"] = d.parent_delta;
  out["parent_fixed"] = d.parent_fixed;
  out["uniform_fix"] = d.uniform_fix;
  out["lower_fix"] = d.lower_fix;
  out["upper_fix"] = d.upper_fix;
  out["lower_epsilon"] = d.lower_epsilon;
  out["upper_epsilon"] = d.upper_epsilon;
  out["closure_applied"] = d.closure_applied;
  out["multiplications"] = d.multiplications;
  return out;
}

Strategy strategy(const std::string& name) {
  const auto s = parse_strategy(name);
  if (!s) throw DomainError("unknown method " + name);
  return *s;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Belief-function and exact credal inference on interval-valued chains";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<StructuralError>(m, "StructuralError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_RuntimeError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

  py::class_<ProbabilityInterval>(m, "Interval")
      .def(py::init<std::vector<double>, std::vector<double>>(), py::arg("lower"), py::arg("upper"))
      .def_property_readonly("lower", [](const ProbabilityInterval& iv) { return iv.lower(); })
      .def_property_readonly("upper", [](const ProbabilityInterval& iv) { return iv.upper(); })
      .def("__len__", &ProbabilityInterval::size)
      .def("mean_width", &ProbabilityInterval::mean_width)
      .def("__repr__", [](const ProbabilityInterval& iv) { return "Interval(" + format_interval(iv) + ")"; });

  py::class_<GoodnessReport>(m, "Goodness")
      .def_readonly("sum_lower", &GoodnessReport::sum_lower)
      .def_readonly("sum_upper", &GoodnessReport::sum_upper)
      .def_readonly("delta", &GoodnessReport::delta)
      .def_readonly("slack", &GoodnessReport::slack)
      .def_property_readonly("good", &GoodnessReport::good);

  m.def("is_coherent", [](const ProbabilityInterval& iv) { return is_coherent(iv); });
  m.def("goodness", &goodness);
  m.def("coherent_closure", &coherent_closure);
  m.def(
      "natural_extension",
      [](const ProbabilityInterval& iv, const py::iterable& states) {
        const auto b = natural_extension(iv, to_mask(states, iv.size()));
        return py::make_tuple(b.bel, b.pl);
      },
      py::arg("interval"), py::arg("states"));
  m.def("fix_uniform", [](const ProbabilityInterval& iv) {
    auto f = fix_uniform(iv);
    return py::make_tuple(f.interval, f.added);
  });
  m.def("fix_adhoc", [](const ProbabilityInterval& iv, const std::vector<double>& coeffs) {
    auto f = fix_adhoc(iv, coeffs);
    return py::make_tuple(f.interval, f.added);
  });
  m.def("sgm", [](const ProbabilityInterval& iv) { return mass_dict(sgm_from_interval(iv)); },
        "Standard good mass of a good interval, keyed by frozensets of states.");
  m.def(
      "belief",
      [](std::size_t n, const py::dict& focal, const py::iterable& states) {
        const auto mf = mass_from_dict(n, focal);
        const Subset s = to_mask(states, n);
        return py::make_tuple(bel(mf, s), pl(mf, s));
      },
      py::arg("states_count"), py::arg("masses"), py::arg("subset"));

  py::class_<ChainModel>(m, "Chain")
      .def(py::init<ProbabilityInterval, std::vector<std::vector<ProbabilityInterval>>>(), py::arg("prior"),
           py::arg("links"))
      .def("__len__", &ChainModel::length)
      .def_property_readonly("prior", &ChainModel::prior)
      .def_property_readonly("links", &ChainModel::links)
      .def("to_json", [](const ChainModel& c) { return format_model(c); });

  m.def("read_model", [](const std::filesystem::path& p) { return read_model(p).chain(); });
  m.def("parse_model", [](const std::string& text) { return parse_model(text).chain(); });

  m.def(
      "propagate",
      [](const ChainModel& chain, const std::string& method, std::optional<py::dict> prior_mass) {
        std::optional<MassFunction> pm;
        if (prior_mass) pm = mass_from_dict(chain.frame(0).size(), *prior_mass);
        py::list out;
        for (const auto& r : propagate_chain(chain, strategy(method), pm)) {
          py::dict d;
          d["node"] = r.node;
          d["lower"] = r.lower;
          d["upper"] = r.upper;
          d["diagnostics"] = diagnostics_dict(r.diagnostics);
          out.append(d);
        }
        return out;
      },
      py::arg("chain"), py::arg("method"), py::arg("prior_mass") = py::none());

  m.def("credal_bounds", [](const ChainModel& chain) {
    py::list out;
    for (const auto& b : credal_chain_bounds(chain)) {
      py::dict d;
      d["node"] = b.node;
      d["lower"] = b.lower;
      d["upper"] = b.upper;
      out.append(d);
    }
    return out;
  });

  m.def(
      "sample_intervals",
      [](std::size_t n, std::size_t count, std::optional<double> eps, std::uint64_t seed, std::size_t burn_in,
         std::size_t thinning) { return sample_intervals({n, eps, burn_in, thinning, seed}, count); },
      py::arg("n"), py::arg("count"), py::arg("eps") = py::none(), py::arg("seed") = 0,
      py::arg("burn_in") = SamplerConfig{}.burn_in, py::arg("thinning") = SamplerConfig{}.thinning);
  m.def(
      "sample_chain",
      [](std::size_t n, std::size_t k, std::optional<double> eps, std::uint64_t seed) {
        SamplerConfig cfg;
        cfg.n = n;
        cfg.epsilon = eps;
        cfg.seed = seed;
        return sample_chain(cfg, k);
      },
      py::arg("n"), py::arg("k"), py::arg("eps") = py::none(), py::arg("seed") = 0);

  m.def(
      "run_experiment",
      [](std::size_t n, std::size_t k, std::size_t samples, std::vector<std::string> methods, std::uint64_t seed,
         std::optional<double> eps, std::size_t threads) {
        ExperimentSpec spec;
        spec.n = n;
        spec.k = k;
        spec.samples = samples;
        spec.methods = std::move(methods);
        spec.seed = seed;
        spec.epsilon = eps;
        spec.threads = threads;
        ExperimentResult res;
        {
          py::gil_scoped_release release;
          res = run_experiment(spec);
        }
        py::dict out;
        out["csv"] = format_csv(res.records);
        out["summary"] = py::module_::import("json").attr("loads")(format_summary(spec, res));
        return out;
      },
      py::arg("n"), py::arg("k"), py::arg("samples"), py::arg("methods"), py::arg("seed") = 0,
      py::arg("eps") = py::none(), py::arg("threads") = 0);
}
