#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "aconet/analysis.hpp"
#include "aconet/colony.hpp"
#include "aconet/harness.hpp"
#include "aconet/meanfield.hpp"

namespace py = pybind11;
using namespace aconet;

namespace {

SpinConfig config_from_bits(const std::vector<int>& bits) {
  return SpinConfig::from_bits(bits);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Ant colony search over a growing pheromone reference network, "
            "with the matching mean-field SDE integrator.";

  py::class_<IsingParams>(m, "IsingParams")
      .def(py::init<int, double, double>(), py::arg("n_spins"), py::arg("coupling"),
           py::arg("field"))
      .def_readwrite("n_spins", &IsingParams::n_spins)
      .def_readwrite("coupling", &IsingParams::coupling)
      .def_readwrite("field", &IsingParams::field);

  py::class_<GrowthParams>(m, "GrowthParams")
      .def(py::init<int, double>(), py::arg("in_degree"), py::arg("asymmetry"))
      .def_readwrite("in_degree", &GrowthParams::in_degree)
      .def_readwrite("asymmetry", &GrowthParams::asymmetry);

  py::class_<DecisionParams>(m, "DecisionParams")
      .def(py::init<double>(), py::arg("alpha"))
      .def_readwrite("alpha", &DecisionParams::alpha);

  py::class_<TheoryPoint>(m, "TheoryPoint")
      .def_readonly("m_star", &TheoryPoint::m_star)
      .def_readonly("alpha_s", &TheoryPoint::alpha_s)
      .def_readonly("alpha_c", &TheoryPoint::alpha_c)
      .def_readonly("potential_curvature", &TheoryPoint::potential_curvature)
      .def_readonly("unstable", &TheoryPoint::unstable)
      .def("__repr__", [](const TheoryPoint& p) {
        std::ostringstream os;
        os << "TheoryPoint(m_star=" << p.m_star << ", alpha_s=" << p.alpha_s
           << ", alpha_c=" << p.alpha_c << ", unstable=" << (p.unstable ? "True" : "False")
           << ")";
        return os.str();
      });

  py::class_<TrialResult>(m, "TrialResult")
      .def_readonly("final_magnetizations", &TrialResult::final_magnetizations)
      .def_readonly("seed", &TrialResult::seed)
      .def_readonly("total_ants", &TrialResult::total_ants)
      .def_readonly("energy_trace", &TrialResult::energy_trace)
      .def_readonly("ground_state_found", &TrialResult::ground_state_found);

  m.def(
      "energy",
      [](const IsingParams& params, const std::vector<int>& bits) {
        return energy(params, config_from_bits(bits));
      },
      py::arg("params"), py::arg("bits"),
      "Energy of a binary choice vector under the infinite-range model.");
  m.def("energy_of_magnetization", &energy_of_magnetization, py::arg("params"), py::arg("m"));
  m.def(
      "effective_field",
      [](const IsingParams& params, const std::vector<int>& bits, int k) {
        return effective_field(params, config_from_bits(bits), k);
      },
      py::arg("params"), py::arg("bits"), py::arg("k"));

  m.def("total_popularity", &total_popularity, py::arg("params"), py::arg("t"));
  m.def(
      "grow_network",
      [](const GrowthParams& params, std::int64_t t_final, std::uint64_t seed) {
        const SelectionRecord record = grow_network(params, t_final, seed);
        std::vector<std::vector<AntId>> refs;
        refs.reserve(record.refs.size());
        for (const ReferenceSet& r : record.refs) refs.push_back(r.ants);
        return refs;
      },
      py::arg("params"), py::arg("t_final"), py::arg("seed"),
      "Reference sets chosen by ants in_degree+2 .. t_final, one list per ant.");

  m.def("theory_point", &theory_point, py::arg("coupling"), py::arg("field"), py::arg("alpha"));
  m.def(
      "potential",
      [](const std::vector<double>& m, double coupling, double field, double alpha) {
        return potential(m, coupling, field, alpha);
      },
      py::arg("m"), py::arg("coupling"), py::arg("field"), py::arg("alpha"));
  m.def(
      "stationary_density_lattice",
      [](const std::vector<double>& m, double coupling, double field, double alpha,
         int in_degree) {
        MeanFieldParams params;
        params.n_spins = static_cast<int>(m.size());
        params.coupling = coupling;
        params.field = field;
        params.alpha = alpha;
        params.growth = GrowthParams{in_degree, -1.0};
        return stationary_density_lattice(m, params);
      },
      py::arg("m"), py::arg("coupling"), py::arg("field"), py::arg("alpha"),
      py::arg("in_degree"));

  m.def(
      "run_trial",
      [](const IsingParams& ising, const GrowthParams& growth, const DecisionParams& decision,
         std::int64_t total_ants, std::uint64_t seed, std::int64_t trace_interval) {
        ColonyParams params{ising, growth, decision};
        TrialConfig config;
        config.total_ants = total_ants;
        config.seed = seed;
        config.trace_interval = trace_interval;
        py::gil_scoped_release release;
        return run_trial(params, config);
      },
      py::arg("ising"), py::arg("growth"), py::arg("decision"), py::arg("total_ants"),
      py::arg("seed"), py::arg("trace_interval") = -1,
      "One colony trial; returns the final magnetizations and energy trace.");

  m.def(
      "integrate",
      [](int n_spins, double coupling, double field, double alpha, const GrowthParams& growth,
         std::int64_t total_steps, std::uint64_t seed, std::int64_t snapshot_interval,
         bool colony_matched_init) {
        MeanFieldParams params;
        params.n_spins = n_spins;
        params.coupling = coupling;
        params.field = field;
        params.alpha = alpha;
        params.growth = growth;
        IntegrateConfig config;
        config.total_steps = total_steps;
        config.seed = seed;
        config.snapshot_interval = snapshot_interval;
        config.init =
            colony_matched_init ? MeanFieldInit::colony_matched : MeanFieldInit::zero;
        py::gil_scoped_release release;
        const MeanFieldTrajectory trajectory = integrate(params, config);
        std::vector<std::pair<std::int64_t, std::vector<double>>> snapshots;
        snapshots.reserve(trajectory.snapshots.size());
        for (const MeanFieldState& s : trajectory.snapshots) snapshots.emplace_back(s.t, s.m);
        return snapshots;
      },
      py::arg("n_spins"), py::arg("coupling"), py::arg("field"), py::arg("alpha"),
      py::arg("growth"), py::arg("total_steps"), py::arg("seed"),
      py::arg("snapshot_interval") = 0, py::arg("colony_matched_init") = true,
      "Euler-Maruyama trajectory of the magnetization SDE; returns (t, M) snapshots.");

  m.def(
      "mean_magnetization",
      [](const std::vector<TrialResult>& results) { return mean_magnetization(results); },
      py::arg("results"));
  m.def(
      "success_probability",
      [](const std::vector<TrialResult>& results) { return success_probability(results); },
      py::arg("results"));
  m.def(
      "histogram",
      [](const std::vector<double>& values, int bins, double lo, double hi) {
        const Histogram h = histogram(values, bins, lo, hi);
        return py::make_tuple(h.counts, h.n_below, h.n_above);
      },
      py::arg("values"), py::arg("bins"), py::arg("lo") = -1.0, py::arg("hi") = 1.0,
      "Equal-width bin counts plus the number of flagged out-of-range values.");

  m.def("derive_seed", &derive_seed, py::arg("master"), py::arg("a"), py::arg("b"), py::arg("c"),
        "Stable 64-bit stream-seed derivation used by the sweep harness.");
}
