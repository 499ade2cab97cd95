// Copyright 2026 The PNC Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Python bindings for the pnc core. Markov states are 0-based here, as in C++.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>

#include "pnc/expect.hpp"
#include "pnc/model.hpp"
#include "pnc/policy.hpp"
#include "pnc/scenario.hpp"
#include "pnc/sim.hpp"
#include "pnc/solver.hpp"

namespace py = pybind11;
using namespace pnc;

PYBIND11_MODULE(_pnc, m) {
  m.doc() = "Predictive network control: models, planners and simulation";

  py::register_exception<InfeasibleProgram>(m, "InfeasibleProgram");
  py::register_exception<ScenarioError>(m, "ScenarioError", PyExc_ValueError);

  py::class_<SchedulePhase>(m, "SchedulePhase")
      .def(py::init<>())
      .def(py::init([](std::int64_t duration, double probability) {
             return SchedulePhase{duration, probability};
           }),
           py::arg("duration"), py::arg("probability"))
      .def_readwrite("duration", &SchedulePhase::duration)
      .def_readwrite("probability", &SchedulePhase::probability);

  py::class_<ArrivalProcess>(m, "ArrivalProcess")
      .def(py::init<>())
      .def_readwrite("probability", &ArrivalProcess::probability)
      .def_readwrite("weight", &ArrivalProcess::weight)
      .def_readwrite("schedule", &ArrivalProcess::schedule)
      .def_readwrite("phase_offset", &ArrivalProcess::phase_offset)
      .def("probability_at", &ArrivalProcess::probability_at)
      .def("rate_at", &ArrivalProcess::rate_at)
      .def("mean_rate", &ArrivalProcess::mean_rate);

  py::class_<NetworkSpec>(m, "NetworkSpec")
      .def(py::init<>())
      .def_readwrite("link_matrix", &NetworkSpec::link_matrix)
      .def_readwrite("constituency", &NetworkSpec::constituency)
      .def_readwrite("transition", &NetworkSpec::transition)
      .def_readwrite("success_weights", &NetworkSpec::success_weights)
      .def_readwrite("arrivals", &NetworkSpec::arrivals)
      .def_property_readonly("buffers", &NetworkSpec::buffers)
      .def_property_readonly("links", &NetworkSpec::links)
      .def_property_readonly("states", &NetworkSpec::states)
      .def("validate", &NetworkSpec::validate)
      .def("weighted_links", &NetworkSpec::weighted_links)
      .def("arrival_rates_at", &NetworkSpec::arrival_rates_at);

  py::class_<QueueState>(m, "QueueState")
      .def(py::init<>())
      .def(py::init([](const IntVector& q, int sigma, std::int64_t t) { return QueueState{q, sigma, t}; }),
           py::arg("q"), py::arg("sigma") = 0, py::arg("t") = 0)
      .def_readwrite("q", &QueueState::q)
      .def_readwrite("sigma", &QueueState::sigma)
      .def_readwrite("t", &QueueState::t);

  py::class_<Scenario>(m, "Scenario")
      .def_readwrite("spec", &Scenario::spec)
      .def_readwrite("initial", &Scenario::initial)
      .def("dump", &dump_scenario);

  m.def("builtin_scenario", &builtin_scenario, py::arg("name"));
  m.def("natural_alternating_scenario", &natural_alternating_scenario, py::arg("phase_offset") = 0);
  m.def("load_scenario", &load_scenario, py::arg("source"));
  m.def("parse_scenario", &parse_scenario, py::arg("text"));

  m.def("is_admissible", &is_admissible, py::arg("q"), py::arg("u"), py::arg("spec"));
  m.def("markov_dist", &markov_dist, py::arg("spec"), py::arg("sigma0"), py::arg("t"));
  m.def("expected_B", py::overload_cast<const NetworkSpec&, int, int>(&expected_B), py::arg("spec"),
        py::arg("sigma0"), py::arg("t"));
  m.def("expected_cross", py::overload_cast<const NetworkSpec&, int, int, int, const Matrix&>(&expected_cross),
        py::arg("spec"), py::arg("sigma0"), py::arg("k"), py::arg("l"), py::arg("Q"));

  py::class_<CostTerms>(m, "CostTerms")
      .def_readonly("constant", &CostTerms::constant)
      .def_readonly("linear", &CostTerms::linear)
      .def_readonly("quadratic", &CostTerms::quadratic);
  py::class_<ConstraintSystem>(m, "ConstraintSystem")
      .def_readonly("D", &ConstraintSystem::D)
      .def_readonly("d", &ConstraintSystem::d);
  m.def("assemble_costs", &assemble_costs, py::arg("q0"), py::arg("sigma0"), py::arg("spec"),
        py::arg("arrival_rates"), py::arg("H"), py::arg("Q"), py::arg("R"));
  m.def("assemble_constraints", &assemble_constraints, py::arg("q0"), py::arg("sigma0"), py::arg("spec"),
        py::arg("arrival_rates"), py::arg("H"), py::arg("tau_hard"));

  py::class_<BqpInstance>(m, "BqpInstance")
      .def(py::init([](const Vector& c, const Matrix& Hq, const Matrix& A, const Vector& b) {
             return BqpInstance{c, Hq, A, b};
           }),
           py::arg("c"), py::arg("Hq"), py::arg("A"), py::arg("b"))
      .def_readwrite("c", &BqpInstance::c)
      .def_readwrite("Hq", &BqpInstance::Hq)
      .def_readwrite("A", &BqpInstance::A)
      .def_readwrite("b", &BqpInstance::b);
  py::class_<BqpSolution>(m, "BqpSolution")
      .def_readonly("u_star", &BqpSolution::u_star)
      .def_readonly("value", &BqpSolution::value)
      .def_readonly("nodes_explored", &BqpSolution::nodes_explored);
  m.def("solve", &solve, py::arg("instance"));
  m.def("solve_linear", &solve_linear, py::arg("instance"));

  py::enum_<PolicyKind>(m, "PolicyKind")
      .value("MAXWEIGHT", PolicyKind::kMaxWeight)
      .value("LINEAR_PNC", PolicyKind::kLinearPnc)
      .value("QUADRATIC_PNC", PolicyKind::kQuadraticPnc);
  py::class_<PolicyConfig>(m, "PolicyConfig")
      .def_readwrite("kind", &PolicyConfig::kind)
      .def_readwrite("H", &PolicyConfig::H)
      .def_readwrite("tau_hard", &PolicyConfig::tau_hard)
      .def_readwrite("Q", &PolicyConfig::Q)
      .def_readwrite("R", &PolicyConfig::R)
      .def_static("maxweight", &PolicyConfig::maxweight)
      .def_static("lpnc", &PolicyConfig::lpnc, py::arg("H"), py::arg("tau_hard"))
      .def_static("qpnc", &PolicyConfig::qpnc, py::arg("H"), py::arg("tau_hard"))
      .def("label", &PolicyConfig::label)
      .def("__repr__", [](const PolicyConfig& c) { return "PolicyConfig(" + c.label() + ")"; });

  // The controller keeps a pointer to its spec, so the spec must outlive it.
  py::class_<Controller>(m, "Controller")
      .def(py::init<const NetworkSpec&, PolicyConfig>(), py::arg("spec"), py::arg("config"), py::keep_alive<1, 2>())
      .def("decide", py::overload_cast<const QueueState&>(&Controller::decide), py::arg("state"))
      .def("plan", &Controller::plan, py::arg("state"), py::arg("arrival_rates"));
  m.def("decide", py::overload_cast<const QueueState&, const NetworkSpec&, const PolicyConfig&>(&decide),
        py::arg("state"), py::arg("spec"), py::arg("config"));

  py::class_<SimulationTrace>(m, "SimulationTrace")
      .def_readonly("sigma", &SimulationTrace::sigma)
      .def_readonly("queues", &SimulationTrace::queues)
      .def_readonly("controls", &SimulationTrace::controls)
      .def_readonly("successes", &SimulationTrace::successes)
      .def_readonly("arrivals", &SimulationTrace::arrivals)
      .def_readonly("final_queue", &SimulationTrace::final_queue)
      .def_readonly("final_sigma", &SimulationTrace::final_sigma)
      .def_readonly("total_departures", &SimulationTrace::total_departures)
      .def_property_readonly("slots", &SimulationTrace::slots)
      .def("average_queue", &SimulationTrace::average_queue)
      .def("total_queue", &SimulationTrace::total_queue);
  m.def("run", py::overload_cast<const NetworkSpec&, const PolicyConfig&, const QueueState&, std::int64_t,
                                 std::uint64_t>(&run),
        py::arg("spec"), py::arg("config"), py::arg("initial"), py::arg("T"), py::arg("seed"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<StabilityVerdict>(m, "StabilityVerdict")
      .def_readonly("slope", &StabilityVerdict::slope)
      .def_readonly("stable", &StabilityVerdict::stable);
  m.def("classify_stability", &classify_stability, py::arg("trace"),
        py::arg("window_fraction") = kDefaultWindowFraction, py::arg("slope_threshold") = kDefaultSlopeThreshold);

  py::class_<RegionPoint>(m, "RegionPoint")
      .def_readonly("a1", &RegionPoint::a1)
      .def_readonly("a2", &RegionPoint::a2)
      .def_readonly("stable_fraction", &RegionPoint::stable_fraction)
      .def_readonly("stable", &RegionPoint::stable);
  m.def("fit_arrival_weights", &fit_arrival_weights, py::arg("spec"), py::arg("grid"));
  m.def("sweep_region", &sweep_region, py::arg("spec"), py::arg("config"), py::arg("initial"), py::arg("grid"),
        py::arg("T"), py::arg("seeds"), py::call_guard<py::gil_scoped_release>());

  py::class_<PolicySummary>(m, "PolicySummary")
      .def_readonly("config", &PolicySummary::cfg)
      .def_readonly("avg_queue", &PolicySummary::avg_queue);
  m.def("compare_policies", &compare_policies, py::arg("spec"), py::arg("configs"), py::arg("initial"),
        py::arg("T"), py::arg("seeds"), py::call_guard<py::gil_scoped_release>());
}
