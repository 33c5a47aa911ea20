#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "dsrcbo/accept.hpp"
#include "dsrcbo/allocator.hpp"
#include "dsrcbo/analytic.hpp"
#include "dsrcbo/collision.hpp"
#include "dsrcbo/risk.hpp"
#include "dsrcbo/simulator.hpp"
#include "dsrcbo/solver.hpp"
#include "dsrcbo/spatial.hpp"

namespace py = pybind11;
using namespace dsrcbo;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Risk-adaptive DSRC broadcast backoff: closed-form engine and slot simulator";

    py::enum_<DivisionRule>(m, "DivisionRule")
        .value("HIGH_RISK_DECREASING", DivisionRule::HighRiskDecreasing)
        .value("LOW_RISK_DECREASING", DivisionRule::LowRiskDecreasing);
    py::enum_<AllocBranch>(m, "AllocBranch")
        .value("DECREASING", AllocBranch::Decreasing)
        .value("FLAT", AllocBranch::Flat);
    py::enum_<TauModel>(m, "TauModel")
        .value("BUDGET", TauModel::Budget)
        .value("CHAIN", TauModel::Chain)
        .value("UNTRUNCATED", TauModel::Untruncated);
    py::enum_<BusyModel>(m, "BusyModel")
        .value("OCCUPANCY", BusyModel::Occupancy)
        .value("BINOMIAL_PERIOD", BusyModel::BinomialPeriod)
        .value("BINOMIAL_SLOT", BusyModel::BinomialSlot);
    py::enum_<AllocatorMode>(m, "AllocatorMode")
        .value("PROPOSED", AllocatorMode::Proposed)
        .value("FLAT_ONLY", AllocatorMode::FlatOnly);
    py::enum_<TaggedSelection>(m, "TaggedSelection")
        .value("UNIFORM", TaggedSelection::Uniform)
        .value("CENTRAL", TaggedSelection::Central);
    py::enum_<Outcome>(m, "Outcome")
        .value("SUC", Outcome::Suc)
        .value("SYNC", Outcome::Sync)
        .value("HN", Outcome::Hn)
        .value("EXP", Outcome::Exp);

    py::class_<RiskModelParams>(m, "RiskModelParams")
        .def(py::init<>())
        .def_readwrite("sigma", &RiskModelParams::sigma)
        .def_readwrite("num_categories", &RiskModelParams::num_categories)
        .def_readwrite("step_size", &RiskModelParams::step_size)
        .def_readwrite("speed_limit", &RiskModelParams::speed_limit)
        .def_readwrite("division_rule", &RiskModelParams::division_rule);

    py::class_<MacParams>(m, "MacParams")
        .def(py::init<>())
        .def_readwrite("cw", &MacParams::cw)
        .def_readwrite("l_bcn_slots", &MacParams::l_bcn_slots)
        .def_readwrite("big_l_bcn_slots", &MacParams::big_l_bcn_slots)
        .def_readwrite("r_decay", &MacParams::r_decay);

    py::class_<BranchMix>(m, "BranchMix")
        .def(py::init<>())
        .def(py::init([](double dec, double flat) {
                 return BranchMix{dec, flat};
             }),
             py::arg("decreasing"), py::arg("flat"))
        .def_readwrite("decreasing", &BranchMix::decreasing)
        .def_readwrite("flat", &BranchMix::flat);

    py::class_<Region>(m, "Region")
        .def(py::init<>())
        .def_readwrite("side_length_m", &Region::side_length_m);

    py::class_<VehicleNode>(m, "VehicleNode")
        .def(py::init<>())
        .def_readwrite("id", &VehicleNode::id)
        .def_readwrite("x", &VehicleNode::x)
        .def_readwrite("y", &VehicleNode::y)
        .def_readwrite("heading_rad", &VehicleNode::heading_rad)
        .def_readwrite("speed_mps", &VehicleNode::speed_mps)
        .def_readwrite("psi", &VehicleNode::psi)
        .def_readwrite("risk_category", &VehicleNode::risk_category);

    py::class_<Scenario>(m, "Scenario")
        .def(py::init<>())
        .def_readwrite("region", &Scenario::region)
        .def_readwrite("density_per_m2", &Scenario::density_per_m2)
        .def_readwrite("r_cs_m", &Scenario::r_cs_m)
        .def_readwrite("mac", &Scenario::mac)
        .def_readwrite("risk", &Scenario::risk)
        .def_readwrite("mean_speed", &Scenario::mean_speed)
        .def_readwrite("std_speed", &Scenario::std_speed)
        .def_readwrite("num_periods", &Scenario::num_periods)
        .def_readwrite("num_replications", &Scenario::num_replications)
        .def_readwrite("master_seed", &Scenario::master_seed)
        .def_readwrite("allocator_mode", &Scenario::allocator_mode)
        .def_readwrite("tagged_selection", &Scenario::tagged_selection)
        .def_readwrite("mobility_dt_s", &Scenario::mobility_dt_s)
        .def_readwrite("tau_model", &Scenario::tau_model)
        .def_readwrite("busy_model", &Scenario::busy_model)
        .def_readwrite("fp_tol", &Scenario::fp_tol)
        .def_readwrite("fp_max_iter", &Scenario::fp_max_iter)
        .def_readwrite("irt_max_nu", &Scenario::irt_max_nu)
        .def_readwrite("analytic_n_cs", &Scenario::analytic_n_cs)
        .def("derived_n_cs", &Scenario::derived_n_cs)
        .def("branch_mix", &Scenario::branch_mix);

    py::class_<FixedPointResult>(m, "FixedPointResult")
        .def_readonly("tau", &FixedPointResult::tau)
        .def_readonly("p_b", &FixedPointResult::p_b)
        .def_readonly("iterations", &FixedPointResult::iterations)
        .def_readonly("residual", &FixedPointResult::residual)
        .def_readonly("converged", &FixedPointResult::converged);

    py::class_<AnalyticReport>(m, "AnalyticReport")
        .def_readonly("n_cs", &AnalyticReport::n_cs)
        .def_readonly("tau", &AnalyticReport::tau)
        .def_readonly("tau_decreasing", &AnalyticReport::tau_decreasing)
        .def_readonly("tau_flat", &AnalyticReport::tau_flat)
        .def_readonly("p_b", &AnalyticReport::p_b)
        .def_readonly("p_exp", &AnalyticReport::p_exp)
        .def_readonly("e_nbo", &AnalyticReport::e_nbo)
        .def_readonly("p_sync", &AnalyticReport::p_sync)
        .def_readonly("p_hn", &AnalyticReport::p_hn)
        .def_readonly("p_col", &AnalyticReport::p_col)
        .def_readonly("pdr", &AnalyticReport::pdr)
        .def_readonly("irt", &AnalyticReport::irt)
        .def_readonly("converged", &AnalyticReport::converged)
        .def_readonly("p_ncs_positive", &AnalyticReport::p_ncs_positive);

    py::class_<OutcomeCounts>(m, "OutcomeCounts")
        .def_readonly("suc", &OutcomeCounts::suc)
        .def_readonly("sync", &OutcomeCounts::sync)
        .def_readonly("hn", &OutcomeCounts::hn)
        .def_readonly("exp", &OutcomeCounts::exp)
        .def("attempts", &OutcomeCounts::attempts);

    py::class_<SimReport>(m, "SimReport")
        .def_readonly("tau_hat", &SimReport::tau_hat)
        .def_readonly("p_b_hat", &SimReport::p_b_hat)
        .def_readonly("p_exp_hat", &SimReport::p_exp_hat)
        .def_readonly("pdr_hat", &SimReport::pdr_hat)
        .def_readonly("e_nbo_hat", &SimReport::e_nbo_hat)
        .def_readonly("se_tau", &SimReport::se_tau)
        .def_readonly("se_pdr", &SimReport::se_pdr)
        .def_readonly("se_p_b", &SimReport::se_p_b)
        .def_readonly("counts", &SimReport::counts)
        .def_readonly("irt_histogram", &SimReport::irt_histogram)
        .def_readonly("mean_n_cs", &SimReport::mean_n_cs)
        .def_readonly("total_periods", &SimReport::total_periods);

    // risk model
    m.def("psi_pdf", &psi_pdf, py::arg("psi"), py::arg("sigma"));
    m.def("psi_cdf", &psi_cdf, py::arg("psi"), py::arg("sigma"));
    m.def("categorize", &categorize, py::arg("psi"), py::arg("params"));
    m.def("p_dec", &p_dec);
    m.def("p_flat", &p_flat);
    m.def("category_masses", &category_masses);

    // allocation
    m.def("p_ini", &p_ini, py::arg("c"), py::arg("k"), py::arg("mac"), py::arg("risk"));
    m.def("p_ini_row", py::overload_cast<AllocBranch, const MacParams&>(&p_ini_row));
    m.def("delta_c", &delta_c, py::arg("c"), py::arg("mac"));
    m.def(
        "dump_chain",
        [](int k, double p_b, const MacParams& mac, const RiskModelParams& risk) {
            std::ostringstream os;
            build_transition_matrix(k, p_b, mac, risk).dump(os);
            return os.str();
        },
        py::arg("k"), py::arg("p_b"), py::arg("mac"), py::arg("risk"));

    // solver
    m.def("pb_given_tau", &pb_given_tau, py::arg("tau"), py::arg("n_cs"));
    m.def("tau_for_branch", &tau_for_branch, py::arg("branch"), py::arg("p_b"), py::arg("mac"),
          py::arg("model"));
    m.def("tau_given_pb", &tau_given_pb, py::arg("p_b"), py::arg("mix"), py::arg("mac"),
          py::arg("model"));
    m.def("busy_from_tau", &busy_from_tau, py::arg("tau"), py::arg("n_cs"), py::arg("mix"),
          py::arg("mac"), py::arg("model"));
    m.def("solve_fixed_point", &solve_fixed_point, py::arg("n_cs"), py::arg("mix"), py::arg("mac"),
          py::arg("tau_model"), py::arg("busy_model"), py::arg("tol") = 1e-10,
          py::arg("max_iter") = 20000);
    m.def("expected_backoff_slots", &expected_backoff_slots, py::arg("mix"), py::arg("p_b"),
          py::arg("mac"));
    m.def("p_exp", &p_exp, py::arg("tau"));

    // collision / delivery
    m.def("p_sync", &p_sync, py::arg("n_cs"), py::arg("cw"), py::arg("tau"));
    m.def("s_no_hn_size", &s_no_hn_size, py::arg("c"), py::arg("cw"), py::arg("l_bcn_slots"));
    m.def("p_hn", &p_hn, py::arg("n_cs"), py::arg("cw"), py::arg("tau"), py::arg("l_bcn_slots"),
          py::arg("mix"), py::arg("mac"));
    m.def("p_col", &p_col, py::arg("p_sync"), py::arg("p_hn"));
    m.def("pdr", &pdr, py::arg("tau"), py::arg("p_col"));
    m.def("irt_pmf", &irt_pmf, py::arg("nu"), py::arg("pdr"));
    m.def("irt_pmf_vector", &irt_pmf_vector, py::arg("max_nu"), py::arg("pdr"));

    // spatial model
    m.def("generate_ppp", &generate_ppp, py::arg("region"), py::arg("density_per_m2"),
          py::arg("seed"));
    m.def("assign_speeds", &assign_speeds, py::arg("nodes"), py::arg("mean_speed"),
          py::arg("std_speed"), py::arg("speed_limit"), py::arg("risk"), py::arg("seed"));
    m.def("count_carrier_sense_neighbors", &count_carrier_sense_neighbors, py::arg("tagged"),
          py::arg("nodes"), py::arg("r_cs_m"));
    m.def("count_hidden_nodes", &count_hidden_nodes, py::arg("n_cs"));
    m.def("step_mobility", &step_mobility, py::arg("nodes"), py::arg("dt_s"), py::arg("region"));

    // engines
    m.def("analyze_point", py::overload_cast<const Scenario&, int>(&analyze_point),
          py::arg("scenario"), py::arg("n_cs"));
    m.def("analyze", py::overload_cast<const Scenario&>(&analyze_point), py::arg("scenario"));
    m.def(
        "run_simulation",
        [](const Scenario& sc, int jobs) {
            py::gil_scoped_release release;
            return run_simulation(sc, jobs);
        },
        py::arg("scenario"), py::arg("jobs") = 1);

    m.attr("__version__") = "0.1.0";
}
