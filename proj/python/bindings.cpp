#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fars/error.hpp"
#include "fars/fa.hpp"
#include "fars/fuzz.hpp"
#include "fars/io.hpp"
#include "fars/linalg.hpp"
#include "fars/model.hpp"
#include "fars/predictors.hpp"
#include "fars/reliability.hpp"
#include "fars/simulation.hpp"

namespace py = pybind11;
using namespace fars;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Reliability of factor score predictors: core routines";

    py::register_exception<Error>(m, "FarsError");

    py::enum_<CovKind>(m, "CovKind")
        .value("population", CovKind::population)
        .value("model_implied", CovKind::model_implied)
        .value("sample", CovKind::sample);

    py::class_<FactorModel>(m, "FactorModel")
        .def(py::init([](Matrix lambda, Matrix phi, Vector psi2) {
                 return FactorModel{std::move(lambda), std::move(phi),
                                    std::move(psi2)};
             }),
             py::arg("lambda_"), py::arg("phi"), py::arg("psi2"))
        .def_readwrite("lambda_", &FactorModel::lambda)
        .def_readwrite("phi", &FactorModel::phi)
        .def_readwrite("psi2", &FactorModel::psi2)
        .def_property_readonly("p", &FactorModel::p)
        .def_property_readonly("q", &FactorModel::q);

    py::class_<CovarianceMatrix>(m, "CovarianceMatrix")
        .def(py::init([](Matrix sigma, CovKind kind) {
                 return CovarianceMatrix{std::move(sigma), kind};
             }),
             py::arg("sigma"), py::arg("kind") = CovKind::model_implied)
        .def_readwrite("sigma", &CovarianceMatrix::sigma)
        .def_readwrite("kind", &CovarianceMatrix::kind);

    py::class_<Violation>(m, "Violation")
        .def_readonly("invariant", &Violation::invariant)
        .def_readonly("index", &Violation::index)
        .def_readonly("magnitude", &Violation::magnitude)
        .def_readonly("message", &Violation::message)
        .def("__repr__", [](const Violation& v) {
            return "<Violation " + v.invariant + ": " + v.message + ">";
        });

    py::class_<PredictorWeights>(m, "PredictorWeights")
        .def_readonly("b", &PredictorWeights::b)
        .def_property_readonly("kind", [](const PredictorWeights& w) {
            return std::string(to_string(w.kind));
        });

    py::class_<TheoremFlags>(m, "TheoremFlags")
        .def_readonly("premise_orthogonal", &TheoremFlags::premise_orthogonal)
        .def_readonly("orthogonal_slack", &TheoremFlags::orthogonal_slack)
        .def_readonly("premise_diagonal_information",
                      &TheoremFlags::premise_diagonal_information)
        .def_readonly("information_offdiag", &TheoremFlags::information_offdiag)
        .def_readonly("gap_regression_bartlett",
                      &TheoremFlags::gap_regression_bartlett)
        .def_readonly("gap_regression_mcdonald",
                      &TheoremFlags::gap_regression_mcdonald)
        .def_readonly("min_regression_minus_determinacy_sq",
                      &TheoremFlags::min_regression_minus_determinacy_sq)
        .def("premises_hold", &TheoremFlags::premises_hold);

    py::class_<ReliabilityReport>(m, "ReliabilityReport")
        .def_readonly("regression", &ReliabilityReport::regression)
        .def_readonly("bartlett", &ReliabilityReport::bartlett)
        .def_readonly("mcdonald", &ReliabilityReport::mcdonald)
        .def_readonly("determinacy", &ReliabilityReport::determinacy)
        .def_readonly("flags", &ReliabilityReport::flags);

    py::class_<ExtractionResult>(m, "ExtractionResult")
        .def_readonly("model", &ExtractionResult::model)
        .def_readonly("converged", &ExtractionResult::converged)
        .def_readonly("iterations", &ExtractionResult::iterations)
        .def_readonly("heywood_adjusted", &ExtractionResult::heywood_adjusted)
        .def_readonly("discrepancy", &ExtractionResult::discrepancy);

    py::class_<Rotation>(m, "Rotation")
        .def_readonly("loadings", &Rotation::loadings)
        .def_readonly("rotation", &Rotation::rotation);

    py::class_<ObliqueRotation>(m, "ObliqueRotation")
        .def_readonly("pattern", &ObliqueRotation::pattern)
        .def_readonly("phi", &ObliqueRotation::phi);

    py::class_<MinorFactorSettings>(m, "MinorFactorSettings")
        .def(py::init<>())
        .def_readwrite("enabled", &MinorFactorSettings::enabled)
        .def_readwrite("m", &MinorFactorSettings::m)
        .def_readwrite("pi_minor", &MinorFactorSettings::pi_minor)
        .def_readwrite("decay", &MinorFactorSettings::decay);

    py::class_<SimulationCondition>(m, "SimulationCondition")
        .def(py::init<>())
        .def_readwrite("q", &SimulationCondition::q)
        .def_readwrite("loads_per_factor", &SimulationCondition::loads_per_factor)
        .def_readwrite("l", &SimulationCondition::l)
        .def_readwrite("sl", &SimulationCondition::sl)
        .def_readwrite("r", &SimulationCondition::r)
        .def_readwrite("n", &SimulationCondition::n)
        .def_readwrite("replications", &SimulationCondition::replications)
        .def_readwrite("model_error", &SimulationCondition::model_error)
        .def_readwrite("master_seed", &SimulationCondition::master_seed)
        .def_readwrite("condition_index", &SimulationCondition::condition_index)
        .def_property_readonly("p", &SimulationCondition::p);

    py::class_<ConditionResult>(m, "ConditionResult")
        .def_readonly("condition", &ConditionResult::condition)
        .def_readonly("mean", &ConditionResult::mean)
        .def_readonly("median", &ConditionResult::median)
        .def_readonly("sd", &ConditionResult::sd)
        .def_readonly("min", &ConditionResult::min)
        .def_readonly("max", &ConditionResult::max)
        .def_readonly("used", &ConditionResult::used)
        .def_readonly("n_nonconverged", &ConditionResult::n_nonconverged)
        .def_readonly("n_heywood", &ConditionResult::n_heywood)
        .def_readonly("n_inadmissible", &ConditionResult::n_inadmissible);

    m.def("validate_model", &validate_model, py::arg("model"));
    m.def("communalities", &communalities, py::arg("model"));
    m.def("standardized_from_pattern", &standardized_from_pattern,
          py::arg("lambda_"), py::arg("phi"));
    m.def("reconstruct_sigma", &reconstruct_sigma, py::arg("model"));
    m.def("phi_root", &phi_root, py::arg("phi"));

    m.def("regression_weights", &regression_weights, py::arg("model"),
          py::arg("sigma"));
    m.def("bartlett_weights", &bartlett_weights, py::arg("model"));
    m.def("mcdonald_weights", &mcdonald_weights, py::arg("model"),
          py::arg("sigma"), py::arg("correlation_preserving") = false);
    m.def("predict_scores", &predict_scores, py::arg("weights"),
          py::arg("data"));

    m.def("reliability_generic", &reliability_generic, py::arg("weights"),
          py::arg("model"), py::arg("sigma"));
    m.def("reliability_regression", &reliability_regression, py::arg("model"),
          py::arg("sigma"));
    m.def("reliability_bartlett", &reliability_bartlett, py::arg("model"));
    m.def("reliability_mcdonald", &reliability_mcdonald, py::arg("model"),
          py::arg("sigma"));
    m.def("determinacy", &determinacy, py::arg("model"), py::arg("sigma"));
    m.def("kr_parallel", &kr_parallel, py::arg("p"), py::arg("rho"));
    m.def("theorem_report", &theorem_report, py::arg("model"), py::arg("sigma"));
    m.def("reliability_report", &reliability_report, py::arg("model"));

    m.def(
        "ml_extract",
        [](const CovarianceMatrix& s, Index q) { return ml_extract(s, q); },
        py::arg("s"), py::arg("q"));
    m.def("varimax", &varimax, py::arg("lambda_"),
          py::arg("kaiser_normalize") = true);
    m.def("promax", &promax, py::arg("lambda_"), py::arg("kappa") = 4);
    m.def("congruence_matrix", &congruence_matrix, py::arg("a"), py::arg("b"));
    m.def("align_to_target", &align_to_target, py::arg("estimated"),
          py::arg("target"));
    m.def("sample_covariance", &sample_covariance, py::arg("data"));
    m.def("sample_correlation", &sample_correlation, py::arg("data"));

    m.def("fuzz_model", &fuzz_model, py::arg("master_seed"), py::arg("index"));
    m.def("study1_grid", &study1_grid);
    m.def("study2_desk_grid", &study2_desk_grid, py::arg("replications") = 100,
          py::arg("n") = 500);
    m.def("study3_desk_grid", &study3_desk_grid, py::arg("replications") = 100,
          py::arg("n") = 500);
    m.def("make_population_model", &make_population_model, py::arg("condition"));
    m.def("draw_sample", &draw_sample, py::arg("model"), py::arg("n"),
          py::arg("seed"));
    m.def("run_condition", &run_condition, py::arg("condition"),
          py::call_guard<py::gil_scoped_release>());

    m.def("model_from_json", &model_from_json, py::arg("text"));
    m.def("model_to_json", &model_to_json, py::arg("model"));
    m.def("report_to_csv", &report_to_csv, py::arg("report"));
    m.def("report_to_json", &report_to_json, py::arg("report"));
}
