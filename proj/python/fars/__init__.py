"""Reliability of factor score predictors.

Thin wrapper over the compiled core: factor models, the three classical
score predictors (regression, Bartlett, McDonald), their reliabilities and
determinacies, an ML extraction / rotation / alignment pipeline, and the
simulation grids.
"""

from ._core import (
    CovarianceMatrix,
    CovKind,
    ConditionResult,
    ExtractionResult,
    FactorModel,
    FarsError,
    MinorFactorSettings,
    ObliqueRotation,
    PredictorWeights,
    ReliabilityReport,
    Rotation,
    SimulationCondition,
    TheoremFlags,
    Violation,
    align_to_target,
    bartlett_weights,
    communalities,
    congruence_matrix,
    determinacy,
    draw_sample,
    fuzz_model,
    kr_parallel,
    make_population_model,
    mcdonald_weights,
    ml_extract,
    model_from_json,
    model_to_json,
    phi_root,
    predict_scores,
    promax,
    reconstruct_sigma,
    regression_weights,
    reliability_bartlett,
    reliability_generic,
    reliability_mcdonald,
    reliability_regression,
    reliability_report,
    report_to_csv,
    report_to_json,
    run_condition,
    sample_correlation,
    sample_covariance,
    standardized_from_pattern,
    study1_grid,
    study2_desk_grid,
    study3_desk_grid,
    theorem_report,
    validate_model,
    varimax,
)

__all__ = [
    "CovarianceMatrix",
    "CovKind",
    "ConditionResult",
    "ExtractionResult",
    "FactorModel",
    "FarsError",
    "MinorFactorSettings",
    "ObliqueRotation",
    "PredictorWeights",
    "ReliabilityReport",
    "Rotation",
    "SimulationCondition",
    "TheoremFlags",
    "Violation",
    "align_to_target",
    "bartlett_weights",
    "communalities",
    "congruence_matrix",
    "determinacy",
    "draw_sample",
    "fuzz_model",
    "kr_parallel",
    "make_population_model",
    "mcdonald_weights",
    "ml_extract",
    "model_from_json",
    "model_to_json",
    "phi_root",
    "predict_scores",
    "promax",
    "reconstruct_sigma",
    "regression_weights",
    "reliability_bartlett",
    "reliability_generic",
    "reliability_mcdonald",
    "reliability_regression",
    "reliability_report",
    "report_to_csv",
    "report_to_json",
    "run_condition",
    "sample_correlation",
    "sample_covariance",
    "standardized_from_pattern",
    "study1_grid",
    "study2_desk_grid",
    "study3_desk_grid",
    "theorem_report",
    "validate_model",
    "varimax",
]

__version__ = "0.1.0"
