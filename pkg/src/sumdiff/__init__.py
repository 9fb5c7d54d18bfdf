"""Sumsets, difference sets and linear-form images of random integer sets."""

from .bounds import (
    AltBoundReport,
    BoundReport,
    RatioClaim,
    alt_parameterization,
    bound_report,
    ratio_claim,
)
from .errors import BracketingError, ExperimentAborted, ResourceBudgetError
from .experiments import (
    BoundCheck,
    CrossoverResult,
    ExperimentConfig,
    StatisticsSpec,
    StatSummary,
    TrialRecord,
    config_from_dict,
    empirical_crossover,
    enumerate_exhaustive,
    load_config,
    records_to_csv,
    results_to_json,
    run_experiment,
    run_trial,
    summarize_records,
    verify_bounds,
)
from .predictions import (
    ConjecturePrediction,
    PredictionBundle,
    alpha,
    asymptotic_bundle,
    conjecture_prediction,
    exact_missing_sums_expectation,
    expected_tuple_count,
    g_form,
    g_ratio,
    janson_missing_diffs_bounds,
    missing_sum_probability,
    series_partial_g,
    symmetry_count,
)
from .sampling import GENERATOR_NAME, PFamily, SamplerSeed, p_of, sample
from .sets import (
    Classification,
    IntegerSet,
    LinearForm,
    RepHistogram,
    classify,
    diffset,
    form_image,
    make_set,
    multiplicity_profile,
    rep_histogram,
    repeated_gap_pairs,
    sumset,
    tuple_statistic,
)
from .thresholds import (
    DominationReport,
    RegimeDomination,
    classify_pair,
    dominator_at,
    regime_dominator,
    solve_threshold,
)

__version__ = "0.1.0"

__all__ = [
    "AltBoundReport",
    "BoundCheck",
    "BoundReport",
    "BracketingError",
    "Classification",
    "ConjecturePrediction",
    "CrossoverResult",
    "DominationReport",
    "ExperimentAborted",
    "ExperimentConfig",
    "GENERATOR_NAME",
    "IntegerSet",
    "LinearForm",
    "PFamily",
    "PredictionBundle",
    "RatioClaim",
    "RegimeDomination",
    "RepHistogram",
    "ResourceBudgetError",
    "SamplerSeed",
    "StatSummary",
    "StatisticsSpec",
    "TrialRecord",
    "alpha",
    "alt_parameterization",
    "asymptotic_bundle",
    "bound_report",
    "classify",
    "classify_pair",
    "config_from_dict",
    "conjecture_prediction",
    "diffset",
    "dominator_at",
    "empirical_crossover",
    "enumerate_exhaustive",
    "exact_missing_sums_expectation",
    "expected_tuple_count",
    "form_image",
    "g_form",
    "g_ratio",
    "janson_missing_diffs_bounds",
    "load_config",
    "make_set",
    "missing_sum_probability",
    "multiplicity_profile",
    "p_of",
    "ratio_claim",
    "records_to_csv",
    "regime_dominator",
    "rep_histogram",
    "repeated_gap_pairs",
    "results_to_json",
    "run_experiment",
    "run_trial",
    "sample",
    "series_partial_g",
    "solve_threshold",
    "summarize_records",
    "sumset",
    "symmetry_count",
    "tuple_statistic",
    "verify_bounds",
]
