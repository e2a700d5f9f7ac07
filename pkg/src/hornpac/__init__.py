"""Horn envelopes of propositional domains: exact bases and PAC learning from queries."""

from .core import (
    BOTTOM,
    AssignmentFamily,
    AttributeSet,
    ClosureResult,
    HornFormula,
    Implication,
    Universe,
    UniverseMismatchError,
    covers,
    entails,
    env_closure,
    forward_closure,
    holds_in_data,
    intersection_closure,
    is_bottom,
    is_pseudo_closed,
    meet,
    models,
)
from .exact import (
    BudgetExceededError,
    brute_force_dg,
    characteristic_models,
    dataset_closure,
    dg_basis,
    exact_plain_error,
    exact_strong_error,
    formula_closure,
    lectic_key,
    reduced,
)
from .evaluate import (
    EvalConfig,
    ExperimentReport,
    estimate_precision,
    estimate_recall,
    fraction_valid,
    generate_random_dataset,
    hoeffding_samples,
    run_experiment,
)
from .learner import (
    LearnerConfig,
    LearnerError,
    RunReport,
    horn1,
    is_approximately_equivalent,
    is_strongly_approximately_equivalent,
    pac_horn_approximation,
    refine_negative,
    refine_positive,
    random_subset,
    sample_count,
    valid_hypothesis_refine,
)
from .oracle import (
    CachingOracle,
    DatasetOracle,
    ImplicationOracle,
    Query,
    QueryCache,
    TargetFormulaOracles,
    is_member,
)

__version__ = "0.1.0"

__all__ = [
    "AssignmentFamily",
    "AttributeSet",
    "BOTTOM",
    "BudgetExceededError",
    "CachingOracle",
    "ClosureResult",
    "DatasetOracle",
    "EvalConfig",
    "ExperimentReport",
    "HornFormula",
    "Implication",
    "ImplicationOracle",
    "LearnerConfig",
    "LearnerError",
    "Query",
    "QueryCache",
    "RunReport",
    "TargetFormulaOracles",
    "Universe",
    "UniverseMismatchError",
    "brute_force_dg",
    "characteristic_models",
    "covers",
    "dataset_closure",
    "dg_basis",
    "entails",
    "env_closure",
    "estimate_precision",
    "estimate_recall",
    "exact_plain_error",
    "exact_strong_error",
    "formula_closure",
    "forward_closure",
    "fraction_valid",
    "generate_random_dataset",
    "hoeffding_samples",
    "holds_in_data",
    "horn1",
    "intersection_closure",
    "is_approximately_equivalent",
    "is_bottom",
    "is_member",
    "is_pseudo_closed",
    "is_strongly_approximately_equivalent",
    "lectic_key",
    "meet",
    "models",
    "pac_horn_approximation",
    "random_subset",
    "reduced",
    "refine_negative",
    "refine_positive",
    "run_experiment",
    "sample_count",
    "valid_hypothesis_refine",
]
