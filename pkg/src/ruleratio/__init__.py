"""Association-rule strength estimation by regularized count ratios.

The package scores two-item rules "antecedent predicts consequent" from
co-occurrence counts.  The centerpiece is a regularized ratio
``C(x,y) / (C(y) + lam)`` — the closed-form minimizer of a ridge-penalized
squared-error cost over per-pair weights — benchmarked against thresholded,
additively smoothed, and beta-posterior count ratios with recall-at-rank
evaluation, parameter tuning, and paired significance testing.
"""

from .counts import (
    CooccurrenceCounts,
    VocabularyMismatchError,
    count,
    count_slice,
    empty_counts,
    load_counts,
    merge_counts,
    save_counts,
)
from .estimators import (
    AdditiveSmoothing,
    BetaPosterior,
    EstimatorSpec,
    FAMILIES,
    MaximumLikelihood,
    RegularizedRatio,
    ThresholdedRatio,
    UndefinedRatioError,
    describe,
    score,
    score_all,
    strength_array,
)
from .evaluation import (
    CurvePoint,
    RecallCurve,
    ResolvedTruth,
    RuleEntry,
    candidate_pairs,
    curve,
    precision_at,
    rank,
    read_ranked,
    read_truth,
    recall_at,
    resolve_truth,
    write_curve,
    write_ranked,
    write_truth,
)
from .objective import (
    ConvergenceError,
    analytic_solution,
    empirical_cost,
    numeric_minimizer,
    objective_gradient,
    regularized_objective,
    support_pairs,
)
from .stats import (
    BenchmarkTable,
    TTestResult,
    ZeroVarianceError,
    compare_systems,
    load_benchmark,
    paired_ttest_one_sided,
    student_t_upper_tail,
    summary,
)
from .synth import SynthConfig, generate, load_config
from .transactions import (
    DomainLabel,
    ParseError,
    TransactionDatabase,
    domain_labels_for,
    load_records,
    parse_records,
    read_domain_table,
    records_to_text,
    write_domain_table,
)
from .tuning import (
    SearchConfig,
    TuningOutcome,
    apply_prior_period,
    load_outcome,
    save_outcome,
    spec_for,
    tune,
)

__version__ = "0.1.0"

__all__ = [
    "AdditiveSmoothing",
    "BenchmarkTable",
    "BetaPosterior",
    "ConvergenceError",
    "CooccurrenceCounts",
    "CurvePoint",
    "DomainLabel",
    "EstimatorSpec",
    "FAMILIES",
    "MaximumLikelihood",
    "ParseError",
    "RecallCurve",
    "RegularizedRatio",
    "ResolvedTruth",
    "RuleEntry",
    "SearchConfig",
    "SynthConfig",
    "ThresholdedRatio",
    "TransactionDatabase",
    "TTestResult",
    "TuningOutcome",
    "UndefinedRatioError",
    "VocabularyMismatchError",
    "ZeroVarianceError",
    "analytic_solution",
    "apply_prior_period",
    "candidate_pairs",
    "compare_systems",
    "count",
    "count_slice",
    "curve",
    "describe",
    "domain_labels_for",
    "empirical_cost",
    "empty_counts",
    "generate",
    "load_benchmark",
    "load_config",
    "load_counts",
    "load_outcome",
    "load_records",
    "merge_counts",
    "numeric_minimizer",
    "objective_gradient",
    "paired_ttest_one_sided",
    "parse_records",
    "precision_at",
    "rank",
    "read_domain_table",
    "read_ranked",
    "read_truth",
    "recall_at",
    "records_to_text",
    "regularized_objective",
    "resolve_truth",
    "save_counts",
    "save_outcome",
    "score",
    "score_all",
    "spec_for",
    "strength_array",
    "student_t_upper_tail",
    "summary",
    "support_pairs",
    "tune",
    "write_curve",
    "write_domain_table",
    "write_ranked",
    "write_truth",
]
