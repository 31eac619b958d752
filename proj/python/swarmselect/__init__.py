"""Wrapper feature selection: feature ranking, seeded binary swarm optimizers and a combination grid."""

from ._core import (
    ALGORITHMS,
    CLASSIFIERS,
    RANKERS,
    Dataset,
    cross_validate,
    evaluate_mask,
    execute,
    feature_reduction,
    fitness,
    format_percent,
    load_csv,
    metrics,
    pearson,
    prepare_dataset,
    rank_features,
    run_combination,
    run_grid,
    run_selector,
    spearman,
    synthesize,
)

__all__ = [
    "ALGORITHMS",
    "CLASSIFIERS",
    "RANKERS",
    "Dataset",
    "cross_validate",
    "evaluate_mask",
    "execute",
    "feature_reduction",
    "fitness",
    "format_percent",
    "load_csv",
    "metrics",
    "pearson",
    "prepare_dataset",
    "rank_features",
    "run_combination",
    "run_grid",
    "run_selector",
    "spearman",
    "synthesize",
]
