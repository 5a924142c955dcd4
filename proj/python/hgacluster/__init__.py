"""Heart-disease clustering: PCA to two components, k-means baseline and a hybrid genetic algorithm."""

import json

from ._core import (
    ContractError,
    Error,
    InputError,
    OutputError,
    __version__,
    evaluate,
    fitness,
    hga,
    kmeans,
    load_points,
    metrics_from_counts,
    pca,
    run_experiment,
)


def experiment_report(input, **kwargs):
    """run_experiment parsed into a dict."""
    return json.loads(run_experiment(str(input), **kwargs))


__all__ = [
    "ContractError",
    "Error",
    "InputError",
    "OutputError",
    "__version__",
    "evaluate",
    "experiment_report",
    "fitness",
    "hga",
    "kmeans",
    "load_points",
    "metrics_from_counts",
    "pca",
    "run_experiment",
]
