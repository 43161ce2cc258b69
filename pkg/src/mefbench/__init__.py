"""mefbench: multi-exposure image fusion metrics and benchmark harness."""

from . import errors, fusion, harness, io, metrics
from .fusion import fuse_baseline
from .harness import (
    DatasetEntry,
    FusedEntry,
    RankingTable,
    ScoreMatrix,
    emit_report,
    evaluate,
    load_dataset,
    load_fused,
    rank,
    time_algorithm,
)
from .metrics import METRICS, MetricSpec, get_metric, metric_names

__version__ = "0.1.0"

__all__ = [
    "METRICS",
    "DatasetEntry",
    "FusedEntry",
    "MetricSpec",
    "RankingTable",
    "ScoreMatrix",
    "emit_report",
    "errors",
    "evaluate",
    "fuse_baseline",
    "fusion",
    "get_metric",
    "harness",
    "io",
    "load_dataset",
    "load_fused",
    "metric_names",
    "metrics",
    "rank",
    "time_algorithm",
]
