"""Benchmark harness: dataset loading, batch scoring, ranking, reports.

Directory convention::

    <dataset root>/input/<pair_id>/A.<ext>   under-exposed source
    <dataset root>/input/<pair_id>/B.<ext>   over-exposed source
    <fused root>/fused/<algorithm_id>/<pair_id>.<ext>

A ``dataset.toml`` manifest at the dataset root overrides the convention
for layouts with arbitrary filenames::

    [pairs.<pair_id>]
    under = "relative/path/to/under.png"
    over = "relative/path/to/over.png"
"""

from __future__ import annotations

import csv
import time
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DecodeError, DimensionMismatch, EmptyDataset, EmptyMatrix
from .io import IMAGE_EXTENSIONS, load_gray
from .metrics import METRICS

Cell = tuple[str, str, str]  # (algorithm, pair, metric)


@dataclass(frozen=True)
class DatasetEntry:
    pair_id: str
    under_path: Path
    over_path: Path


@dataclass(frozen=True)
class FusedEntry:
    algorithm_id: str
    pair_id: str
    fused_path: Path


@dataclass
class ScoreMatrix:
    algorithms: list[str]
    pairs: list[str]
    metrics: list[str]
    values: dict[Cell, float] = field(default_factory=dict)
    reasons: dict[Cell, str] = field(default_factory=dict)
    timings: dict[tuple[str, str], float] = field(default_factory=dict)

    def value(self, algorithm: str, pair: str, metric: str) -> float | None:
        return self.values.get((algorithm, pair, metric))

    def average(self, algorithm: str, metric: str) -> float | None:
        cells = [
            self.values[(algorithm, p, metric)]
            for p in self.pairs
            if (algorithm, p, metric) in self.values
        ]
        if not cells:
            return None
        return float(np.mean(cells))


@dataclass
class RankingTable:
    metrics: list[str]
    algorithms: list[str]
    averages: dict[str, dict[str, float | None]]
    medals: dict[str, list[str]]  # metric -> [best, second, third] (as earned)
    counts: dict[str, tuple[int, int, int]]


def _find_image(directory: Path, stem: str) -> Path | None:
    for ext in IMAGE_EXTENSIONS:
        for candidate in (stem + ext, stem + ext.upper()):
            p = directory / candidate
            if p.is_file():
                return p
    return None


def _entry_from_paths(
    pair_id: str, under: Path, over: Path, warnings: list[str]
) -> DatasetEntry | None:
    try:
        a = load_gray(under)
        b = load_gray(over)
    except DecodeError as exc:
        warnings.append(f"{pair_id}: DecodeError: {exc}")
        return None
    if a.shape != b.shape:
        warnings.append(
            f"{pair_id}: DimensionMismatch: {a.shape} vs {b.shape}"
        )
        return None
    return DatasetEntry(pair_id, under, over)


def load_dataset(root, warnings: list[str] | None = None) -> list[DatasetEntry]:
    """Discover image pairs under ``root``; problems are appended to
    ``warnings`` and the offending pair skipped."""
    root = Path(root)
    if warnings is None:
        warnings = []
    entries: list[DatasetEntry] = []

    manifest = root / "dataset.toml"
    if manifest.is_file():
        with open(manifest, "rb") as fh:
            data = tomllib.load(fh)
        for pair_id in sorted(data.get("pairs", {})):
            spec = data["pairs"][pair_id]
            entry = _entry_from_paths(
                pair_id, root / spec["under"], root / spec["over"], warnings
            )
            if entry:
                entries.append(entry)
        return entries

    input_dir = root / "input"
    if not input_dir.is_dir():
        return entries
    for pair_dir in sorted(p for p in input_dir.iterdir() if p.is_dir()):
        pair_id = pair_dir.name
        under = _find_image(pair_dir, "A")
        over = _find_image(pair_dir, "B")
        if under is None or over is None:
            missing = "A" if under is None else "B"
            warnings.append(f"{pair_id}: MissingCounterpart: no {missing} image")
            continue
        entry = _entry_from_paths(pair_id, under, over, warnings)
        if entry:
            entries.append(entry)
    return entries


def load_fused(
    root, dataset: list[DatasetEntry], warnings: list[str] | None = None
) -> list[FusedEntry]:
    """Discover fused images under ``root``/fused for the dataset's pairs."""
    root = Path(root)
    if warnings is None:
        warnings = []
    shapes = {}
    for entry in dataset:
        try:
            shapes[entry.pair_id] = load_gray(entry.under_path).shape
        except DecodeError as exc:  # pragma: no cover - validated on load
            warnings.append(f"{entry.pair_id}: DecodeError: {exc}")

    entries: list[FusedEntry] = []
    fused_dir = root / "fused"
    if not fused_dir.is_dir():
        return entries
    for algo_dir in sorted(p for p in fused_dir.iterdir() if p.is_dir()):
        algo = algo_dir.name
        found = 0
        for pair_id in sorted(shapes):
            path = _find_image(algo_dir, pair_id)
            if path is None:
                warnings.append(f"{algo}/{pair_id}: no fused image")
                continue
            try:
                plane = load_gray(path)
            except DecodeError as exc:
                warnings.append(f"{algo}/{pair_id}: DecodeError: {exc}")
                continue
            if plane.shape != shapes[pair_id]:
                warnings.append(
                    f"{algo}/{pair_id}: DimensionMismatch: "
                    f"{plane.shape} vs {shapes[pair_id]}"
                )
                continue
            entries.append(FusedEntry(algo, pair_id, path))
            found += 1
        if found == 0:
            warnings.append(f"{algo}: no usable fused images")
    return entries


def _score_task(args) -> list[tuple[str, float | None, str]]:
    """Score one (algorithm, pair): returns (metric, value, reason) rows."""
    under_path, over_path, fused_path, metric_names, te_alpha = args
    a = load_gray(under_path)
    b = load_gray(over_path)
    f = load_gray(fused_path)
    rows: list[tuple[str, float | None, str]] = []
    for name in metric_names:
        spec = METRICS[name]
        try:
            if name == "TE" and te_alpha is not None:
                value = float(spec.fn(a, b, f, alpha=te_alpha))
            else:
                value = float(spec.fn(a, b, f))
            rows.append((name, value, ""))
        except Exception as exc:  # noqa: BLE001 - recorded, never aborts a batch
            rows.append((name, None, f"{type(exc).__name__}: {exc}"))
    return rows


def evaluate(
    dataset: list[DatasetEntry],
    fused: list[FusedEntry],
    metrics: list[str] | None = None,
    workers: int = 1,
    te_alpha: float | None = None,
) -> ScoreMatrix:
    """Score every fused image against its sources on the chosen metrics.

    Results are bit-identical regardless of ``workers``.
    """
    if metrics is None:
        metrics = list(METRICS)
    unknown = [m for m in metrics if m not in METRICS]
    if unknown:
        raise KeyError(
            f"unknown metrics {unknown}; valid names: {', '.join(METRICS)}"
        )
    if not dataset or not fused:
        raise EmptyDataset("need at least one image pair and one fused entry")

    by_pair = {e.pair_id: e for e in dataset}
    tasks = sorted(
        (e for e in fused if e.pair_id in by_pair),
        key=lambda e: (e.algorithm_id, e.pair_id),
    )
    algorithms = sorted({e.algorithm_id for e in tasks})
    pairs = sorted({e.pair_id for e in tasks})

    args = [
        (
            by_pair[e.pair_id].under_path,
            by_pair[e.pair_id].over_path,
            e.fused_path,
            tuple(metrics),
            te_alpha,
        )
        for e in tasks
    ]
    if workers > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_score_task, args))
    else:
        results = [_score_task(a) for a in args]

    matrix = ScoreMatrix(algorithms, pairs, list(metrics))
    for entry, rows in zip(tasks, results):
        for name, value, reason in rows:
            cell = (entry.algorithm_id, entry.pair_id, name)
            if value is None:
                matrix.reasons[cell] = reason
            else:
                matrix.values[cell] = value
    return matrix


def rank(
    scores: ScoreMatrix, lower_better: dict[str, bool] | None = None
) -> RankingTable:
    """Per-metric averages plus best/second/third medal counts.

    Orientation defaults to the registry (CE and QCV lower-better); ties on
    an average are broken lexicographically by algorithm id so each rank is
    held by exactly one algorithm.
    """
    averages: dict[str, dict[str, float | None]] = {}
    medals: dict[str, list[str]] = {}
    counts = {algo: [0, 0, 0] for algo in scores.algorithms}
    any_ranked = False

    for metric in scores.metrics:
        if lower_better is not None and metric in lower_better:
            lower = lower_better[metric]
        elif metric in METRICS:
            lower = METRICS[metric].lower_better
        else:
            lower = False
        avg_row = {a: scores.average(a, metric) for a in scores.algorithms}
        averages[metric] = avg_row
        ranked = sorted(
            (a for a in scores.algorithms if avg_row[a] is not None),
            key=lambda a: (avg_row[a] if lower else -avg_row[a], a),
        )
        medals[metric] = ranked[:3]
        for place, algo in enumerate(medals[metric]):
            counts[algo][place] += 1
        if ranked:
            any_ranked = True

    if not any_ranked:
        raise EmptyMatrix("no metric has a rankable algorithm average")
    return RankingTable(
        list(scores.metrics),
        list(scores.algorithms),
        averages,
        medals,
        {a: tuple(c) for a, c in counts.items()},
    )


def time_algorithm(algo, dataset: list[DatasetEntry]) -> float:
    """Mean wall-clock seconds per pair for a fusion callable; the first
    pair is run once untimed as warm-up."""
    if not dataset:
        raise EmptyDataset("cannot time an algorithm on an empty dataset")
    from .io import load_color

    pairs = [
        (load_color(e.under_path), load_color(e.over_path)) for e in dataset
    ]
    algo(*pairs[0])  # warm-up
    elapsed = []
    for a, b in pairs:
        start = time.perf_counter()
        algo(a, b)
        elapsed.append(time.perf_counter() - start)
    return float(np.mean(elapsed))


def _fmt(value: float | None, decimals: int = 4) -> str:
    return "" if value is None else f"{value:.{decimals}f}"


def emit_report(ranking: RankingTable, scores: ScoreMatrix, out) -> None:
    """Write scores.csv, averages.csv, and report.md into ``out``."""
    if not scores.metrics:
        raise EmptyMatrix("no metrics selected")
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)

    with open(out / "scores.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["algorithm", "pair", "metric", "value", "missing_reason"])
        for algo in scores.algorithms:
            for pair in scores.pairs:
                for metric in scores.metrics:
                    cell = (algo, pair, metric)
                    value = scores.values.get(cell)
                    writer.writerow(
                        [
                            algo,
                            pair,
                            metric,
                            "" if value is None else repr(value),
                            scores.reasons.get(cell, ""),
                        ]
                    )

    with open(out / "averages.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["metric"] + ranking.algorithms)
        for metric in ranking.metrics:
            row = [metric]
            for algo in ranking.algorithms:
                avg = ranking.averages[metric][algo]
                row.append("" if avg is None else repr(avg))
            writer.writerow(row)

    place_names = ("best", "2nd", "3rd")
    lines = ["# Fusion benchmark report", ""]
    for metric in ranking.metrics:
        lines.append(f"## {metric}")
        lines.append("")
        lines.append("| algorithm | average | rank |")
        lines.append("| --- | --- | --- |")
        for algo in ranking.algorithms:
            avg = ranking.averages[metric][algo]
            tag = ""
            if algo in ranking.medals[metric]:
                tag = place_names[ranking.medals[metric].index(algo)]
            lines.append(f"| {algo} | {_fmt(avg)} | {tag} |")
        lines.append("")
    lines.append("## Medal counts")
    lines.append("")
    lines.append("| algorithm | best | 2nd | 3rd |")
    lines.append("| --- | --- | --- | --- |")
    for algo in ranking.algorithms:
        b, s, t = ranking.counts[algo]
        lines.append(f"| {algo} | {b} | {s} | {t} |")
    lines.append("")
    (out / "report.md").write_text("\n".join(lines), encoding="utf-8")
