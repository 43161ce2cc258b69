"""Command-line interface: ``mefbench eval | fuse | metric``."""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .errors import DecodeError, EmptyDataset, MefbenchError
from .fusion import DEFAULT_LEVELS, fuse_baseline
from .harness import emit_report, evaluate, load_dataset, load_fused, rank
from .io import load_color, load_gray, save_png
from .metrics import METRICS


def _default_workers() -> int:
    env = os.environ.get("MEFB_WORKERS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def _parse_metrics(spec: str) -> list[str]:
    if spec.strip().lower() == "all":
        return list(METRICS)
    names = [s.strip().upper() for s in spec.split(",") if s.strip()]
    unknown = [n for n in names if n not in METRICS]
    if unknown:
        print(
            f"error: unknown metric(s) {', '.join(unknown)}; "
            f"valid names: {', '.join(METRICS)}",
            file=sys.stderr,
        )
        raise SystemExit(2)
    if not names:
        print("error: empty metric selection", file=sys.stderr)
        raise SystemExit(2)
    return names


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mefbench",
        description="Multi-exposure fusion benchmark: metrics, baseline, reports.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="score fused images and emit a report")
    p_eval.add_argument("--dataset", required=True, help="dataset root directory")
    p_eval.add_argument("--fused", help="root containing fused/<algo>/<pair>.*")
    p_eval.add_argument(
        "--with-baseline",
        action="store_true",
        help="also run the built-in baseline fusion",
    )
    p_eval.add_argument("--metrics", default="all", help="'all' or comma list")
    p_eval.add_argument("--out", default="./mefb-report")
    p_eval.add_argument("--workers", type=int, default=None)
    p_eval.add_argument("--alpha", type=float, default=None, help="TE order")

    p_fuse = sub.add_parser("fuse", help="run the baseline fusion over a dataset")
    p_fuse.add_argument("--dataset", required=True)
    p_fuse.add_argument("--algo", default="baseline", choices=["baseline"])
    p_fuse.add_argument("--out", required=True)
    p_fuse.add_argument("--levels", type=int, default=DEFAULT_LEVELS)
    p_fuse.add_argument("--skip-bad", action="store_true")

    p_metric = sub.add_parser("metric", help="compute one metric on image files")
    p_metric.add_argument("--name", required=True)
    p_metric.add_argument("--a")
    p_metric.add_argument("--b")
    p_metric.add_argument("--f", required=True)
    return parser


def _run_baseline(dataset, out_root: Path, levels: int = DEFAULT_LEVELS) -> None:
    fused_dir = out_root / "fused" / "baseline"
    fused_dir.mkdir(parents=True, exist_ok=True)
    for entry in dataset:
        fused = fuse_baseline(
            load_color(entry.under_path), load_color(entry.over_path), levels
        )
        save_png(fused_dir / f"{entry.pair_id}.png", fused)


def _cmd_eval(args) -> int:
    if not args.fused and not args.with_baseline:
        print("error: --fused is required unless --with-baseline", file=sys.stderr)
        return 2
    metrics = _parse_metrics(args.metrics)
    workers = args.workers if args.workers is not None else _default_workers()

    warnings: list[str] = []
    dataset = load_dataset(args.dataset, warnings)
    if not dataset:
        print("error: no usable image pairs in dataset", file=sys.stderr)
        return 1

    out = Path(args.out)
    fused = []
    if args.fused:
        fused.extend(load_fused(args.fused, dataset, warnings))
    if args.with_baseline:
        _run_baseline(dataset, out)
        fused.extend(load_fused(out, dataset, warnings))
    if not fused:
        print("error: no fused images to score", file=sys.stderr)
        return 1

    for line in warnings:
        print(f"warning: {line}", file=sys.stderr)

    scores = evaluate(dataset, fused, metrics, workers, te_alpha=args.alpha)
    ranking = rank(scores)
    emit_report(ranking, scores, out)

    header = ["metric"] + ranking.algorithms
    print("  ".join(f"{h:>10}" for h in header))
    for metric in ranking.metrics:
        row = [metric] + [
            "" if ranking.averages[metric][a] is None
            else f"{ranking.averages[metric][a]:.4f}"
            for a in ranking.algorithms
        ]
        print("  ".join(f"{c:>10}" for c in row))
    print(f"report written to {out}")
    return 0


def _cmd_fuse(args) -> int:
    warnings: list[str] = []
    dataset = load_dataset(args.dataset, warnings)
    for line in warnings:
        print(f"warning: {line}", file=sys.stderr)
    if warnings and not args.skip_bad:
        print("error: dataset has undecodable pairs (use --skip-bad)", file=sys.stderr)
        return 1
    if not dataset:
        print("error: no usable image pairs in dataset", file=sys.stderr)
        return 1
    try:
        _run_baseline(dataset, Path(args.out), args.levels)
    except (DecodeError, OSError) as exc:
        if not args.skip_bad:
            print(f"error: {exc}", file=sys.stderr)
            return 1
    print(f"wrote {len(dataset)} fused image(s) under {args.out}/fused/baseline")
    return 0


def _cmd_metric(args) -> int:
    name = args.name.upper()
    if name not in METRICS:
        print(
            f"error: unknown metric {args.name!r}; valid names: "
            f"{', '.join(METRICS)}",
            file=sys.stderr,
        )
        return 2
    spec = METRICS[name]
    needed = [args.f] if spec.single_image else [args.a, args.b, args.f]
    if any(p is None for p in needed):
        print("error: metric requires --a, --b and --f", file=sys.stderr)
        return 2
    for p in needed:
        if not Path(p).is_file():
            print(f"error: no such file: {p}", file=sys.stderr)
            return 2
    try:
        f = load_gray(args.f)
        if spec.single_image:
            value = spec.fn(None, None, f)
        else:
            value = spec.fn(load_gray(args.a), load_gray(args.b), f)
    except MefbenchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"{name}={value:.6f}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "eval":
            return _cmd_eval(args)
        if args.command == "fuse":
            return _cmd_fuse(args)
        return _cmd_metric(args)
    except EmptyDataset as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
