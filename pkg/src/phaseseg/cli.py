"""Command-line front end.

Subcommands: segment, table2, sweep, bench, thresholds.  Exit codes: 0 on
success, 1 on runtime failures (missing files, undecodable images), 2 on
usage errors (argparse's convention).

Angles accept decimal radians or pi-forms: "pi", "3pi/4", "0.5*pi", "1.1197pi".
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from .core import (
    AngleParams,
    format_pi_multiple,
    parse_theta,
    segment_gray,
    segment_rgb,
    theta_from_threshold,
    thresholds_from_theta,
)
from .experiments import (
    BENCH_METHODS,
    bench_to_csv,
    bench_to_json,
    load_manifest,
    run_bench,
    run_sweep,
    run_table2,
)
from .imgio import decode_image, load_mask, render_labelmap, to_gray
from .metrics import count_segments


def _theta_list(text: str) -> list[float]:
    values = [parse_theta(part) for part in text.split(",") if part.strip()]
    if not values:
        raise ValueError("need at least one theta")
    return values


def _method_list(text: str) -> list[str]:
    methods = [part.strip() for part in text.split(",") if part.strip()]
    for method in methods:
        if method not in BENCH_METHODS:
            raise ValueError(f"unknown method {method!r}")
    if not methods:
        raise ValueError("need at least one method")
    return methods


def _read_image(path: Path) -> np.ndarray:
    if not path.is_file():
        raise FileNotFoundError(f"input not found: {path}")
    return decode_image(path.read_bytes())


def _read_mask(path: Path) -> np.ndarray:
    if not path.is_file():
        raise FileNotFoundError(f"mask not found: {path}")
    return load_mask(path.read_bytes())


def cmd_segment(args: argparse.Namespace) -> int:
    image = _read_image(args.input)
    start = time.perf_counter()
    if args.mode == "gray":
        labels = segment_gray(to_gray(image), args.theta1)
        theta = [args.theta1]
    else:
        params = AngleParams(args.theta1, args.theta2, args.theta3)
        labels = segment_rgb(image, params, normalize=not args.no_normalize)
        theta = [params.theta1, params.theta2, params.theta3]
    runtime_ms = (time.perf_counter() - start) * 1000.0
    values, counts = np.unique(labels, return_counts=True)
    sidecar = {
        "dimensions": {"width": int(labels.shape[1]), "height": int(labels.shape[0])},
        "mode": args.mode,
        "theta": theta,
        "normalize": not args.no_normalize,
        "label_histogram": {str(int(v)): int(c) for v, c in zip(values, counts)},
        "segment_count": count_segments(labels),
        "runtime_ms": runtime_ms,
    }
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_bytes(render_labelmap(labels))
    args.out.with_suffix(".json").write_text(json.dumps(sidecar, indent=2) + "\n")
    print(
        f"wrote {args.out} ({sidecar['segment_count']} segments, {runtime_ms:.1f} ms)"
    )
    return 0


def cmd_table2(args: argparse.Namespace) -> int:
    rows = run_table2(samples=args.samples, seed=args.seed, grid_step=args.grid)
    if args.json:
        doc = [
            {
                "theta": row.theta,
                "grid_count": row.grid_count,
                "random_count": row.random_count,
            }
            for row in rows
        ]
        print(json.dumps(doc, indent=2))
        return 0
    print(f"{'theta':16s} {'grid':>6s} {'random':>8s}")
    for row in rows:
        print(f"{row.theta:16s} {row.grid_count:6d} {row.random_count:8d}")
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    image = _read_image(args.input)
    mask = _read_mask(args.mask) if args.mask else None
    report = run_sweep(
        image, args.thetas, mask=mask, mode=args.mode, normalize=not args.no_normalize
    )
    if args.json:
        doc = {
            "rows": [
                {"theta": row.theta, "segment_count": row.segment_count, "miou": row.miou}
                for row in report.rows
            ],
            "best_theta": report.best_theta,
        }
        print(json.dumps(doc, indent=2))
        return 0
    for row in report.rows:
        cells = [f"theta={format_pi_multiple(row.theta):12s}", f"segments={row.segment_count}"]
        if row.miou is not None:
            cells.append(f"miou={row.miou:.4f}")
        print("  ".join(cells))
    if report.best_theta is not None:
        print(f"best theta: {format_pi_multiple(report.best_theta)}")
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    entries = load_manifest(args.manifest)
    params = AngleParams.uniform(args.theta)
    report = run_bench(entries, methods=args.methods, params=params, seed=args.seed, k=args.k)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    csv_path = args.out.with_suffix(".csv")
    json_path = args.out.with_suffix(".json")
    csv_path.write_text(bench_to_csv(report))
    json_path.write_text(json.dumps(bench_to_json(report), indent=2) + "\n")
    for agg in report.aggregates:
        print(
            f"{agg.method:8s} average_miou={agg.average_miou:.4f} "
            f"total_runtime_ms={agg.total_runtime_ms:.1f}"
        )
    for baseline, rate in report.win_rates.items():
        print(f"win rate vs {baseline}: {rate:.2%}")
    for warning in report.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    print(f"wrote {csv_path} and {json_path}")
    return 0


def cmd_thresholds(args: argparse.Namespace) -> int:
    if args.theta is not None:
        theta = args.theta
    else:
        theta = theta_from_threshold(args.ith)
    thresholds = thresholds_from_theta(theta)
    if args.json:
        print(json.dumps({"theta": theta, "thresholds": list(thresholds)}, indent=2))
        return 0
    print(f"theta = {format_pi_multiple(theta)} ({theta:.6g} rad)")
    if thresholds:
        print("thresholds:", ", ".join(f"{t:.6g}" for t in thresholds))
    else:
        print("thresholds: none in (0, 1]")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phaseseg",
        description="Phase-encoding image segmentation and evaluation tools.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("segment", help="segment one image and write a label map")
    p.add_argument("--input", type=Path, required=True, help="PNG or JPEG image")
    p.add_argument("--mode", choices=("rgb", "gray"), default="rgb")
    p.add_argument("--theta1", type=parse_theta, default="pi",
                   help="R channel angle (the only angle used in gray mode)")
    p.add_argument("--theta2", type=parse_theta, default="pi", help="G channel angle")
    p.add_argument("--theta3", type=parse_theta, default="pi", help="B channel angle")
    p.add_argument("--no-normalize", action="store_true",
                   help="feed raw 0..255 intensities into the phases")
    p.add_argument("--out", type=Path, required=True,
                   help="label map PNG path; a .json sidecar lands next to it")
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("table2", help="distinct-label counts per theta row")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grid", type=float, default=0.01, help="lattice step in (0, 1)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_table2)

    p = sub.add_parser("sweep", help="segment at several thetas, score against a mask")
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--thetas", type=_theta_list, required=True,
                   help="comma-separated list, e.g. 'pi/2,3pi/4,pi'")
    p.add_argument("--mask", type=Path, default=None)
    p.add_argument("--mode", choices=("rgb", "gray"), default="rgb")
    p.add_argument("--no-normalize", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("bench", help="compare methods over a dataset manifest")
    p.add_argument("--manifest", type=Path, required=True)
    p.add_argument("--methods", type=_method_list, default=list(BENCH_METHODS),
                   help="comma-separated subset of iqft,otsu,kmeans")
    p.add_argument("--theta", type=parse_theta, default="pi",
                   help="uniform angle for the iqft rows")
    p.add_argument("--seed", type=int, default=0, help="k-means seed")
    p.add_argument("--k", type=int, default=2, help="k-means cluster count")
    p.add_argument("--out", type=Path, required=True,
                   help="output basename; writes <out>.csv and <out>.json")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("thresholds", help="gray-mode threshold algebra")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--theta", type=parse_theta, default=None)
    group.add_argument("--ith", type=float, default=None,
                       help="intensity threshold; prints the equivalent theta")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_thresholds)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
