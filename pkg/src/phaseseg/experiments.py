"""Experiment drivers: dataset manifests, segment-count studies, sweeps, benchmarks.

These functions back the CLI and the HTTP service.  They return plain
dataclasses so callers can render text, CSV, or JSON without re-running
anything.  All randomness is seeded explicitly; the benchmark CSV is
byte-identical across runs because it carries no wall-clock columns
(timings live in the JSON report only).
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .baselines import kmeans_label_image, otsu_segment
from .core import AngleParams, classify_rgb_array, segment_gray, segment_rgb
from .imgio import decode_image, load_mask, to_gray
from .metrics import best_binary_assignment, count_segments

BENCH_METHODS = ("iqft", "otsu", "kmeans")
BENCH_CSV_SCHEMA = "bench-csv-v1"
BENCH_CSV_COLUMNS = ("id", "method", "theta1", "theta2", "theta3", "miou", "segment_count")

TABLE2_ROWS: tuple[tuple[str, AngleParams], ...] = (
    ("pi/4", AngleParams.uniform(math.pi / 4)),
    ("pi/2", AngleParams.uniform(math.pi / 2)),
    ("3pi/4", AngleParams.uniform(3 * math.pi / 4)),
    ("pi", AngleParams.uniform(math.pi)),
    ("5pi/4", AngleParams.uniform(5 * math.pi / 4)),
    ("3pi/2", AngleParams.uniform(3 * math.pi / 2)),
    ("7pi/4", AngleParams.uniform(7 * math.pi / 4)),
    ("2pi", AngleParams.uniform(2 * math.pi)),
    ("pi/4,pi/2,pi", AngleParams(math.pi / 4, math.pi / 2, math.pi)),
)


class ManifestError(ValueError):
    """Raised when a dataset manifest is malformed or references missing files."""


@dataclass(frozen=True)
class ManifestEntry:
    id: str
    image: Path
    mask: Path | None = None


def load_manifest(path: str | Path) -> tuple[ManifestEntry, ...]:
    """Load {root, entries:[{id, image, mask?}]} and resolve paths against root.

    Relative paths are resolved against the manifest's directory joined with
    the root field.  Listed files must exist; a missing mask *field* is legal
    (the entry is just unscored downstream), a dangling mask *path* is not.
    """
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except OSError as exc:
        raise ManifestError(f"cannot read manifest: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ManifestError(f"manifest is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("entries"), list):
        raise ManifestError("manifest must be an object with an 'entries' list")
    base = path.parent / doc.get("root", ".")
    entries = []
    seen: set[str] = set()
    for raw in doc["entries"]:
        if not isinstance(raw, dict) or "id" not in raw or "image" not in raw:
            raise ManifestError(f"entry must carry 'id' and 'image': {raw!r}")
        entry_id = str(raw["id"])
        if entry_id in seen:
            raise ManifestError(f"duplicate id {entry_id!r}")
        seen.add(entry_id)
        image = base / raw["image"]
        if not image.is_file():
            raise ManifestError(f"{entry_id}: image not found: {image}")
        mask = None
        if raw.get("mask") is not None:
            mask = base / raw["mask"]
            if not mask.is_file():
                raise ManifestError(f"{entry_id}: mask not found: {mask}")
        entries.append(ManifestEntry(id=entry_id, image=image, mask=mask))
    return tuple(entries)


def count_labels_grid(params: AngleParams, step: float = 0.01) -> int:
    """Distinct labels over a dense RGB lattice of cell centers.

    The lattice samples (i + 0.5) * step per channel, staying strictly inside
    (0, 1).  Sampling the closed endpoints instead would pick up extra labels
    that exist only on the cube's zero-faces.
    """
    if not 0.0 < step < 1.0:
        raise ValueError(f"step must be in (0, 1), got {step}")
    n = int(round(1.0 / step))
    centers = (np.arange(n) + 0.5) * step
    r, g, b = np.meshgrid(centers, centers, centers, indexing="ij")
    pixels = np.stack([r.ravel(), g.ravel(), b.ravel()], axis=1)
    labels, _ = classify_rgb_array(pixels, params)
    return int(np.unique(labels).size)


def count_labels_random(params: AngleParams, samples: int, seed: int = 0) -> int:
    """Distinct labels over uniform random triples in [0, 1)."""
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    rng = np.random.default_rng(seed)
    pixels = rng.random((samples, 3))
    labels, _ = classify_rgb_array(pixels, params)
    return int(np.unique(labels).size)


@dataclass(frozen=True)
class Table2Row:
    theta: str
    params: AngleParams
    grid_count: int
    random_count: int


def run_table2(samples: int = 100_000, seed: int = 0, grid_step: float = 0.01) -> tuple[Table2Row, ...]:
    """Segment-count study: distinct labels per theta row, grid and random modes."""
    rows = []
    for name, params in TABLE2_ROWS:
        rows.append(
            Table2Row(
                theta=name,
                params=params,
                grid_count=count_labels_grid(params, step=grid_step),
                random_count=count_labels_random(params, samples=samples, seed=seed),
            )
        )
    return tuple(rows)


def transition_rate(labels: np.ndarray) -> float:
    """Fraction of horizontally adjacent pixel pairs with different labels."""
    arr = np.asarray(labels)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 2:
        raise ValueError(f"need a 2-D map with >= 2 columns, got shape {arr.shape}")
    return float(np.mean(arr[:, 1:] != arr[:, :-1]))


def ablation_rates(image: np.ndarray, params: AngleParams) -> tuple[float, float]:
    """Transition rates of (normalized, unnormalized) segmentation of one image."""
    rate_norm = transition_rate(segment_rgb(image, params, normalize=True))
    rate_raw = transition_rate(segment_rgb(image, params, normalize=False))
    return rate_norm, rate_raw


@dataclass(frozen=True)
class SweepRow:
    theta: float
    segment_count: int
    miou: float | None = None


@dataclass(frozen=True)
class SweepReport:
    rows: tuple[SweepRow, ...]
    best_theta: float | None


def run_sweep(
    image: np.ndarray,
    thetas: Sequence[float],
    mask: np.ndarray | None = None,
    mode: str = "rgb",
    normalize: bool = True,
) -> SweepReport:
    """Segment one image at each theta; score against the mask when given.

    Scored rows are ordered best mIOU first (stable, so ties keep the input
    order) and best_theta names the winner.  Unscored rows keep input order.
    """
    if mode not in ("rgb", "gray"):
        raise ValueError(f"mode must be 'rgb' or 'gray', got {mode!r}")
    if len(thetas) < 1:
        raise ValueError("need at least one theta")
    gray = None
    if mode == "gray":
        gray = image if np.asarray(image).ndim == 2 else to_gray(image)
    rows = []
    for theta in thetas:
        if mode == "gray":
            labels = segment_gray(gray, theta)
        else:
            labels = segment_rgb(image, AngleParams.uniform(theta), normalize=normalize)
        score = None
        if mask is not None:
            score = best_binary_assignment(labels, mask).miou
        rows.append(SweepRow(theta=float(theta), segment_count=count_segments(labels), miou=score))
    if mask is not None:
        rows.sort(key=lambda row: -row.miou)
        return SweepReport(rows=tuple(rows), best_theta=rows[0].theta)
    return SweepReport(rows=tuple(rows), best_theta=None)


@dataclass(frozen=True)
class BenchRow:
    id: str
    method: str
    theta: tuple[float, float, float] | None
    miou: float
    segment_count: int
    runtime_ms: float


@dataclass(frozen=True)
class BenchAggregate:
    method: str
    average_miou: float
    total_runtime_ms: float


@dataclass(frozen=True)
class BenchReport:
    rows: tuple[BenchRow, ...]
    aggregates: tuple[BenchAggregate, ...]
    win_rates: dict[str, float]
    warnings: tuple[str, ...]


def _segment_for_method(
    method: str, image: np.ndarray, params: AngleParams, seed: int, k: int
) -> np.ndarray:
    if method == "iqft":
        return segment_rgb(image, params)
    if method == "otsu":
        mask, _ = otsu_segment(to_gray(image))
        return mask
    if method == "kmeans":
        return kmeans_label_image(image, k=k, seed=seed)
    raise ValueError(f"unknown method {method!r}, expected one of {BENCH_METHODS}")


def run_bench(
    entries: Sequence[ManifestEntry],
    methods: Sequence[str] = BENCH_METHODS,
    params: AngleParams | None = None,
    seed: int = 0,
    k: int = 2,
) -> BenchReport:
    """Run each method on each masked entry and score by best-assignment mIOU.

    Entries without a mask are skipped and listed in warnings.  Timings cover
    the segmentation call only (scoring is shared overhead); everything else
    is deterministic for a fixed seed.
    """
    if params is None:
        params = AngleParams.uniform(math.pi)
    for method in methods:
        if method not in BENCH_METHODS:
            raise ValueError(f"unknown method {method!r}, expected one of {BENCH_METHODS}")
    rows = []
    warnings = []
    scores: dict[str, dict[str, float]] = {m: {} for m in methods}
    for entry in entries:
        if entry.mask is None:
            warnings.append(f"{entry.id}: no mask, skipped")
            continue
        image = decode_image(entry.image.read_bytes())
        mask = load_mask(entry.mask.read_bytes())
        for method in methods:
            start = time.perf_counter()
            labels = _segment_for_method(method, image, params, seed=seed, k=k)
            runtime_ms = (time.perf_counter() - start) * 1000.0
            report = best_binary_assignment(labels, mask)
            theta = (params.theta1, params.theta2, params.theta3) if method == "iqft" else None
            rows.append(
                BenchRow(
                    id=entry.id,
                    method=method,
                    theta=theta,
                    miou=report.miou,
                    segment_count=count_segments(labels),
                    runtime_ms=runtime_ms,
                )
            )
            scores[method][entry.id] = report.miou
    aggregates = []
    for method in methods:
        method_rows = [row for row in rows if row.method == method]
        if not method_rows:
            continue
        aggregates.append(
            BenchAggregate(
                method=method,
                average_miou=sum(row.miou for row in method_rows) / len(method_rows),
                total_runtime_ms=sum(row.runtime_ms for row in method_rows),
            )
        )
    win_rates = {}
    if "iqft" in methods:
        for baseline in methods:
            if baseline == "iqft" or not scores[baseline]:
                continue
            ids = sorted(scores[baseline])
            wins = sum(1 for i in ids if scores["iqft"][i] > scores[baseline][i])
            win_rates[baseline] = wins / len(ids)
    return BenchReport(
        rows=tuple(rows),
        aggregates=tuple(aggregates),
        win_rates=win_rates,
        warnings=tuple(warnings),
    )


def bench_to_csv(report: BenchReport) -> str:
    """Render rows as bench-csv-v1 (see README): no timing columns, so the
    bytes are stable across runs."""
    lines = [",".join(BENCH_CSV_COLUMNS)]
    for row in report.rows:
        theta = row.theta or ("", "", "")
        cells = (
            row.id,
            row.method,
            *(format(t, ".17g") if t != "" else "" for t in theta),
            format(row.miou, ".17g"),
            str(row.segment_count),
        )
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def bench_to_json(report: BenchReport) -> dict:
    """JSON-friendly report including timings, aggregates, and win rates."""
    return {
        "schema": BENCH_CSV_SCHEMA,
        "rows": [
            {
                "id": row.id,
                "method": row.method,
                "theta": list(row.theta) if row.theta else None,
                "miou": row.miou,
                "segment_count": row.segment_count,
                "runtime_ms": row.runtime_ms,
            }
            for row in report.rows
        ],
        "aggregates": [
            {
                "method": agg.method,
                "average_miou": agg.average_miou,
                "total_runtime_ms": agg.total_runtime_ms,
            }
            for agg in report.aggregates
        ],
        "win_rates": report.win_rates,
        "warnings": list(report.warnings),
    }
