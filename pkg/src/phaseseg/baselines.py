"""Reference segmenters the phase classifier is compared against.

Otsu thresholding maximizes the between-class variance

    sigma_b^2(k) = w0 * w1 * (mu0 - mu1)^2

over 256 uniform histogram bins.  The score is evaluated in exact integer
arithmetic (numerator/denominator pairs compared by cross-multiplication), so
the winning bin is reproducible and invariant to rescaling all counts.

K-means is Lloyd's algorithm over RGB vectors with greedy farthest-point
seeding: the seed picks the first centroid uniformly, every later centroid is
the point farthest from the ones chosen so far.  For a fixed seed the whole
run is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HISTOGRAM_BINS = 256

_SHIFT_TOL = 1e-4
_MAX_ITER = 300


class DegenerateImageError(ValueError):
    """Raised when thresholding is undefined (single populated gray level)."""


def histogram256(gray: np.ndarray) -> np.ndarray:
    """Counts over 256 uniform bins of [0, 1]; intensity 1.0 lands in bin 255."""
    arr = np.asarray(gray, dtype=np.float64)
    if arr.size == 0:
        raise ValueError("empty image")
    if arr.min() < 0.0 or arr.max() > 1.0:
        raise ValueError("intensities out of [0, 1]")
    bins = np.minimum((arr * HISTOGRAM_BINS).astype(np.int64), HISTOGRAM_BINS - 1)
    return np.bincount(bins.ravel(), minlength=HISTOGRAM_BINS)


def otsu_threshold(hist: np.ndarray) -> float:
    """Bin-center threshold maximizing between-class variance.

    Ties go to the lower threshold.  Foreground is intensity > threshold.
    """
    counts = [int(c) for c in np.asarray(hist).ravel()]
    if len(counts) != HISTOGRAM_BINS:
        raise ValueError(f"expected {HISTOGRAM_BINS} bins, got {len(counts)}")
    if any(c < 0 for c in counts):
        raise ValueError("negative histogram count")
    total = sum(counts)
    weighted = sum(i * c for i, c in enumerate(counts))
    if sum(1 for c in counts if c > 0) < 2:
        raise DegenerateImageError("histogram needs two populated levels")

    # score(k) = (S0*T - S*c0)^2 / (c0*(T - c0)), proportional to the
    # between-class variance; exact ints keep ties and scaling stable.
    best_k = -1
    best_num = 0
    best_den = 1
    c0 = 0
    s0 = 0
    for k in range(HISTOGRAM_BINS - 1):
        c0 += counts[k]
        s0 += k * counts[k]
        if c0 == 0 or c0 == total:
            continue
        num = (s0 * total - weighted * c0) ** 2
        den = c0 * (total - c0)
        if best_k < 0 or num * best_den > best_num * den:
            best_k, best_num, best_den = k, num, den
    return (best_k + 0.5) / HISTOGRAM_BINS


def otsu_segment(gray: np.ndarray) -> tuple[np.ndarray, float]:
    """Binary mask (1 = foreground, intensity > threshold) and the threshold."""
    threshold = otsu_threshold(histogram256(gray))
    arr = np.asarray(gray, dtype=np.float64)
    return (arr > threshold).astype(np.uint8), threshold


@dataclass(frozen=True)
class KMeansResult:
    labels: np.ndarray
    centroids: np.ndarray
    iterations: int
    inertia: float
    inertia_history: tuple[float, ...]


def _assign(points: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    d2 = ((points[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
    return d2.argmin(axis=1)


def _seed_centroids(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    chosen = [int(rng.integers(points.shape[0]))]
    for _ in range(1, k):
        d2 = ((points[:, None, :] - points[chosen][None, :, :]) ** 2).sum(axis=2).min(axis=1)
        chosen.append(int(d2.argmax()))
    return points[chosen].copy()


def kmeans_segment(points: np.ndarray, k: int, seed: int = 0) -> KMeansResult:
    """Cluster (N, 3) RGB vectors in [0, 1]^3 into k groups.

    Stops when the assignment is stable or the largest centroid movement
    drops below 1e-4, capped at 300 iterations.  Emptied clusters steal the
    point currently farthest from its own centroid.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 3:
        raise ValueError(f"expected (N, 3) points, got shape {pts.shape}")
    if pts.size and (pts.min() < 0.0 or pts.max() > 1.0):
        raise ValueError("points out of [0, 1]")
    if k < 1 or k > 255:
        raise ValueError(f"k must lie in 1..255, got {k}")
    if k > pts.shape[0]:
        raise ValueError(f"k={k} exceeds point count {pts.shape[0]}")

    rng = np.random.default_rng(seed)
    centroids = _seed_centroids(pts, k, rng)
    labels = _assign(pts, centroids)
    history: list[float] = []
    iterations = 0
    for iterations in range(1, _MAX_ITER + 1):
        new_centroids = centroids.copy()
        stolen: list[int] = []
        for j in range(k):
            members = labels == j
            if members.any():
                new_centroids[j] = pts[members].mean(axis=0)
        for j in range(k):
            if not (labels == j).any():
                # farthest point from its current centroid, lowest index on ties
                d2 = ((pts - centroids[labels]) ** 2).sum(axis=1)
                d2[stolen] = -1.0
                victim = int(d2.argmax())
                stolen.append(victim)
                new_centroids[j] = pts[victim]
                labels = labels.copy()
                labels[victim] = j
        shift = float(np.sqrt(((new_centroids - centroids) ** 2).sum(axis=1)).max())
        centroids = new_centroids
        new_labels = _assign(pts, centroids)
        history.append(float(((pts - centroids[new_labels]) ** 2).sum()))
        converged = bool(np.array_equal(new_labels, labels)) or shift < _SHIFT_TOL
        labels = new_labels
        if converged:
            break
    inertia = float(((pts - centroids[labels]) ** 2).sum())
    return KMeansResult(
        labels=labels.astype(np.uint8),
        centroids=centroids,
        iterations=iterations,
        inertia=inertia,
        inertia_history=tuple(history),
    )


def kmeans_label_image(image: np.ndarray, k: int = 2, seed: int = 0) -> np.ndarray:
    """Per-pixel cluster labels for an (H, W, 3) 8-bit image."""
    arr = np.asarray(image)
    if arr.ndim != 3 or arr.shape[2] != 3 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ValueError(f"expected non-empty (H, W, 3) image, got shape {arr.shape}")
    flat = arr.reshape(-1, 3).astype(np.float64) / 255.0
    result = kmeans_segment(flat, k=k, seed=seed)
    return result.labels.reshape(arr.shape[:2])
