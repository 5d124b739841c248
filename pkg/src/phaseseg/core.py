"""Phase-encoded pixel classification on the 8-point inverse Fourier basis.

A normalized RGB pixel is mapped to three phases

    gamma = R * theta1,  beta = G * theta2,  alpha = B * theta3

and expanded into the unit-modulus state vector

    v_j = exp(i * (alpha * a + beta * b + gamma * c)),   j = (a b c)_2,

with a the most significant bit.  Projecting v onto the 8-point inverse
Fourier basis,

    amps_k = (1/8) * sum_j M[k][j] * v_j,   M[j][k] = w^(-(j*k mod 8)),
    w = exp(2*pi*i / 8),

yields amplitudes whose squared magnitudes sum to one; the pixel's label is
the index of the largest squared magnitude.  M is symmetric and M/sqrt(8) is
unitary, so the projection is an 8-point inverse DFT up to normalization.

A single coefficient theta applied to a grayscale intensity I collapses the
same construction to two classes with

    p(class 0) = (1 + cos(I * theta)) / 2,

which flips class exactly at the intensities I_th = (4k +- 1) * pi / (2 *
theta), k = 0, 1, 2, ...  Choosing theta is therefore equivalent to choosing
one or more intensity thresholds in (0, 1].
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

THETA_MAX = 8.0 * math.pi

# Resource guard for threshold enumeration: the set has ~theta/pi members,
# so an unbounded angle would make the loop and the result arbitrarily large.
THETA_ENUM_LIMIT = 1.0e6

_OMEGA = np.exp(2j * np.pi / 8.0)

# Exponents stay in 0..7 so each entry is an exact integer power of w.
BASIS_MATRIX = np.array(
    [[_OMEGA ** (-(j * k) % 8) for k in range(8)] for j in range(8)]
)
BASIS_MATRIX.setflags(write=False)

_PI_FORM = re.compile(
    r"^\s*([0-9]*\.?[0-9]+)?\s*\*?\s*(?:pi|π)\s*(?:/\s*([0-9]*\.?[0-9]+))?\s*$",
    re.IGNORECASE,
)


def parse_theta(text: str) -> float:
    """Parse an angle written as radians ("1.57") or a pi multiple ("3pi/4").

    Accepted forms: "pi", "2pi", "2*pi", "pi/4", "3pi/4", "1.1197pi", plain
    decimals.  The result must be finite and nonnegative.
    """
    match = _PI_FORM.match(text)
    if match:
        coef = float(match.group(1)) if match.group(1) else 1.0
        den = float(match.group(2)) if match.group(2) else 1.0
        if den == 0.0:
            raise ValueError(f"zero denominator in angle {text!r}")
        value = coef * math.pi / den
    else:
        try:
            value = float(text)
        except ValueError:
            raise ValueError(f"unparseable angle {text!r}") from None
    if not math.isfinite(value) or value < 0.0:
        raise ValueError(f"angle must be finite and nonnegative, got {text!r}")
    return value


def format_pi_multiple(theta: float) -> str:
    """Render an angle as a compact multiple of pi for reports."""
    multiple = theta / math.pi
    return f"{multiple:.4g}pi"


def _as_float(name: str, value) -> float:
    try:
        out = float(value)
    except (TypeError, ValueError):
        raise ValueError(f"{name} must be a real number, got {value!r}") from None
    if not math.isfinite(out):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return out


@dataclass(frozen=True)
class AngleParams:
    """Per-channel phase coefficients (theta1 scales R, theta2 G, theta3 B)."""

    theta1: float
    theta2: float
    theta3: float

    def __post_init__(self) -> None:
        for name in ("theta1", "theta2", "theta3"):
            value = _as_float(name, getattr(self, name))
            if value < 0.0 or value > THETA_MAX:
                raise ValueError(f"{name} must lie in [0, 8*pi], got {value!r}")

    @classmethod
    def uniform(cls, theta: float) -> "AngleParams":
        return cls(theta, theta, theta)

    @classmethod
    def from_strings(cls, theta1: str, theta2: str, theta3: str) -> "AngleParams":
        return cls(parse_theta(theta1), parse_theta(theta2), parse_theta(theta3))


@dataclass(frozen=True)
class PhaseTriple:
    """Encoded phases; alpha rides the most significant index bit."""

    alpha: float
    beta: float
    gamma: float

    def __post_init__(self) -> None:
        for name in ("alpha", "beta", "gamma"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


@dataclass(frozen=True)
class AmplitudeDistribution:
    """Complex amplitudes over the 8 basis states and their probabilities."""

    amps: np.ndarray
    probs: np.ndarray

    @classmethod
    def from_amps(cls, amps: np.ndarray) -> "AmplitudeDistribution":
        # |amps|^2 can exceed 1 by a few ulp; clamp so probs is a distribution.
        probs = np.clip(amps.real**2 + amps.imag**2, 0.0, 1.0)
        return cls(amps=amps, probs=probs)

    @property
    def label(self) -> int:
        return int(np.argmax(self.probs))


def phase_encode_rgb(pixel, params: AngleParams) -> PhaseTriple:
    """Map a normalized RGB triple to phases (red -> gamma, blue -> alpha)."""
    r, g, b = (float(c) for c in pixel)
    for name, channel in (("R", r), ("G", g), ("B", b)):
        if not 0.0 <= channel <= 1.0:
            raise ValueError(f"channel {name} out of [0, 1]: {channel!r}")
    return PhaseTriple(
        alpha=b * params.theta3,
        beta=g * params.theta2,
        gamma=r * params.theta1,
    )


def phase_vector(pt: PhaseTriple) -> np.ndarray:
    """Unit-modulus state vector v_j = exp(i(alpha*a + beta*b + gamma*c))."""
    ea = np.exp(1j * pt.alpha)
    eb = np.exp(1j * pt.beta)
    eg = np.exp(1j * pt.gamma)
    return np.array(
        [1.0, eg, eb, eb * eg, ea, ea * eg, ea * eb, ea * eb * eg],
        dtype=np.complex128,
    )


def iqft_amplitudes(v: np.ndarray) -> AmplitudeDistribution:
    """Project a state vector onto the basis: amps = (1/8) * M @ v."""
    v = np.asarray(v, dtype=np.complex128)
    if v.shape != (8,):
        raise ValueError(f"expected 8 components, got shape {v.shape}")
    return AmplitudeDistribution.from_amps(BASIS_MATRIX @ v / 8.0)


def _amplitude_table(alpha: np.ndarray, beta: np.ndarray, gamma: np.ndarray) -> np.ndarray:
    """Amplitudes for N phase triples at once, shape (N, 8).

    Accumulates basis rows in a fixed order (no BLAS dispatch) so results are
    bit-identical across thread counts and pixel orderings.
    """
    ea = np.exp(1j * alpha)
    eb = np.exp(1j * beta)
    eg = np.exp(1j * gamma)
    cols = (np.ones_like(ea), eg, eb, eb * eg, ea, ea * eg, ea * eb, ea * eb * eg)
    amps = np.zeros((alpha.shape[0], 8), dtype=np.complex128)
    for j in range(8):
        amps += cols[j][:, None] * BASIS_MATRIX[j]
    amps /= 8.0
    return amps


def classify_phase_array(
    alpha: np.ndarray, beta: np.ndarray, gamma: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Labels and winning probabilities for N phase triples.

    Ties go to the lowest index (np.argmax on equal values).
    """
    amps = _amplitude_table(alpha, beta, gamma)
    probs = np.clip(amps.real**2 + amps.imag**2, 0.0, 1.0)
    labels = probs.argmax(axis=1)
    win = probs[np.arange(probs.shape[0]), labels]
    return labels.astype(np.uint8), win


def classify_rgb_array(rgb: np.ndarray, params: AngleParams) -> tuple[np.ndarray, np.ndarray]:
    """Classify an (N, 3) float array of RGB values (already scaled).

    Values are used directly as phase multiplicands, so callers choose
    whether they are normalized to [0, 1] or raw 0..255.
    """
    rgb = np.asarray(rgb, dtype=np.float64)
    if rgb.ndim != 2 or rgb.shape[1] != 3:
        raise ValueError(f"expected (N, 3) array, got shape {rgb.shape}")
    return classify_phase_array(
        alpha=rgb[:, 2] * params.theta3,
        beta=rgb[:, 1] * params.theta2,
        gamma=rgb[:, 0] * params.theta1,
    )


def classify_rgb_pixel(pixel, params: AngleParams) -> int:
    """Label of a single normalized RGB pixel (argmax over probabilities)."""
    pt = phase_encode_rgb(pixel, params)
    labels, _ = classify_phase_array(
        np.array([pt.alpha]), np.array([pt.beta]), np.array([pt.gamma])
    )
    return int(labels[0])


def segment_rgb(image: np.ndarray, params: AngleParams, normalize: bool = True) -> np.ndarray:
    """Per-pixel labels for an (H, W, 3) 8-bit image.

    With normalize off, raw 0..255 intensities multiply the thetas directly;
    the resulting phase aliasing is deliberate (it is the effect the
    normalization step exists to prevent).
    """
    labels, _ = segment_rgb_detailed(image, params, normalize)
    return labels


def segment_rgb_detailed(
    image: np.ndarray, params: AngleParams, normalize: bool = True
) -> tuple[np.ndarray, np.ndarray]:
    """Like segment_rgb but also returns per-pixel winning probabilities."""
    arr = np.asarray(image)
    if arr.ndim != 3 or arr.shape[2] != 3 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ValueError(f"expected non-empty (H, W, 3) image, got shape {arr.shape}")
    flat = arr.reshape(-1, 3).astype(np.float64)
    if normalize:
        flat /= 255.0
    labels, win = classify_rgb_array(flat, params)
    shape = arr.shape[:2]
    return labels.reshape(shape), win.reshape(shape)


def _check_gray_theta(theta: float) -> None:
    value = _as_float("theta", theta)
    if value <= 0.0 or value > THETA_MAX:
        raise ValueError(f"theta must lie in (0, 8*pi], got {theta!r}")


def gray_probabilities(intensity: float, theta: float) -> tuple[float, float]:
    """Two-class probabilities for a grayscale intensity.

    p0 = (1 + cos(I * theta)) / 2; p1 is defined as 1 - p0 so the pair sums
    to one exactly.
    """
    _check_gray_theta(theta)
    if not 0.0 <= intensity <= 1.0:
        raise ValueError(f"intensity out of [0, 1]: {intensity!r}")
    p0 = min(max((1.0 + math.cos(intensity * theta)) / 2.0, 0.0), 1.0)
    return p0, 1.0 - p0


def classify_gray_pixel(intensity: float, theta: float) -> int:
    """0 iff cos(I * theta) >= 0; the boundary tie goes to class 0."""
    _check_gray_theta(theta)
    if not 0.0 <= intensity <= 1.0:
        raise ValueError(f"intensity out of [0, 1]: {intensity!r}")
    return 0 if math.cos(intensity * theta) >= 0.0 else 1


def segment_gray(image: np.ndarray, theta: float) -> np.ndarray:
    """Binary labels for an (H, W) raster of intensities in [0, 1]."""
    _check_gray_theta(theta)
    arr = np.asarray(image, dtype=np.float64)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(f"expected non-empty (H, W) raster, got shape {arr.shape}")
    if arr.min() < 0.0 or arr.max() > 1.0:
        raise ValueError("intensities out of [0, 1]")
    return (np.cos(arr * theta) < 0.0).astype(np.uint8)


def thresholds_from_theta(theta: float) -> tuple[float, ...]:
    """All intensity thresholds (4k +- 1) * pi / (2 * theta) inside (0, 1].

    Empty for theta < pi/2: the smallest candidate already exceeds 1.
    """
    value = _as_float("theta", theta)
    if value <= 0.0:
        raise ValueError(f"theta must be positive, got {theta!r}")
    if value > THETA_ENUM_LIMIT:
        raise ValueError(f"theta too large to enumerate thresholds: {theta!r}")
    unit = math.pi / (2.0 * value)
    found: list[float] = []
    k = 0
    while True:
        low = (4 * k - 1) * unit
        high = (4 * k + 1) * unit
        for candidate in (low, high):
            if 0.0 < candidate <= 1.0:
                found.append(candidate)
        if low > 1.0:
            break
        k += 1
    return tuple(found)


def theta_from_threshold(i_th: float) -> float:
    """Angle whose smallest threshold is i_th: theta = pi / (2 * i_th)."""
    value = _as_float("threshold", i_th)
    if not 0.0 < value <= 1.0:
        raise ValueError(f"threshold must lie in (0, 1], got {i_th!r}")
    return math.pi / (2.0 * value)
