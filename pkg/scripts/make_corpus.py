#!/usr/bin/env python3
"""Generate the bundled synthetic corpus (images, masks, manifest).

Every image is a smooth color gradient with mild sensor-style noise, plus one
or more colored objects.  The noise matters: raw 0..255 intensities must
dither across adjacent levels so the unnormalized ablation shows its phase
aliasing on every image.  Masks mark object pixels as foreground with a
2-pixel void ring along the boundary.

Rerunning the script reproduces the committed files byte for byte (fixed
seed, fixed Pillow encoder settings).
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
from PIL import Image

SIZE = 96
SEED = 20250819
VOID = 255

CORPUS_DIR = Path(__file__).resolve().parent.parent / "data" / "corpus"


def lerp_gradient(c0, c1, horizontal=True):
    """Linear blend between two RGB colors across the image."""
    t = np.linspace(0.0, 1.0, SIZE)
    ramp = np.tile(t, (SIZE, 1)) if horizontal else np.tile(t[:, None], (1, SIZE))
    c0 = np.asarray(c0, dtype=np.float64)
    c1 = np.asarray(c1, dtype=np.float64)
    return c0[None, None, :] + ramp[:, :, None] * (c1 - c0)[None, None, :]


def disk(cy, cx, radius):
    y, x = np.mgrid[0:SIZE, 0:SIZE]
    return (y - cy) ** 2 + (x - cx) ** 2 <= radius**2


def ellipse(cy, cx, ry, rx):
    y, x = np.mgrid[0:SIZE, 0:SIZE]
    return ((y - cy) / ry) ** 2 + ((x - cx) / rx) ** 2 <= 1.0


def rect(y0, y1, x0, x1):
    m = np.zeros((SIZE, SIZE), dtype=bool)
    m[y0:y1, x0:x1] = True
    return m


def band(offset, width):
    y, x = np.mgrid[0:SIZE, 0:SIZE]
    return np.abs((x - y) - offset) <= width


def dilate(mask):
    out = mask.copy()
    out[1:, :] |= mask[:-1, :]
    out[:-1, :] |= mask[1:, :]
    out[:, 1:] |= mask[:, :-1]
    out[:, :-1] |= mask[:, 1:]
    return out


def erode(mask):
    return ~dilate(~mask)


def build_mask(foreground):
    """Sentinel mask with a void ring straddling the object boundary."""
    ring = dilate(foreground) & ~erode(foreground)
    mask = foreground.astype(np.uint8)
    mask[ring] = VOID
    return mask


def compose(background, objects, rng):
    """Paint object gradients over the background and add sensor noise."""
    img = background.copy()
    fg = np.zeros((SIZE, SIZE), dtype=bool)
    for shape, color_a, color_b in objects:
        paint = lerp_gradient(color_a, color_b, horizontal=False)
        img[shape] = paint[shape]
        fg |= shape
    img += rng.normal(0.0, 2.5, size=img.shape)
    return np.clip(np.round(img), 0, 255).astype(np.uint8), fg


def make_images(rng):
    yield "disk", compose(
        lerp_gradient((150, 90, 40), (200, 140, 70)),
        [(disk(48, 48, 26), (30, 60, 180), (70, 110, 220))],
        rng,
    )
    yield "tworects", compose(
        lerp_gradient((40, 70, 90), (90, 120, 150), horizontal=False),
        [
            (rect(14, 44, 10, 46), (210, 180, 40), (240, 210, 80)),
            (rect(56, 86, 50, 88), (170, 40, 60), (210, 80, 100)),
        ],
        rng,
    )
    yield "ring", compose(
        lerp_gradient((60, 60, 60), (120, 120, 120)),
        [(disk(48, 48, 30) & ~disk(48, 48, 16), (20, 140, 90), (60, 190, 140))],
        rng,
    )
    yield "blobs", compose(
        lerp_gradient((120, 60, 120), (180, 110, 170), horizontal=False),
        [
            (disk(28, 26, 14), (240, 220, 90), (250, 240, 140)),
            (disk(34, 70, 11), (40, 170, 200), (90, 210, 230)),
            (disk(70, 46, 17), (230, 120, 30), (250, 160, 70)),
        ],
        rng,
    )
    yield "diag", compose(
        lerp_gradient((30, 110, 60), (70, 160, 100)),
        [(band(0, 12), (200, 40, 160), (240, 90, 200))],
        rng,
    )
    yield "ellipse", compose(
        lerp_gradient((90, 90, 150), (140, 140, 210), horizontal=False),
        [(ellipse(40, 56, 18, 30), (250, 250, 250), (200, 210, 220))],
        rng,
    )


def main():
    CORPUS_DIR.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(SEED)
    entries = []
    for name, (image, fg) in make_images(rng):
        Image.fromarray(image, mode="RGB").save(CORPUS_DIR / f"{name}.png", format="PNG")
        Image.fromarray(build_mask(fg), mode="L").save(
            CORPUS_DIR / f"{name}_mask.png", format="PNG"
        )
        entries.append({"id": name, "image": f"{name}.png", "mask": f"{name}_mask.png"})
    manifest = {"root": ".", "entries": entries}
    (CORPUS_DIR / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    print(f"wrote {len(entries)} images to {CORPUS_DIR}")


if __name__ == "__main__":
    main()
