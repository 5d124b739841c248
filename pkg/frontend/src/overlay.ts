/**
 * Overlay compositing: label colors alpha-blended over the source image.
 *
 * Pure byte-array arithmetic so it is testable without a canvas; the DOM
 * layer wraps the result in ImageData and paints it.
 */

import { labelColor } from './palette.js';

/**
 * Blend palette colors over an RGBA source at the given opacity.
 *
 * sourceRgba holds width*height*4 bytes; labels holds one label per pixel
 * in the same row-major order. Opacity 0 returns the source unchanged,
 * opacity 1 the pure label map. Output alpha is always 255.
 */
export function renderOverlay(
  sourceRgba: Uint8ClampedArray,
  labels: Uint8Array,
  opacity: number,
): Uint8ClampedArray<ArrayBuffer> {
  if (sourceRgba.length !== labels.length * 4) {
    throw new RangeError(
      `source has ${sourceRgba.length / 4} pixels, labels have ${labels.length}`,
    );
  }
  if (!(opacity >= 0 && opacity <= 1)) {
    throw new RangeError(`opacity must be in [0, 1], got ${opacity}`);
  }
  const out = new Uint8ClampedArray(sourceRgba.length);
  const keep = 1 - opacity;
  for (let i = 0; i < labels.length; i++) {
    const [r, g, b] = labelColor(labels[i]!);
    const j = i * 4;
    out[j] = Math.round(sourceRgba[j]! * keep + r * opacity);
    out[j + 1] = Math.round(sourceRgba[j + 1]! * keep + g * opacity);
    out[j + 2] = Math.round(sourceRgba[j + 2]! * keep + b * opacity);
    out[j + 3] = 255;
  }
  return out;
}
