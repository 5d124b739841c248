/**
 * Fixed label palette, identical to the one the segmentation service and
 * CLI use for rendered label maps. Keeping the colors in lockstep means an
 * overlay screenshot and a CLI-rendered PNG agree pixel for pixel, and the
 * mapping from displayed color back to label index stays bijective.
 */

export type Rgb = readonly [number, number, number];

export const LABEL_PALETTE: readonly Rgb[] = [
  [0, 0, 0],
  [230, 25, 75],
  [60, 180, 75],
  [255, 225, 25],
  [0, 130, 200],
  [245, 130, 48],
  [145, 30, 180],
  [255, 255, 255],
];

/** Color for a label index; throws on indices outside the palette. */
export function labelColor(label: number): Rgb {
  const color = LABEL_PALETTE[label];
  if (color === undefined) {
    throw new RangeError(`label ${label} outside palette of ${LABEL_PALETTE.length}`);
  }
  return color;
}

/** Inverse lookup; null for colors that are not palette entries. */
export function colorToLabel(r: number, g: number, b: number): number | null {
  for (let i = 0; i < LABEL_PALETTE.length; i++) {
    const entry = LABEL_PALETTE[i]!;
    if (entry[0] === r && entry[1] === g && entry[2] === b) return i;
  }
  return null;
}

/** CSS color string for a label index. */
export function labelCss(label: number): string {
  const [r, g, b] = labelColor(label);
  return `rgb(${r}, ${g}, ${b})`;
}
