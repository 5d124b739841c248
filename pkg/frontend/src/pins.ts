/**
 * Pinned theta snapshots and their comparison.
 *
 * A pin freezes the full state of one segmentation: the angle units, the
 * service response, and the mIOU when a mask was present. Pins are
 * immutable once created so the comparison panel always shows what the
 * user actually saw, not what the sliders say now.
 */

import type { SegmentResponse } from './api.js';

export interface Pin {
  /** Slider positions at pin time, in pi/64 units. */
  readonly thetaUnits: readonly [number, number, number];
  readonly mode: 'rgb' | 'gray';
  readonly response: SegmentResponse;
  /** Present only when the session has a ground-truth mask. */
  readonly miou: number | null;
}

function deepFreeze<T>(value: T): T {
  if (value !== null && typeof value === 'object') {
    for (const key of Object.getOwnPropertyNames(value)) {
      deepFreeze((value as Record<string, unknown>)[key]);
    }
    Object.freeze(value);
  }
  return value;
}

/** Build an immutable snapshot of the current segmentation state. */
export function createPin(
  thetaUnits: readonly [number, number, number],
  mode: 'rgb' | 'gray',
  response: SegmentResponse,
  miou: number | null,
): Pin {
  return deepFreeze({
    thetaUnits: [thetaUnits[0], thetaUnits[1], thetaUnits[2]] as const,
    mode,
    response: structuredClone(response) as SegmentResponse,
    miou,
  });
}

/** Comparison needs at least two pins to say anything. */
export function canCompare(pins: readonly Pin[]): boolean {
  return pins.length >= 2;
}

/** True when any pin carries an mIOU, i.e. the column should render. */
export function hasMiouColumn(pins: readonly Pin[]): boolean {
  return pins.some((pin) => pin.miou !== null);
}

/**
 * Index of the pin with the strictly largest mIOU, or null when no pin
 * has one or the best value is tied. Ties get no highlight: a highlight
 * asserts "this setting won", which a tie does not support.
 */
export function bestPinIndex(pins: readonly Pin[]): number | null {
  let best: number | null = null;
  let bestValue = -Infinity;
  let tied = false;
  for (let i = 0; i < pins.length; i++) {
    const miou = pins[i]!.miou;
    if (miou === null) continue;
    if (miou > bestValue) {
      bestValue = miou;
      best = i;
      tied = false;
    } else if (miou === bestValue) {
      tied = true;
    }
  }
  return tied ? null : best;
}
