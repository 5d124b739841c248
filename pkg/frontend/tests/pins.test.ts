import { describe, expect, test } from 'vitest';

import type { SegmentResponse } from '../src/api.js';
import { bestPinIndex, canCompare, createPin, hasMiouColumn } from '../src/pins.js';

function response(segments: number): SegmentResponse {
  return {
    width: 2,
    height: 2,
    labels_rle: [[0, 4]],
    label_histogram: { '0': 4 },
    segment_count: segments,
    probabilities_summary: { '0': 0.9 },
    runtime_ms: 1.5,
  };
}

describe('createPin', () => {
  test('pins are frozen snapshots', () => {
    const pin = createPin([64, 64, 64], 'rgb', response(2), 0.8);
    expect(Object.isFrozen(pin)).toBe(true);
    expect(Object.isFrozen(pin.response)).toBe(true);
    expect(Object.isFrozen(pin.thetaUnits)).toBe(true);
    expect(() => {
      (pin as { miou: number | null }).miou = 0;
    }).toThrow(TypeError);
    expect(() => {
      pin.response.label_histogram['0'] = 0;
    }).toThrow(TypeError);
  });

  test('pinning copies the response instead of aliasing it', () => {
    const live = response(2);
    const pin = createPin([48, 64, 80], 'rgb', live, null);
    live.segment_count = 99;
    live.label_histogram['0'] = 0;
    expect(pin.response.segment_count).toBe(2);
    expect(pin.response.label_histogram['0']).toBe(4);
  });
});

describe('comparison', () => {
  test('needs at least two pins', () => {
    const one = [createPin([64, 64, 64], 'rgb', response(2), 0.5)];
    expect(canCompare(one)).toBe(false);
    expect(canCompare([...one, ...one])).toBe(true);
  });

  test('highlights the strictly larger miou on a mask-bearing image', () => {
    const pins = [
      createPin([64, 64, 64], 'rgb', response(2), 0.25),
      createPin([48, 48, 48], 'rgb', response(2), 1.0),
    ];
    expect(hasMiouColumn(pins)).toBe(true);
    expect(bestPinIndex(pins)).toBe(1);
  });

  test('tied best values get no highlight', () => {
    const pins = [
      createPin([64, 64, 64], 'rgb', response(2), 0.7),
      createPin([48, 48, 48], 'rgb', response(3), 0.7),
      createPin([32, 32, 32], 'rgb', response(4), 0.1),
    ];
    expect(bestPinIndex(pins)).toBeNull();
  });

  test('without a mask the miou column is absent and nothing is highlighted', () => {
    const pins = [
      createPin([64, 64, 64], 'rgb', response(2), null),
      createPin([48, 48, 48], 'rgb', response(3), null),
    ];
    expect(hasMiouColumn(pins)).toBe(false);
    expect(bestPinIndex(pins)).toBeNull();
  });

  test('duplicate theta pins are both kept with identical values', () => {
    const pins = [
      createPin([64, 64, 64], 'rgb', response(2), 0.5),
      createPin([64, 64, 64], 'rgb', response(2), 0.5),
    ];
    expect(pins.length).toBe(2);
    expect(pins[0]!.thetaUnits).toEqual(pins[1]!.thetaUnits);
    expect(pins[0]!.miou).toBe(pins[1]!.miou);
    expect(bestPinIndex(pins)).toBeNull();
  });

  test('pins lacking miou are skipped when finding the best', () => {
    const pins = [
      createPin([64, 64, 64], 'rgb', response(2), null),
      createPin([48, 48, 48], 'rgb', response(2), 0.4),
    ];
    expect(bestPinIndex(pins)).toBe(1);
  });
});
