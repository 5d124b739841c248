import { describe, expect, test } from 'vitest';

import { decodeRle, RleLengthError } from '../src/rle.js';

describe('decodeRle', () => {
  test('expands a known stream', () => {
    const labels = decodeRle([[0, 2], [1, 3], [0, 1]], 6);
    expect(Array.from(labels)).toEqual([0, 0, 1, 1, 1, 0]);
  });

  test('empty stream decodes an empty image', () => {
    expect(decodeRle([], 0).length).toBe(0);
  });

  test('single run filling the image', () => {
    const labels = decodeRle([[7, 12]], 12);
    expect(new Set(labels)).toEqual(new Set([7]));
  });

  test('rejects runs that fall short', () => {
    expect(() => decodeRle([[0, 5]], 6)).toThrow(RleLengthError);
  });

  test('rejects runs that overflow', () => {
    expect(() => decodeRle([[0, 4], [1, 4]], 6)).toThrow(RleLengthError);
  });

  test('rejects non-positive runs', () => {
    expect(() => decodeRle([[0, 0]], 0)).toThrow(RleLengthError);
    expect(() => decodeRle([[0, -3]], 0)).toThrow(RleLengthError);
  });

  test('rejects malformed pairs', () => {
    expect(() => decodeRle([[0]], 1)).toThrow(RleLengthError);
    expect(() => decodeRle([[0, 1, 2]], 1)).toThrow(RleLengthError);
  });

  test('rejects labels outside one byte', () => {
    expect(() => decodeRle([[256, 1]], 1)).toThrow(RleLengthError);
    expect(() => decodeRle([[-1, 1]], 1)).toThrow(RleLengthError);
    expect(() => decodeRle([[0.5, 2]], 2)).toThrow(RleLengthError);
  });

  test('roundtrips against a reference encoder on random label rows', () => {
    const encode = (labels: number[]): number[][] => {
      const pairs: number[][] = [];
      for (const label of labels) {
        const last = pairs[pairs.length - 1];
        if (last !== undefined && last[0] === label) {
          last[1]! += 1;
        } else {
          pairs.push([label, 1]);
        }
      }
      return pairs;
    };
    let seed = 12345;
    const nextLabel = () => {
      seed = (seed * 1103515245 + 12345) % 2147483648;
      return seed % 4;
    };
    for (let round = 0; round < 50; round++) {
      const labels = Array.from({ length: 200 }, nextLabel);
      const decoded = decodeRle(encode(labels), labels.length);
      expect(Array.from(decoded)).toEqual(labels);
    }
  });
});
