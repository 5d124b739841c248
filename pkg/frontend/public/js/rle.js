/**
 * Decoder for the run-length encoded label maps the service returns.
 *
 * The wire format is a list of [label, run] pairs in row-major order.
 * Decoding is strict: the runs must tile the image exactly, because a
 * mismatched overlay silently painted over the wrong pixels is worse
 * than no overlay at all.
 */
/** Raised when an RLE stream does not match the expected pixel count. */
export class RleLengthError extends Error {
    constructor(message) {
        super(message);
        this.name = 'RleLengthError';
    }
}
/**
 * Expand [label, run] pairs into a flat label array of exactly
 * expectedLength entries.
 */
export function decodeRle(pairs, expectedLength) {
    const out = new Uint8Array(expectedLength);
    let offset = 0;
    for (const pair of pairs) {
        if (pair.length !== 2) {
            throw new RleLengthError(`expected [label, run] pair, got ${JSON.stringify(pair)}`);
        }
        const label = pair[0];
        const run = pair[1];
        if (!Number.isInteger(label) || label < 0 || label > 255) {
            throw new RleLengthError(`label out of range: ${label}`);
        }
        if (!Number.isInteger(run) || run <= 0) {
            throw new RleLengthError(`run must be a positive integer, got ${run}`);
        }
        if (offset + run > expectedLength) {
            throw new RleLengthError(`runs cover ${offset + run} pixels, expected ${expectedLength}`);
        }
        out.fill(label, offset, offset + run);
        offset += run;
    }
    if (offset !== expectedLength) {
        throw new RleLengthError(`runs cover ${offset} pixels, expected ${expectedLength}`);
    }
    return out;
}
