/**
 * Slider arithmetic for the theta controls.
 *
 * Sliders move in integer units of pi/64 so the reference angles
 * (pi/4, pi/2, ..., 2pi, 4pi) are exactly reachable: unit counts are
 * integers and dividing Math.PI by a power of two is exact, so
 * unitsToRadians(16) === Math.PI / 4 bit for bit.
 */
/** Slider units per pi. */
export const UNITS_PER_PI = 64;
/** Upper slider bound, 4pi in units. */
export const MAX_UNITS = 4 * UNITS_PER_PI;
/** Angles the sliders snap to, in units: pi/4 steps up to 2pi, then 4pi. */
export const SNAP_UNITS = [
    16, 32, 48, 64, 80, 96, 112, 128, 256,
];
/** Snap when the thumb lands within this many units of a snap point. */
export const SNAP_RADIUS = 2;
/** Convert slider units to radians. */
export function unitsToRadians(units) {
    return (units / UNITS_PER_PI) * Math.PI;
}
/** Convert slider units to a pi multiple (units 48 -> 0.75). */
export function unitsToPiMultiple(units) {
    return units / UNITS_PER_PI;
}
/**
 * Clamp to [0, MAX_UNITS], round to the unit grid, and pull onto the
 * nearest snap point when within SNAP_RADIUS of one.
 */
export function snapUnits(raw) {
    let units = Math.round(raw);
    if (units < 0)
        units = 0;
    if (units > MAX_UNITS)
        units = MAX_UNITS;
    for (const snap of SNAP_UNITS) {
        if (Math.abs(units - snap) <= SNAP_RADIUS)
            return snap;
    }
    return units;
}
/**
 * Angle string for API requests, e.g. units 48 -> "0.75pi".
 *
 * Unit counts are 1/64 multiples of pi, so the decimal form is exact and
 * the service reconstructs the identical double.
 */
export function thetaParam(units) {
    return `${unitsToPiMultiple(units)}pi`;
}
/** Human-readable form with 4 significant digits, e.g. "0.75π". */
export function formatTheta(units) {
    const multiple = unitsToPiMultiple(units);
    return `${Number(multiple.toPrecision(4))}π`;
}
