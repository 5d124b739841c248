/**
 * Request scheduling for slider-driven fetches.
 *
 * Three rules, in priority order:
 *   1. at most one request in flight;
 *   2. rapid parameter changes coalesce, and only the latest pending
 *      value is ever sent;
 *   3. a response is applied only if no newer response has been applied
 *      (monotonic sequence guard).
 *
 * Rule 3 cannot trigger while rule 1 holds, but it is kept as an explicit
 * guard so reordering bugs introduced later fail loudly instead of
 * painting a stale overlay.
 */
/** Monotonic acceptance gate: accept(n) succeeds only for ascending n. */
export class SequenceGate {
    constructor() {
        this.issued = 0;
        this.accepted = 0;
    }
    /** Reserve the next sequence number. */
    claim() {
        this.issued += 1;
        return this.issued;
    }
    /** True (and remembered) if seq is newer than everything accepted so far. */
    accept(seq) {
        if (seq <= this.accepted)
            return false;
        this.accepted = seq;
        return true;
    }
}
export class RequestScheduler {
    constructor(fetcher, callbacks, debounceMs = 150) {
        this.fetcher = fetcher;
        this.callbacks = callbacks;
        this.debounceMs = debounceMs;
        this.gate = new SequenceGate();
        this.pending = null;
        this.inFlight = false;
        this.timer = null;
        this.lastFailed = null;
        this.requestCount = 0;
    }
    /** Total requests handed to the fetcher, for instrumentation. */
    get requestsIssued() {
        return this.requestCount;
    }
    /** Record params as the latest desired state and restart the quiet timer. */
    schedule(params) {
        this.pending = params;
        this.lastFailed = null;
        if (this.timer !== null)
            clearTimeout(this.timer);
        this.timer = setTimeout(() => {
            this.timer = null;
            this.dispatchIfIdle();
        }, this.debounceMs);
    }
    /** Re-dispatch the params of the last failed request, immediately. */
    retry() {
        if (this.lastFailed === null)
            return;
        this.pending = this.lastFailed;
        this.lastFailed = null;
        this.dispatchIfIdle();
    }
    dispatchIfIdle() {
        if (this.inFlight || this.pending === null)
            return;
        const params = this.pending;
        this.pending = null;
        this.inFlight = true;
        this.requestCount += 1;
        const seq = this.gate.claim();
        this.fetcher(params).then((result) => {
            this.settle(() => {
                if (this.gate.accept(seq))
                    this.callbacks.onResult(params, result);
            });
        }, (error) => {
            this.settle(() => {
                this.lastFailed = params;
                this.callbacks.onError(params, error);
            });
        });
    }
    settle(apply) {
        this.inFlight = false;
        apply();
        // A timer still ticking means the user is mid-drag; let it coalesce.
        if (this.timer === null)
            this.dispatchIfIdle();
    }
}
