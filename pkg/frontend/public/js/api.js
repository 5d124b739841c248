/**
 * Thin typed client for the segmentation service.
 *
 * Every call takes the fetch function as an argument so tests can inject
 * a fake; nothing here touches global state. The client never computes
 * labels itself: all segmentation output comes from the service.
 */
/** Non-2xx response, carrying the service's detail message. */
export class ApiError extends Error {
    constructor(status, detail) {
        super(detail);
        this.status = status;
        this.name = 'ApiError';
    }
}
async function raiseForStatus(response) {
    if (response.ok)
        return;
    let detail = `HTTP ${response.status}`;
    try {
        const body = (await response.json());
        if (typeof body.detail === 'string')
            detail = body.detail;
    }
    catch {
        // non-JSON error body; keep the status line
    }
    throw new ApiError(response.status, detail);
}
export async function postSegment(fetchFn, request) {
    const form = new FormData();
    form.append('image', request.image, 'image.png');
    form.append('mode', request.mode);
    form.append('theta1', request.theta[0]);
    form.append('theta2', request.theta[1]);
    form.append('theta3', request.theta[2]);
    if (request.normalize === false)
        form.append('normalize', 'false');
    const response = await fetchFn('/api/segment', { method: 'POST', body: form });
    await raiseForStatus(response);
    return (await response.json());
}
export async function postEvaluate(fetchFn, request) {
    const form = new FormData();
    form.append('image', request.image, 'image.png');
    form.append('mask', request.mask, 'mask.png');
    form.append('method', 'iqft');
    form.append('theta1', request.theta[0]);
    form.append('theta2', request.theta[1]);
    form.append('theta3', request.theta[2]);
    const response = await fetchFn('/api/evaluate', { method: 'POST', body: form });
    await raiseForStatus(response);
    return (await response.json());
}
export async function getThresholds(fetchFn, theta) {
    const response = await fetchFn(`/api/thresholds?theta=${encodeURIComponent(theta)}`);
    await raiseForStatus(response);
    return (await response.json());
}
