/**
 * Thin typed client for the segmentation service.
 *
 * Every call takes the fetch function as an argument so tests can inject
 * a fake; nothing here touches global state. The client never computes
 * labels itself: all segmentation output comes from the service.
 */

export interface SegmentResponse {
  width: number;
  height: number;
  labels_rle: number[][];
  label_histogram: Record<string, number>;
  segment_count: number;
  probabilities_summary: Record<string, number>;
  runtime_ms: number;
}

export interface EvaluateResponse {
  iou_fg: number;
  iou_bg: number;
  miou: number;
  assignment: Record<string, number>;
  runtime_ms: number;
}

export interface ThresholdsResponse {
  theta: number;
  thresholds: number[];
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** Non-2xx response, carrying the service's detail message. */
export class ApiError extends Error {
  constructor(
    public readonly status: number,
    detail: string,
  ) {
    super(detail);
    this.name = 'ApiError';
  }
}

async function raiseForStatus(response: Response): Promise<void> {
  if (response.ok) return;
  let detail = `HTTP ${response.status}`;
  try {
    const body = (await response.json()) as { detail?: unknown };
    if (typeof body.detail === 'string') detail = body.detail;
  } catch {
    // non-JSON error body; keep the status line
  }
  throw new ApiError(response.status, detail);
}

export interface SegmentRequest {
  image: Blob;
  mode: 'rgb' | 'gray';
  /** Angle strings in the service grammar, e.g. "0.75pi". */
  theta: readonly [string, string, string];
  normalize?: boolean;
}

export async function postSegment(
  fetchFn: FetchLike,
  request: SegmentRequest,
): Promise<SegmentResponse> {
  const form = new FormData();
  form.append('image', request.image, 'image.png');
  form.append('mode', request.mode);
  form.append('theta1', request.theta[0]);
  form.append('theta2', request.theta[1]);
  form.append('theta3', request.theta[2]);
  if (request.normalize === false) form.append('normalize', 'false');
  const response = await fetchFn('/api/segment', { method: 'POST', body: form });
  await raiseForStatus(response);
  return (await response.json()) as SegmentResponse;
}

export interface EvaluateRequest {
  image: Blob;
  mask: Blob;
  theta: readonly [string, string, string];
}

export async function postEvaluate(
  fetchFn: FetchLike,
  request: EvaluateRequest,
): Promise<EvaluateResponse> {
  const form = new FormData();
  form.append('image', request.image, 'image.png');
  form.append('mask', request.mask, 'mask.png');
  form.append('method', 'iqft');
  form.append('theta1', request.theta[0]);
  form.append('theta2', request.theta[1]);
  form.append('theta3', request.theta[2]);
  const response = await fetchFn('/api/evaluate', { method: 'POST', body: form });
  await raiseForStatus(response);
  return (await response.json()) as EvaluateResponse;
}

export async function getThresholds(
  fetchFn: FetchLike,
  theta: string,
): Promise<ThresholdsResponse> {
  const response = await fetchFn(`/api/thresholds?theta=${encodeURIComponent(theta)}`);
  await raiseForStatus(response);
  return (await response.json()) as ThresholdsResponse;
}
