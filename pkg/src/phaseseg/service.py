"""Stateless HTTP facade over segmentation, evaluation, and threshold algebra.

Every response is a pure function of the request: images travel in each
multipart body, nothing is cached server-side.  Label maps are returned as
[label, run] pairs so JSON stays compact without binary framing.

Run directly (python -m phaseseg.service) or point uvicorn at
phaseseg.service:app.  Config comes from flags or environment:
PHASESEG_MAX_BODY_MIB caps upload size (default 16).
"""

from __future__ import annotations

import math
import os
import time
from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles

from .core import (
    AngleParams,
    parse_theta,
    segment_gray,
    segment_rgb_detailed,
    thresholds_from_theta,
)
from .experiments import run_sweep
from .baselines import kmeans_label_image, otsu_segment
from .imgio import DecodeError, MaskFormatError, decode_image, load_mask, to_gray
from .metrics import UndefinedMetricError, best_binary_assignment, count_segments

DEFAULT_MAX_BODY_MIB = 16


def rle_encode(labels: np.ndarray) -> list[list[int]]:
    """Row-major [label, run] pairs covering the whole map."""
    arr = np.asarray(labels).ravel()
    if arr.size == 0:
        return []
    starts = np.r_[0, np.flatnonzero(arr[1:] != arr[:-1]) + 1]
    lengths = np.diff(np.r_[starts, arr.size])
    return [[int(arr[s]), int(n)] for s, n in zip(starts, lengths)]


def rle_decode(pairs: list[list[int]]) -> np.ndarray:
    """Inverse of rle_encode, flat uint8 array."""
    if not pairs:
        return np.zeros(0, dtype=np.uint8)
    return np.repeat(
        np.array([p[0] for p in pairs], dtype=np.uint8),
        np.array([p[1] for p in pairs], dtype=np.int64),
    )


class _BodyLimit:
    """ASGI wrapper rejecting bodies over a byte budget with 413.

    Checks Content-Length up front and counts streamed bytes as a backstop,
    so a chunked upload cannot dodge the limit.
    """

    def __init__(self, app, max_bytes: int):
        self.app = app
        self.max_bytes = max_bytes

    async def __call__(self, scope, receive, send):
        if scope["type"] != "http":
            await self.app(scope, receive, send)
            return
        declared = None
        for name, value in scope.get("headers", []):
            if name == b"content-length":
                try:
                    declared = int(value)
                except ValueError:
                    pass
        if declared is not None and declared > self.max_bytes:
            await self._reject(send)
            return
        received = 0
        responded = False

        async def counting_receive():
            nonlocal received
            message = await receive()
            if message["type"] == "http.request":
                received += len(message.get("body", b""))
                if received > self.max_bytes:
                    raise _TooLarge()
            return message

        async def tracking_send(message):
            nonlocal responded
            responded = True
            await send(message)

        try:
            await self.app(scope, counting_receive, tracking_send)
        except _TooLarge:
            if not responded:
                await self._reject(send)

    @staticmethod
    async def _reject(send):
        response = JSONResponse({"detail": "request body too large"}, status_code=413)
        await response({"type": "http"}, None, send)


class _TooLarge(Exception):
    pass


def _bad_request(detail: str) -> HTTPException:
    return HTTPException(status_code=400, detail=detail)


def _parse_bool(text: str, field: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise _bad_request(f"{field} must be a boolean, got {text!r}")


def _parse_angle(form, field: str, default: str = "pi") -> float:
    raw = form.get(field, default)
    try:
        return parse_theta(str(raw))
    except ValueError as exc:
        raise _bad_request(f"{field}: {exc}") from exc


def _parse_int(form, field: str, default: int) -> int:
    raw = form.get(field)
    if raw is None:
        return default
    try:
        return int(str(raw))
    except ValueError as exc:
        raise _bad_request(f"{field} must be an integer, got {raw!r}") from exc


async def _read_upload(form, field: str) -> bytes:
    upload = form.get(field)
    if upload is None or isinstance(upload, str):
        raise _bad_request(f"missing multipart file field {field!r}")
    return await upload.read()


def _decode_rgb(data: bytes, field: str = "image") -> np.ndarray:
    try:
        return decode_image(data)
    except DecodeError as exc:
        raise _bad_request(f"{field}: {exc}") from exc


def _decode_mask(data: bytes) -> np.ndarray:
    try:
        return load_mask(data)
    except (DecodeError, MaskFormatError) as exc:
        raise _bad_request(f"mask: {exc}") from exc


def _gray_win_probabilities(gray: np.ndarray, theta: float) -> np.ndarray:
    p0 = 0.5 * (1.0 + np.cos(gray * theta))
    return np.maximum(p0, 1.0 - p0)


def _segment_with_probs(image, mode, params, normalize):
    if mode == "gray":
        gray = to_gray(image)
        labels = segment_gray(gray, params.theta1)
        win = _gray_win_probabilities(gray, params.theta1)
    else:
        labels, win = segment_rgb_detailed(image, params, normalize=normalize)
    return labels, win


def create_app(max_body_bytes: int | None = None, static_dir: str | None = None) -> FastAPI:
    if max_body_bytes is None:
        mib = float(os.environ.get("PHASESEG_MAX_BODY_MIB", DEFAULT_MAX_BODY_MIB))
        max_body_bytes = int(mib * 1024 * 1024)
    app = FastAPI(title="phaseseg", docs_url=None, redoc_url=None)

    @app.get("/healthz")
    async def healthz() -> PlainTextResponse:
        return PlainTextResponse("ok")

    @app.get("/api/thresholds")
    async def api_thresholds(theta: str) -> JSONResponse:
        try:
            value = parse_theta(theta)
            thresholds = thresholds_from_theta(value)
        except ValueError as exc:
            raise _bad_request(str(exc)) from exc
        return JSONResponse({"theta": value, "thresholds": list(thresholds)})

    @app.post("/api/segment")
    async def api_segment(request: Request) -> JSONResponse:
        form = await request.form()
        mode = str(form.get("mode", "rgb"))
        if mode not in ("rgb", "gray"):
            raise _bad_request(f"mode must be 'rgb' or 'gray', got {mode!r}")
        normalize = _parse_bool(str(form.get("normalize", "true")), "normalize")
        try:
            params = AngleParams(
                _parse_angle(form, "theta1"),
                _parse_angle(form, "theta2"),
                _parse_angle(form, "theta3"),
            )
        except ValueError as exc:
            raise _bad_request(str(exc)) from exc
        image = _decode_rgb(await _read_upload(form, "image"))
        start = time.perf_counter()
        labels, win = _segment_with_probs(image, mode, params, normalize)
        runtime_ms = (time.perf_counter() - start) * 1000.0
        values, counts = np.unique(labels, return_counts=True)
        summary = {
            str(int(v)): float(win[labels == v].mean()) for v in values
        }
        return JSONResponse(
            {
                "width": int(labels.shape[1]),
                "height": int(labels.shape[0]),
                "labels_rle": rle_encode(labels),
                "label_histogram": {str(int(v)): int(c) for v, c in zip(values, counts)},
                "segment_count": count_segments(labels),
                "probabilities_summary": summary,
                "runtime_ms": runtime_ms,
            }
        )

    @app.post("/api/evaluate")
    async def api_evaluate(request: Request) -> JSONResponse:
        form = await request.form()
        method = str(form.get("method", "iqft"))
        normalize = _parse_bool(str(form.get("normalize", "true")), "normalize")
        seed = _parse_int(form, "seed", 0)
        k = _parse_int(form, "k", 2)
        try:
            params = AngleParams(
                _parse_angle(form, "theta1"),
                _parse_angle(form, "theta2"),
                _parse_angle(form, "theta3"),
            )
        except ValueError as exc:
            raise _bad_request(str(exc)) from exc
        image = _decode_rgb(await _read_upload(form, "image"))
        mask = _decode_mask(await _read_upload(form, "mask"))
        start = time.perf_counter()
        if method == "iqft":
            labels, _ = _segment_with_probs(image, "rgb", params, normalize)
        elif method == "otsu":
            labels, _ = otsu_segment(to_gray(image))
        elif method == "kmeans":
            labels = kmeans_label_image(image, k=k, seed=seed)
        else:
            raise _bad_request(f"unknown method {method!r}")
        runtime_ms = (time.perf_counter() - start) * 1000.0
        try:
            report = best_binary_assignment(labels, mask, runtime_ms=runtime_ms)
        except (ValueError, UndefinedMetricError) as exc:
            raise _bad_request(str(exc)) from exc
        return JSONResponse(
            {
                "iou_fg": report.iou_fg,
                "iou_bg": report.iou_bg,
                "miou": report.miou,
                "assignment": {str(k_): v for k_, v in report.assignment.items()},
                "runtime_ms": report.runtime_ms,
            }
        )

    # GET keeps the query-style contract; POST exists because some clients
    # refuse multipart bodies on GET
    @app.api_route("/api/sweep", methods=["GET", "POST"])
    async def api_sweep(request: Request) -> JSONResponse:
        form = await request.form()
        raw_thetas = str(form.get("thetas", ""))
        try:
            thetas = [parse_theta(part) for part in raw_thetas.split(",") if part.strip()]
        except ValueError as exc:
            raise _bad_request(str(exc)) from exc
        if not thetas:
            raise _bad_request("thetas must be a non-empty comma-separated list")
        mode = str(form.get("mode", "rgb"))
        normalize = _parse_bool(str(form.get("normalize", "true")), "normalize")
        image = _decode_rgb(await _read_upload(form, "image"))
        mask = None
        if form.get("mask") is not None:
            mask = _decode_mask(await _read_upload(form, "mask"))
        try:
            report = run_sweep(image, thetas, mask=mask, mode=mode, normalize=normalize)
        except (ValueError, UndefinedMetricError) as exc:
            raise _bad_request(str(exc)) from exc
        return JSONResponse(
            {
                "rows": [
                    {
                        "theta": row.theta,
                        "segment_count": row.segment_count,
                        "miou": row.miou,
                    }
                    for row in report.rows
                ],
                "best_theta": report.best_theta,
            }
        )

    static_root = static_dir or os.environ.get("PHASESEG_STATIC")
    if static_root is None:
        bundled = Path(__file__).resolve().parent.parent.parent / "frontend" / "public"
        if bundled.is_dir():
            static_root = str(bundled)
    if static_root and Path(static_root).is_dir():
        app.mount("/", StaticFiles(directory=static_root, html=True), name="static")

    app.state.max_body_bytes = max_body_bytes
    app.add_middleware(_BodyLimit, max_bytes=max_body_bytes)
    return app


app = create_app()


def main(argv: list[str] | None = None) -> int:
    import argparse

    import uvicorn

    parser = argparse.ArgumentParser(prog="phaseseg-service")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8000)
    parser.add_argument("--max-body-mib", type=float, default=None,
                        help="upload cap in MiB (default 16)")
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--static", default=None, help="directory to serve at /")
    args = parser.parse_args(argv)
    if args.max_body_mib is not None:
        os.environ["PHASESEG_MAX_BODY_MIB"] = str(args.max_body_mib)
    if args.static is not None:
        os.environ["PHASESEG_STATIC"] = args.static
    uvicorn.run(
        "phaseseg.service:app",
        host=args.host,
        port=args.port,
        workers=args.workers,
    )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
