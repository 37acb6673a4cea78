"""Local HTTP service exposing recognition and stage-by-stage inspection.

Endpoints (JSON over HTTP/1.1):

- ``POST /api/recognize`` — run the full pipeline on an unlabeled stroke set
  and return the prediction plus per-stroke critical points, token ranges,
  and per-token features. 400 for a malformed body, 422 for degenerate ink
  (no strokes, or a stroke with fewer than 2 distinct points), 503 when no
  model is loaded.
- ``GET /api/model`` — the loaded manifest (clusters, labels, layer sizes).
- ``GET /api/health`` — ``{"status": "ok"}``; 503 before a model is loaded.
- ``POST /api/echo`` — parse and return the strokes unchanged, for clients
  verifying coordinate conventions round-trip.

The loaded recognizer is immutable and shared across requests; no request
mutates service state, so identical bodies yield identical responses.
"""

from __future__ import annotations

import json
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .ink import InkPoint, InkSample, Stroke, UNLABELED, dedup_points
from .pipeline import PipelineConfig, Recognizer, analyze_sample, load_recognizer

LOCALHOST_ORIGIN_REGEX = r"^https?://(localhost|127\.0\.0\.1)(:\d+)?$"


class _BadBody(ValueError):
    """Request body is not a well-formed recognize request."""


class _DegenerateInk(ValueError):
    """Body parsed, but the ink cannot form valid strokes."""


def _reject_constant(name: str):
    raise _BadBody(f"non-finite JSON constant {name!r} not allowed")


def _parse_strokes(body: bytes) -> list[Stroke]:
    try:
        payload = json.loads(body, parse_constant=_reject_constant)
    except _BadBody:
        raise
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise _BadBody(f"body is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict) or "strokes" not in payload:
        raise _BadBody('body must be a JSON object with a "strokes" array')
    raw_strokes = payload["strokes"]
    if not isinstance(raw_strokes, list):
        raise _BadBody('"strokes" must be an array of point arrays')
    if not raw_strokes:
        raise _DegenerateInk("empty strokes array")
    strokes = []
    for i, raw in enumerate(raw_strokes):
        if not isinstance(raw, list):
            raise _BadBody(f"stroke {i} is not an array")
        points = []
        for j, pt in enumerate(raw):
            if (
                not isinstance(pt, list)
                or len(pt) not in (2, 3)
                or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in pt)
            ):
                raise _BadBody(f"stroke {i} point {j} must be [x, y] or [x, y, t] numbers")
            points.append(InkPoint(*(float(v) for v in pt)))
        kept, _ = dedup_points(points)
        if len(kept) < 2:
            raise _DegenerateInk(f"stroke {i} has fewer than 2 distinct points")
        try:
            strokes.append(Stroke(tuple(kept)))
        except ValueError as exc:
            raise _DegenerateInk(f"stroke {i}: {exc}") from exc
    return strokes


def _stroke_report(seg) -> dict:
    return {
        "stroke": seg.stroke_index,
        "direction": seg.direction.value.value,
        "critical_points": [
            {"index": cp.point_index, "kind": cp.kind.value} for cp in seg.critical_points
        ],
        "tokens": [[t.start, t.end] for t in seg.tokens],
    }


def _feature_report(analysis) -> list[dict]:
    rows = []
    features = iter(analysis.token_features)
    for seg in analysis.segmentations:
        for t_i, token in enumerate(seg.tokens):
            tf = next(features)
            rows.append(
                {
                    "stroke": seg.stroke_index,
                    "token": t_i,
                    "start": token.start,
                    "end": token.end,
                    "ratio_pct": tf.length_ratio_pct,
                    "category": tf.length_category.value,
                    "direction_deg": tf.direction_deg,
                    "midpoint": list(tf.midpoint),
                    "orientation": tf.orientation.value,
                }
            )
    return rows


def create_app(
    models_dir: str | Path | None = None, config: PipelineConfig | None = None
) -> FastAPI:
    """Build the app; when models_dir is given, load the recognizer from it."""
    recognizer: Recognizer | None = None
    if models_dir is not None:
        recognizer = load_recognizer(models_dir)
        config = recognizer.config
    if config is None:
        config = PipelineConfig()

    app = FastAPI(title="strokekit", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origin_regex=LOCALHOST_ORIGIN_REGEX,
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.recognizer = recognizer
    app.state.config = config

    def _no_model() -> JSONResponse:
        return JSONResponse({"detail": "no model loaded"}, status_code=503)

    @app.get("/api/health")
    def health():
        if app.state.recognizer is None:
            return _no_model()
        return {"status": "ok"}

    @app.get("/api/model")
    def model():
        rec: Recognizer | None = app.state.recognizer
        if rec is None:
            return _no_model()
        return {
            "clusters": {
                str(cid): {
                    "class_labels": list(m.class_labels),
                    "layer_sizes": list(m.layer_sizes),
                }
                for cid, m in sorted(rec.models.items())
            },
            "config": rec.config.to_jsonable(),
        }

    @app.post("/api/echo")
    async def echo(request: Request):
        try:
            strokes = _parse_strokes(await request.body())
        except _DegenerateInk as exc:
            return JSONResponse({"detail": str(exc)}, status_code=422)
        except _BadBody as exc:
            return JSONResponse({"detail": str(exc)}, status_code=400)
        return {
            "strokes": [
                [[p.x, p.y] if p.t is None else [p.x, p.y, p.t] for p in s.points]
                for s in strokes
            ]
        }

    @app.post("/api/recognize")
    async def recognize(request: Request):
        rec: Recognizer | None = app.state.recognizer
        if rec is None:
            return _no_model()
        try:
            strokes = _parse_strokes(await request.body())
        except _DegenerateInk as exc:
            return JSONResponse({"detail": str(exc)}, status_code=422)
        except _BadBody as exc:
            return JSONResponse({"detail": str(exc)}, status_code=400)
        sample = InkSample(UNLABELED, tuple(strokes))
        analysis = analyze_sample(sample, app.state.config)
        try:
            pred = rec.predict_analyzed(analysis)
        except ValueError as exc:
            return JSONResponse({"detail": str(exc)}, status_code=422)
        return {
            "label": pred.label,
            "confidence": pred.confidence,
            "cluster_id": pred.cluster_id,
            "scores": {
                label: float(s) for label, s in zip(pred.class_labels, pred.scores)
            },
            "strokes": [_stroke_report(seg) for seg in analysis.segmentations],
            "features": _feature_report(analysis),
        }

    return app
