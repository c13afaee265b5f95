"""Interactive preview service for the scribble UI.

Sessions hold a gray plane in memory; clients upload scribbles and request
previews, which solve on a copy downscaled to at most 128 px on the longest
side (identity when the image is already small enough). Full-resolution
solves run as asynchronous per-session jobs with a queue of depth one: a
newer request supersedes anything still waiting, and a finished solve only
lands if no newer result has been stored (monotonic per-session counters).

JSON in, JSON out; PNG payloads are base64 strings. Configuration via
PORT, MAX_IMAGE_DIM and SESSION_TTL_SECONDS.
"""

from __future__ import annotations

import base64
import io
import os
import threading
import time
import uuid

import numpy as np
from fastapi import Body, FastAPI, HTTPException
from PIL import Image, UnidentifiedImageError

from .colorize import ColorizeParams, ScribbleSet, colorize, scribbles_from_json
from .colorspace import YUVImage, yuv_to_rgb
from .errors import EmptyScribblesError, SolverFailedError

PREVIEW_MAX_SIDE = 128
DEFAULT_MAX_IMAGE_DIM = 1024
DEFAULT_TTL_SECONDS = 1800.0
# previews trade solver tolerance for latency; chroma error ~1e-6 is far
# below the 1/255 quantization anyway
PREVIEW_TOL = 1e-6


def _decode_gray(png_b64: str) -> np.ndarray:
    try:
        raw = base64.b64decode(png_b64, validate=True)
        img = Image.open(io.BytesIO(raw))
        img.load()
    except (ValueError, UnidentifiedImageError, OSError):
        raise HTTPException(status_code=400, detail="payload is not a decodable image")
    if img.format not in ("PNG", "JPEG"):
        raise HTTPException(status_code=400, detail=f"unsupported format {img.format}")
    arr = np.asarray(img.convert("RGB"), dtype=np.float64) / 255.0
    return 0.299 * arr[:, :, 0] + 0.587 * arr[:, :, 1] + 0.114 * arr[:, :, 2]


def _encode_png(y: np.ndarray, u: np.ndarray, v: np.ndarray) -> str:
    rgb = yuv_to_rgb(YUVImage(y, u, v))
    stacked = np.clip(np.stack([rgb.r, rgb.g, rgb.b], axis=-1), 0.0, 1.0)
    img = Image.fromarray(np.floor(stacked * 255.0 + 0.5).astype(np.uint8), mode="RGB")
    buf = io.BytesIO()
    img.save(buf, format="PNG")
    return base64.b64encode(buf.getvalue()).decode("ascii")


def _downscale_map(full: int, small: int) -> np.ndarray:
    """Representative full-res index for each downscaled coordinate."""
    return np.minimum((np.floor((np.arange(small) + 0.5) * full / small)).astype(int), full - 1)


def _upscale_map(full: int, small: int) -> np.ndarray:
    return np.minimum((np.arange(full) * small // full).astype(int), small - 1)


class Session:
    def __init__(self, y: np.ndarray):
        self.id = uuid.uuid4().hex
        self.y = y
        self.height, self.width = y.shape
        self.scribbles: ScribbleSet | None = None
        self.lock = threading.Lock()  # guards the mutable fields below
        self.solve_lock = threading.Lock()  # one solve in flight per session
        self.seq = 0  # monotonic request counter
        self.result_seq = -1
        self.result: dict | None = None
        self.pending: tuple[int, str] | None = None
        self.worker: threading.Thread | None = None
        self.touched = time.time()

    def touch(self):
        self.touched = time.time()


class SessionRegistry:
    def __init__(self, ttl_seconds: float):
        self.ttl = ttl_seconds
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def add(self, session: Session):
        with self._lock:
            self._evict_locked()
            self._sessions[session.id] = session

    def get(self, session_id: str) -> Session:
        with self._lock:
            self._evict_locked()
            session = self._sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail="unknown session")
        session.touch()
        return session

    def _evict_locked(self):
        cutoff = time.time() - self.ttl
        stale = [sid for sid, s in self._sessions.items() if s.touched < cutoff]
        for sid in stale:
            del self._sessions[sid]


def _map_scribbles(scribbles: ScribbleSet, w: int, h: int, ws: int, hs: int):
    """Nearest-neighbor site mapping; first site per downscaled pixel wins."""
    seen: dict[int, tuple[float, float]] = {}
    collisions = 0
    for i, u, v in scribbles.sites:
        y, x = divmod(i, w)
        small = (y * hs // h) * ws + (x * ws // w)
        if small in seen:
            collisions += 1
        else:
            seen[small] = (u, v)
    sites = [(idx, uv[0], uv[1]) for idx, uv in sorted(seen.items())]
    return ScribbleSet(sites, exact=scribbles.exact), collisions


def _solve(session: Session, method: str, full: bool):
    """Run one solve; returns the result payload dict."""
    scribbles = session.scribbles
    h, w = session.y.shape
    t0 = time.perf_counter()
    collisions = 0
    if full or max(w, h) <= PREVIEW_MAX_SIDE:
        params = ColorizeParams(method=method, tol=1e-8 if full else PREVIEW_TOL)
        res = colorize(session.y, scribbles, params)
        u, v = res.u, res.v
        scale = 1.0
    else:
        scale = PREVIEW_MAX_SIDE / max(w, h)
        ws, hs = max(1, round(w * scale)), max(1, round(h * scale))
        ys = session.y[np.ix_(_downscale_map(h, hs), _downscale_map(w, ws))]
        small_scribbles, collisions = _map_scribbles(scribbles, w, h, ws, hs)
        params = ColorizeParams(method=method, tol=PREVIEW_TOL)
        res = colorize(ys, small_scribbles, params)
        u = res.u[np.ix_(_upscale_map(h, hs), _upscale_map(w, ws))]
        v = res.v[np.ix_(_upscale_map(h, hs), _upscale_map(w, ws))]
    return {
        "png": _encode_png(session.y, u, v),
        "metrics": {
            "method": method,
            "full": full,
            "scale": scale,
            "j1_u": res.objective_u,
            "j1_v": res.objective_v,
            "iterations": [res.iterations_u, res.iterations_v],
            "seconds": time.perf_counter() - t0,
            "collisions": collisions,
        },
    }


def create_app(max_image_dim: int | None = None, ttl_seconds: float | None = None) -> FastAPI:
    if max_image_dim is None:
        max_image_dim = int(os.environ.get("MAX_IMAGE_DIM", DEFAULT_MAX_IMAGE_DIM))
    if ttl_seconds is None:
        ttl_seconds = float(os.environ.get("SESSION_TTL_SECONDS", DEFAULT_TTL_SECONDS))
    app = FastAPI(title="l1color preview service")
    registry = SessionRegistry(ttl_seconds)

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.post("/sessions")
    def create_session(payload: dict = Body(...)):
        if "image" not in payload:
            raise HTTPException(status_code=400, detail="missing 'image' field")
        y = _decode_gray(payload["image"])
        h, w = y.shape
        if max(h, w) > max_image_dim:
            raise HTTPException(
                status_code=413,
                detail=f"image {w}x{h} exceeds the {max_image_dim}px limit",
            )
        session = Session(y)
        registry.add(session)
        return {"id": session.id, "width": w, "height": h}

    @app.put("/sessions/{session_id}/scribbles", status_code=202)
    def put_scribbles(session_id: str, payload: dict = Body(...)):
        session = registry.get(session_id)
        try:
            scribbles = scribbles_from_json(payload, session.width, session.height)
        except (EmptyScribblesError, ValueError, IndexError, KeyError, TypeError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        with session.lock:
            session.scribbles = scribbles
            # a new scribble set invalidates anything cached or queued
            session.result = None
            session.result_seq = session.seq
            session.pending = None
        return {"accepted": True, "sites": len(scribbles.sites)}

    def _store(session: Session, req_id: int, result: dict, status: str):
        with session.lock:
            if req_id > session.result_seq:
                session.result_seq = req_id
                session.result = {"status": status, **result}

    def _worker(session: Session):
        while True:
            with session.lock:
                job = session.pending
                session.pending = None
                if job is None:
                    # exit decision and spawn decision share this lock, so an
                    # enqueue either sees worker=None or a live loop
                    session.worker = None
                    return
            req_id, method = job
            try:
                with session.solve_lock:
                    payload = _solve(session, method, full=True)
                _store(session, req_id, payload, "done")
            except SolverFailedError as exc:
                _store(session, req_id, {"error": str(exc), "solver_status": exc.status}, "failed")
            except Exception as exc:  # defensive: a worker must never die silently
                _store(session, req_id, {"error": str(exc)}, "failed")

    @app.post("/sessions/{session_id}/preview")
    def compute_preview(session_id: str, method: str = "l1", full: bool = False):
        session = registry.get(session_id)
        if method not in ("l1", "l2"):
            raise HTTPException(status_code=422, detail="method must be l1 or l2")
        with session.lock:
            if session.scribbles is None:
                raise HTTPException(status_code=409, detail="no scribbles for this session")
            session.seq += 1
            req_id = session.seq
        if full:
            with session.lock:
                session.pending = (req_id, method)
                if session.worker is None:
                    session.worker = threading.Thread(
                        target=_worker, args=(session,), daemon=True
                    )
                    session.worker.start()
            return {"status": "pending", "request": req_id}
        try:
            with session.solve_lock:
                payload = _solve(session, method, full=False)
        except SolverFailedError as exc:
            raise HTTPException(
                status_code=500,
                detail={"error": str(exc), "solver_status": exc.status},
            )
        _store(session, req_id, payload, "done")
        return {"status": "done", "request": req_id, **payload}

    @app.get("/sessions/{session_id}/result")
    def get_result(session_id: str):
        session = registry.get(session_id)
        with session.lock:
            busy = session.pending is not None or session.worker is not None
            result = session.result
        if result is not None:
            out = dict(result)
            if busy:
                out["refreshing"] = True
            return out
        return {"status": "pending" if busy else "none"}

    return app
