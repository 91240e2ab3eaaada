"""Read-only HTTP service over processed video directories.

Serves the stored manifests byte-for-byte, the media files they reference
(with HTTP range support so players can seek), and per-video keyword search.
Only paths listed in a manifest are ever read; ids and relative paths are
validated before any filesystem access.  State is an immutable manifest
cache loaded at startup, so the service can be restarted or replicated
freely.
"""

from __future__ import annotations

import logging
import mimetypes
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from fastapi import FastAPI, HTTPException, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.staticfiles import StaticFiles

from . import catalog
from .errors import CatalogError

logger = logging.getLogger(__name__)

_VIDEO_ID_RE = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._-]*$")
_RANGE_RE = re.compile(r"^bytes=(\d*)-(\d*)$")

mimetypes.add_type("application/octet-stream", ".rvm")


@dataclass(frozen=True)
class VideoStore:
    directory: Path
    manifest: catalog.Manifest
    media_allowlist: frozenset[str]


def scan_root(root: Path) -> "dict[str, VideoStore]":
    """Load every valid manifest directory under root; skip and log the rest."""
    stores: dict[str, VideoStore] = {}
    for child in sorted(root.iterdir()) if root.is_dir() else []:
        if not child.is_dir() or not (child / catalog.MANIFEST_NAME).exists():
            continue
        try:
            manifest = catalog.load_manifest(child)
        except CatalogError as exc:
            logger.warning("skipping %s: %s", child, exc)
            continue
        if not _VIDEO_ID_RE.match(manifest.video_id):
            logger.warning("skipping %s: unsafe video id %r", child, manifest.video_id)
            continue
        stores[manifest.video_id] = VideoStore(
            directory=child,
            manifest=manifest,
            media_allowlist=frozenset(manifest.media_paths()),
        )
    return stores


def create_app(
    root: Path | str,
    cors_origins: Sequence[str] = (),
    ui_dir: "Path | str | None" = None,
) -> FastAPI:
    root = Path(root)
    app = FastAPI(title="vidskim", docs_url=None, redoc_url=None)
    if cors_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=list(cors_origins),
            allow_methods=["GET"],
            allow_headers=["*"],
        )
    stores = scan_root(root)

    def _store(video_id: str) -> VideoStore:
        if not _VIDEO_ID_RE.match(video_id) or video_id not in stores:
            raise HTTPException(status_code=404, detail="unknown video")
        return stores[video_id]

    @app.get("/api/videos")
    def list_videos() -> list[dict]:
        return [
            {
                "video_id": store.manifest.video_id,
                "title": store.manifest.title,
                "duration": store.manifest.duration,
                "segment_count": len(store.manifest.segments),
            }
            for store in stores.values()
        ]

    @app.get("/api/videos/{video_id}/manifest")
    def get_manifest(video_id: str) -> Response:
        store = _store(video_id)
        payload = (store.directory / catalog.MANIFEST_NAME).read_bytes()
        return Response(content=payload, media_type="application/json")

    @app.get("/api/videos/{video_id}/search")
    def search_video(video_id: str, q: str = "") -> list[dict]:
        store = _store(video_id)
        if not q.strip():
            raise HTTPException(status_code=400, detail="empty query")
        hits = catalog.search(store.manifest, q)
        return [
            {
                "segment_index": hit.segment_index,
                "field": hit.field,
                "snippet": hit.snippet,
                "match_start": hit.match_start,
                "match_end": hit.match_end,
            }
            for hit in hits
        ]

    @app.get("/media/{video_id}/{relpath:path}")
    def get_media(video_id: str, relpath: str, request: Request) -> Response:
        store = _store(video_id)
        if relpath not in store.media_allowlist:
            raise HTTPException(status_code=404, detail="not a listed media path")
        file_path = store.directory / relpath
        if not file_path.is_file():
            raise HTTPException(status_code=404, detail="media file missing")
        return _serve_file(file_path, request.headers.get("range"))

    if ui_dir is not None:
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")
    return app


def _serve_file(path: Path, range_header: "str | None") -> Response:
    size = path.stat().st_size
    media_type = mimetypes.guess_type(path.name)[0] or "application/octet-stream"
    base_headers = {"Accept-Ranges": "bytes"}

    verdict, span = _parse_range(range_header, size)
    if verdict == "unsatisfiable":
        return Response(
            status_code=416,
            headers={**base_headers, "Content-Range": f"bytes */{size}"},
        )
    if verdict == "full":
        return Response(
            content=path.read_bytes(),
            media_type=media_type,
            headers=base_headers,
        )
    assert span is not None
    start, end = span
    with open(path, "rb") as fh:
        fh.seek(start)
        body = fh.read(end - start + 1)
    return Response(
        content=body,
        status_code=206,
        media_type=media_type,
        headers={
            **base_headers,
            "Content-Range": f"bytes {start}-{end}/{size}",
        },
    )


def _parse_range(
    header: "str | None", size: int
) -> "tuple[str, tuple[int, int] | None]":
    """Single-range parser.

    Returns ("full", None) when the header is absent or invalid (ignored per
    RFC 7233), ("unsatisfiable", None) when well-formed but covering no byte,
    or ("range", (start, end)) with an inclusive byte span.
    """
    if not header:
        return "full", None
    match = _RANGE_RE.match(header.strip())
    if not match:
        return "full", None
    first, last = match.groups()
    if first == "" and last == "":
        return "full", None
    if first == "":
        n = int(last)
        if n == 0 or size == 0:
            return "unsatisfiable", None
        return "range", (max(0, size - n), size - 1)
    start = int(first)
    if last and int(last) < start:
        return "full", None  # invalid spec: ignore the header
    if start >= size:
        return "unsatisfiable", None
    end = min(int(last), size - 1) if last else size - 1
    return "range", (start, end)
