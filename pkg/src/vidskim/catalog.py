"""Manifest persistence and keyword search.

A processed video becomes one immutable directory:

    <out>/<video_id>/
        manifest.json
        source<ext>         shared original media (per-segment originals are
                            virtual: players seek this file to [start, end])
        clips/seg_000<ext>  narrated summary clips
        thumbs/seg_000.png  segment thumbnails

``manifest.json`` carries ``schema_version: 1`` and one entry per segment;
all media paths are relative to the manifest directory.  Degraded segments
(an adapter failed) keep their timing, thumbnail, and original clip but have
null summary fields.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

from .errors import (
    CorruptManifest,
    EmptyQuery,
    MissingArtifact,
    SchemaVersionMismatch,
    WriteFailed,
)
from .segmentation import Segment

SCHEMA_VERSION = 1
MANIFEST_NAME = "manifest.json"

SEARCH_FIELD_PRIORITY = ("title", "summary", "transcript", "ocr")
SNIPPET_CONTEXT = 40


@dataclass(frozen=True)
class BudgetInfo:
    """Budget counts as persisted: transcript words (l_t), distinct objects
    (l_o), OCR words (l_c), and the target summary length (n)."""

    l_t: int
    l_o: int
    l_c: int
    n: int


@dataclass(frozen=True)
class SegmentEntry:
    index: int
    title: "str | None"
    start: float
    end: float
    summary_text: "str | None"
    summary_clip: "str | None"
    original_clip: str
    thumbnail: str
    transcript: str
    ocr_text: str
    object_labels: tuple[str, ...]
    budget: "BudgetInfo | None"

    @property
    def has_summary(self) -> bool:
        return self.summary_text is not None and self.summary_clip is not None


@dataclass(frozen=True)
class Manifest:
    video_id: str
    source_path: str
    duration: float
    created_at: str
    config_fingerprint: str
    segments: tuple[SegmentEntry, ...]
    schema_version: int = SCHEMA_VERSION

    def media_paths(self) -> set[str]:
        """Every relative media path a player may request."""
        paths: set[str] = set()
        for entry in self.segments:
            paths.add(entry.original_clip)
            paths.add(entry.thumbnail)
            if entry.summary_clip:
                paths.add(entry.summary_clip)
        return paths

    @property
    def title(self) -> str:
        for entry in self.segments:
            if entry.title:
                return entry.title
        return self.video_id


@dataclass(frozen=True)
class SearchHit:
    segment_index: int
    field: str
    snippet: str
    match_start: int
    match_end: int


def build_manifest(
    video_id: str,
    source_path: str,
    duration: float,
    created_at: str,
    config_fingerprint: str,
    segments: "list[Segment]",
    entries: "dict[int, dict]",
    *,
    base_dir: Path,
) -> Manifest:
    """Assemble and validate the manifest for a fully processed video.

    ``entries`` maps segment index to the per-segment fields (title,
    summary_text, summary_clip, original_clip, thumbnail, transcript,
    ocr_text, object_labels, budget); summary fields may be None for
    degraded segments.  Referenced files must exist under ``base_dir``.
    """
    if not segments:
        raise ValueError("a processed video has at least one segment")
    base_dir = Path(base_dir)
    built: list[SegmentEntry] = []
    for segment in segments:
        fields = entries.get(segment.index)
        if fields is None:
            raise MissingArtifact(segment.index, "entry")
        entry = SegmentEntry(
            index=segment.index,
            title=fields.get("title"),
            start=segment.start,
            end=segment.end,
            summary_text=fields.get("summary_text"),
            summary_clip=fields.get("summary_clip"),
            original_clip=fields["original_clip"],
            thumbnail=fields["thumbnail"],
            transcript=fields.get("transcript", ""),
            ocr_text=fields.get("ocr_text", ""),
            object_labels=tuple(fields.get("object_labels", ())),
            budget=fields.get("budget"),
        )
        for name in ("original_clip", "thumbnail", "summary_clip"):
            rel = getattr(entry, name)
            if rel is not None and not (base_dir / rel).exists():
                raise MissingArtifact(segment.index, name)
        built.append(entry)
    return Manifest(
        video_id=video_id,
        source_path=source_path,
        duration=duration,
        created_at=created_at,
        config_fingerprint=config_fingerprint,
        segments=tuple(built),
    )


def write_manifest(manifest: Manifest, directory: Path | str) -> Path:
    """Serialize to <dir>/manifest.json.  Manifests are immutable afterwards;
    reprocessing writes a fresh directory."""
    directory = Path(directory)
    path = directory / MANIFEST_NAME
    try:
        directory.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(asdict(manifest), indent=2, sort_keys=True))
    except OSError as exc:
        raise WriteFailed(f"cannot write {path}: {exc}") from exc
    return path


def load_manifest(directory: Path | str) -> Manifest:
    """Parse <dir>/manifest.json back into a Manifest (round-trip equal)."""
    path = Path(directory) / MANIFEST_NAME
    if not path.exists():
        raise CorruptManifest(f"no {MANIFEST_NAME} in {directory}")
    try:
        data = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise CorruptManifest(f"{path}: {exc}") from exc
    if not isinstance(data, dict):
        raise CorruptManifest(f"{path}: not a JSON object")
    version = data.get("schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaVersionMismatch(f"{path}: schema_version {version!r}")
    try:
        segments = tuple(
            SegmentEntry(
                index=int(seg["index"]),
                title=seg["title"],
                start=float(seg["start"]),
                end=float(seg["end"]),
                summary_text=seg["summary_text"],
                summary_clip=seg["summary_clip"],
                original_clip=seg["original_clip"],
                thumbnail=seg["thumbnail"],
                transcript=seg["transcript"],
                ocr_text=seg["ocr_text"],
                object_labels=tuple(seg["object_labels"]),
                budget=BudgetInfo(**seg["budget"]) if seg["budget"] else None,
            )
            for seg in data["segments"]
        )
        return Manifest(
            video_id=data["video_id"],
            source_path=data["source_path"],
            duration=float(data["duration"]),
            created_at=data["created_at"],
            config_fingerprint=data["config_fingerprint"],
            segments=segments,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptManifest(f"{path}: {exc!r}") from exc


def _searchable_fields(entry: SegmentEntry) -> "list[tuple[str, str]]":
    return [
        ("title", entry.title or ""),
        ("summary", entry.summary_text or ""),
        ("transcript", entry.transcript),
        ("ocr", entry.ocr_text),
    ]


def search(manifest: Manifest, query: str) -> "list[SearchHit]":
    """Case-insensitive substring search over title, summary, transcript and
    OCR text; hits ordered by segment then field priority."""
    query = query.strip()
    if not query:
        raise EmptyQuery("query is empty after trimming")
    needle = query.lower()
    hits: list[SearchHit] = []
    for entry in manifest.segments:
        for field, text in _searchable_fields(entry):
            pos = text.lower().find(needle)
            if pos < 0:
                continue
            lo = max(0, pos - SNIPPET_CONTEXT)
            hi = min(len(text), pos + len(needle) + SNIPPET_CONTEXT)
            hits.append(
                SearchHit(
                    segment_index=entry.index,
                    field=field,
                    snippet=text[lo:hi],
                    match_start=pos - lo,
                    match_end=pos - lo + len(needle),
                )
            )
    return hits
