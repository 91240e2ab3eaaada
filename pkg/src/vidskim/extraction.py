"""Per-segment evidence gathering: transcript, OCR text, object labels.

The recognition models themselves are external adapters; this module feeds
them, parses their responses, and aggregates the word/object counts the
summary length budget is computed from.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from . import rawmedia
from .adapters import AdapterSpec, run_adapter
from .errors import AdapterFailure, InconsistentSegment
from .media import Frame, AudioBuffer, MediaInfo, MediaToolchain, decode_frames, render_thumbnail
from .segmentation import Segment

_EPS = 1e-6


@dataclass(frozen=True)
class TranscriptPiece:
    text: str
    start: float
    end: float


@dataclass(frozen=True)
class Transcript:
    """Time-ordered speech pieces for one segment."""

    segment_index: int
    pieces: tuple[TranscriptPiece, ...]
    word_count: int

    @property
    def text(self) -> str:
        return " ".join(p.text for p in self.pieces if p.text)


@dataclass(frozen=True)
class OcrResult:
    """On-screen text per keyframe, with consecutive duplicates collapsed."""

    segment_index: int
    frame_texts: tuple[tuple[str, ...], ...]
    deduplicated_text: str
    word_count: int


@dataclass(frozen=True)
class ObjectLabel:
    name: str
    confidence: float


@dataclass(frozen=True)
class ObjectSet:
    """Detected object labels merged across a segment's keyframes."""

    segment_index: int
    labels: tuple[ObjectLabel, ...]
    confidence_floor: float
    distinct_count: int


@dataclass(frozen=True)
class SegmentEvidence:
    """Everything the summarizer gets to see for one segment."""

    segment: Segment
    transcript: Transcript
    ocr: OcrResult
    objects: ObjectSet


def _word_count(text: str) -> int:
    return len(text.split())


def transcribe(
    audio: AudioBuffer,
    segment: Segment,
    adapter: AdapterSpec,
    *,
    workdir: Path,
) -> Transcript:
    """Run the ASR adapter over the segment's audio."""
    audio_path = Path(workdir) / f"asr_{segment.index:03d}.wav"
    rawmedia.write_wav(audio_path, audio.samples, audio.sample_rate)
    response = run_adapter(
        adapter, {"audio_path": str(audio_path), "sample_rate": audio.sample_rate}
    )
    raw_pieces = response.get("segments")
    if not isinstance(raw_pieces, list):
        raise AdapterFailure(adapter.kind, "response lacks a segments list")
    pieces = []
    for item in raw_pieces:
        try:
            text = str(item["text"]).strip()
            start = segment.start + float(item["start"])
            end = segment.start + float(item["end"])
        except (TypeError, KeyError, ValueError) as exc:
            raise AdapterFailure(adapter.kind, f"malformed transcript piece: {item!r}") from exc
        if not text:
            continue
        pieces.append(
            TranscriptPiece(
                text=text,
                start=min(max(start, segment.start), segment.end),
                end=min(max(end, segment.start), segment.end),
            )
        )
    pieces.sort(key=lambda p: (p.start, p.end))
    total = sum(_word_count(p.text) for p in pieces)
    return Transcript(segment_index=segment.index, pieces=tuple(pieces), word_count=total)


def ocr_segment(
    keyframes: "list[Frame]",
    segment: Segment,
    adapter: AdapterSpec,
    *,
    workdir: Path,
) -> OcrResult:
    """Run the OCR adapter over the keyframes and collapse repeated slides.

    A keyframe whose text block equals the previous keyframe's block is a
    still slide and is counted once.
    """
    image_paths = _save_keyframes(keyframes, Path(workdir), f"ocr_{segment.index:03d}")
    response = run_adapter(adapter, {"image_paths": image_paths})
    frames = response.get("frames")
    if not isinstance(frames, list) or len(frames) != len(image_paths):
        raise AdapterFailure(adapter.kind, "response frames do not match request images")
    frame_texts: list[tuple[str, ...]] = []
    for item in frames:
        lines = item.get("lines") if isinstance(item, dict) else None
        if not isinstance(lines, list):
            raise AdapterFailure(adapter.kind, f"malformed OCR frame: {item!r}")
        frame_texts.append(tuple(str(line).strip() for line in lines))
    kept: list[tuple[str, ...]] = []
    for block in frame_texts:
        if not kept or block != kept[-1]:
            kept.append(block)
    dedup = "\n".join(line for block in kept for line in block if line)
    return OcrResult(
        segment_index=segment.index,
        frame_texts=tuple(frame_texts),
        deduplicated_text=dedup,
        word_count=_word_count(dedup),
    )


def detect_objects(
    keyframes: "list[Frame]",
    segment: Segment,
    adapter: AdapterSpec,
    *,
    workdir: Path,
    confidence_floor: float = 0.5,
    count_mode: str = "distinct",
) -> ObjectSet:
    """Run the object-detection adapter and merge labels across keyframes.

    ``count_mode="distinct"`` counts each label once per segment (default);
    ``"per_frame_sum"`` sums the per-keyframe distinct counts instead.
    """
    if count_mode not in ("distinct", "per_frame_sum"):
        raise ValueError(f"unknown count mode: {count_mode}")
    image_paths = _save_keyframes(keyframes, Path(workdir), f"obj_{segment.index:03d}")
    response = run_adapter(adapter, {"image_paths": image_paths})
    frames = response.get("frames")
    if not isinstance(frames, list) or len(frames) != len(image_paths):
        raise AdapterFailure(adapter.kind, "response frames do not match request images")
    best: dict[str, float] = {}
    per_frame_sum = 0
    for item in frames:
        labels = item.get("labels") if isinstance(item, dict) else None
        if not isinstance(labels, list):
            raise AdapterFailure(adapter.kind, f"malformed detection frame: {item!r}")
        frame_names = set()
        for label in labels:
            try:
                name = str(label["name"])
                confidence = float(label["confidence"])
            except (TypeError, KeyError, ValueError) as exc:
                raise AdapterFailure(adapter.kind, f"malformed label: {label!r}") from exc
            best[name] = max(best.get(name, 0.0), confidence)
            if confidence >= confidence_floor:
                frame_names.add(name)
        per_frame_sum += len(frame_names)
    merged = tuple(
        ObjectLabel(name=name, confidence=conf) for name, conf in sorted(best.items())
    )
    distinct = sum(1 for l in merged if l.confidence >= confidence_floor)
    count = distinct if count_mode == "distinct" else per_frame_sum
    return ObjectSet(
        segment_index=segment.index,
        labels=merged,
        confidence_floor=confidence_floor,
        distinct_count=count,
    )


def _save_keyframes(keyframes: "list[Frame]", workdir: Path, prefix: str) -> list[str]:
    workdir.mkdir(parents=True, exist_ok=True)
    paths = []
    for frame in keyframes:
        path = workdir / f"{prefix}_f{frame.index:06d}.png"
        if not path.exists():
            render_thumbnail(frame, path)
        paths.append(str(path))
    return paths


def keyframe_times(segment: Segment, interval: float) -> list[float]:
    """Sampling instants: every ``interval`` seconds from the segment start,
    plus the midpoint, which is always included."""
    n = int(segment.duration / interval + _EPS)
    times = [segment.start + k * interval for k in range(n)]
    times.append(segment.midpoint)
    return sorted(set(times))


def sample_keyframes(
    source_path: Path | str,
    segment: Segment,
    *,
    toolchain: MediaToolchain,
    info: MediaInfo,
    interval: float = 2.0,
) -> "list[Frame]":
    """Decode the frames nearest the sampling instants (one pass)."""
    wanted: list[int] = []
    last_index = int(segment.end * info.fps - _EPS)
    for t in keyframe_times(segment, interval):
        idx = min(int(t * info.fps + _EPS), last_index)
        if not wanted or idx != wanted[-1]:
            wanted.append(idx)
    remaining = set(wanted)
    frames = []
    for frame in decode_frames(
        source_path, segment.start, segment.end, toolchain=toolchain, info=info
    ):
        if frame.index in remaining:
            frames.append(frame)
            remaining.discard(frame.index)
            if not remaining:
                break
    return frames


def aggregate_evidence(
    segment: Segment,
    transcript: Transcript,
    ocr: OcrResult,
    objects: ObjectSet,
) -> SegmentEvidence:
    """Bundle the evidence, verifying ownership and recomputing the counts."""
    for child, label in ((transcript, "transcript"), (ocr, "ocr"), (objects, "objects")):
        if child.segment_index != segment.index:
            raise InconsistentSegment(
                f"{label} belongs to segment {child.segment_index}, not {segment.index}"
            )
    for piece in transcript.pieces:
        if piece.start < segment.start - _EPS or piece.end > segment.end + _EPS:
            raise InconsistentSegment(
                f"transcript piece [{piece.start}, {piece.end}] outside segment bounds"
            )
    recounted = sum(_word_count(p.text) for p in transcript.pieces)
    if recounted != transcript.word_count:
        transcript = Transcript(transcript.segment_index, transcript.pieces, recounted)
    if _word_count(ocr.deduplicated_text) != ocr.word_count:
        ocr = OcrResult(
            ocr.segment_index,
            ocr.frame_texts,
            ocr.deduplicated_text,
            _word_count(ocr.deduplicated_text),
        )
    return SegmentEvidence(segment=segment, transcript=transcript, ocr=ocr, objects=objects)
