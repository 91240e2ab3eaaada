"""End-to-end processing: segment, extract, summarize, narrate, assemble.

Stages fan out per segment under a worker limit; one flaky adapter call
degrades only its own segment (the chapter keeps its thumbnail and original
video, loses its summary) while decode failures abort the run before any
output directory is created.
"""

from __future__ import annotations

import json
import logging
import re
import shutil
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from . import assembly, catalog, extraction, summarization
from .config import PipelineConfig
from .errors import (
    AdapterError,
    EmptySummary,
    InconsistentSegment,
    MediaError,
    NoSpeechFound,
    TooFewFrames,
    VidskimError,
)
from .extraction import SegmentEvidence, Transcript
from .media import AudioBuffer, MediaInfo, decode_audio, decode_frames, probe, render_thumbnail
from .segmentation import Segment, detect_scene_cuts, detect_silences, fuse_boundaries

logger = logging.getLogger(__name__)

_ID_SAFE_RE = re.compile(r"[^A-Za-z0-9._-]+")


@dataclass
class SegmentOutcome:
    index: int
    start: float
    end: float
    status: str  # ok | degraded
    failure: "str | None"
    budget: "dict | None"
    narration_duration: "float | None"
    clip_duration: "float | None"
    timings: "dict[str, float]" = field(default_factory=dict)


@dataclass
class PipelineReport:
    video_id: str
    source_path: str
    duration: float
    segments: "list[SegmentOutcome]"
    original_total: float
    summary_total: float
    compression_ratio: float
    failures: "list[dict]"
    elapsed: float

    @property
    def succeeded(self) -> int:
        return sum(1 for s in self.segments if s.status == "ok")

    def exit_code(self) -> int:
        if self.succeeded == 0:
            return 1
        if self.succeeded < len(self.segments):
            return 2
        return 0

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class _SegmentWork:
    segment: Segment
    thumbnail_rel: str = ""
    evidence: "SegmentEvidence | None" = None
    failure: "tuple[str, str] | None" = None
    summary: "summarization.SummaryResult | None" = None
    narration: "assembly.NarrationAudio | None" = None
    clip: "assembly.SummaryClip | None" = None
    timings: "dict[str, float]" = field(default_factory=dict)


def derive_video_id(video_path: Path) -> str:
    stem = _ID_SAFE_RE.sub("-", video_path.stem).strip("-.")
    return stem or "video"


def segment_video(
    video_path: Path,
    config: PipelineConfig,
    info: MediaInfo,
    audio: AudioBuffer,
) -> "list[Segment]":
    """Run both boundary detectors over the whole video and fuse them."""
    seg_cfg = config.segmentation
    toolchain = config.media.build_toolchain()
    stride = config.media.analysis_stride(info.fps)
    frames = decode_frames(
        video_path, 0.0, info.duration, toolchain=toolchain, info=info, stride=stride
    )
    try:
        cuts = detect_scene_cuts(
            frames,
            threshold=seg_cfg.scene_threshold,
            min_gap=seg_cfg.scene_min_gap,
            bins=seg_cfg.histogram_bins,
        )
    except TooFewFrames:
        cuts = []
    if len(audio.samples) > 0:
        silences = detect_silences(
            audio,
            threshold_db=seg_cfg.silence_threshold_db,
            min_duration=seg_cfg.silence_min_duration,
            window=seg_cfg.silence_window,
            hop=seg_cfg.silence_hop,
        )
    else:
        silences = []
    return fuse_boundaries(
        cuts,
        silences,
        info.duration,
        min_segment=seg_cfg.min_segment,
        mode=seg_cfg.boundary_mode,
    )


def process(
    video_path: Path | str,
    config: PipelineConfig,
    out_root: Path | str,
) -> "tuple[Path, PipelineReport]":
    """Process one video into <out_root>/<video_id>/ and return the report."""
    started = time.perf_counter()
    video_path = Path(video_path)
    out_root = Path(out_root)
    toolchain = config.media.build_toolchain()

    info = probe(video_path, toolchain)
    video_id = derive_video_id(video_path)
    manifest_dir = out_root / video_id
    if manifest_dir.exists():
        raise FileExistsError(
            f"{manifest_dir} already exists; processed directories are immutable"
        )

    audio = decode_audio(
        video_path,
        0.0,
        info.duration,
        toolchain=toolchain,
        info=info,
        sample_rate=config.media.sample_rate,
    )
    segments = segment_video(video_path, config, info, audio)

    (manifest_dir / "clips").mkdir(parents=True)
    (manifest_dir / "thumbs").mkdir()
    workdir = manifest_dir / "work"
    workdir.mkdir()
    source_rel = "source" + (video_path.suffix or ".bin")
    shutil.copyfile(video_path, manifest_dir / source_rel)

    works = [_SegmentWork(segment=seg) for seg in segments]

    def extract_stage(work: _SegmentWork) -> None:
        seg = work.segment
        t0 = time.perf_counter()
        keyframes = extraction.sample_keyframes(
            video_path,
            seg,
            toolchain=toolchain,
            info=info,
            interval=config.extraction.keyframe_interval,
        )
        midpoint = min(keyframes, key=lambda f: abs(f.timestamp - seg.midpoint))
        thumb_rel = f"thumbs/seg_{seg.index:03d}.png"
        render_thumbnail(
            midpoint,
            manifest_dir / thumb_rel,
            max_width=config.media.thumbnail_max_width,
            image_format=config.media.thumbnail_format,
        )
        work.thumbnail_rel = thumb_rel
        try:
            transcript = extraction.transcribe(
                audio.slice(seg.start, seg.end),
                seg,
                config.adapters["asr"],
                workdir=workdir,
            )
            ocr = extraction.ocr_segment(
                keyframes, seg, config.adapters["ocr"], workdir=workdir
            )
            objects = extraction.detect_objects(
                keyframes,
                seg,
                config.adapters["objdet"],
                workdir=workdir,
                confidence_floor=config.extraction.object_confidence_floor,
                count_mode=config.extraction.object_count_mode,
            )
            work.evidence = extraction.aggregate_evidence(seg, transcript, ocr, objects)
        except (AdapterError, InconsistentSegment) as exc:
            work.failure = ("extract", str(exc))
        work.timings["extract"] = time.perf_counter() - t0

    def summary_stage(work: _SegmentWork, reference: "Path | None") -> None:
        if work.evidence is None or work.failure is not None:
            return
        seg = work.segment
        try:
            t0 = time.perf_counter()
            budget = summarization.compute_summary_budget(
                work.evidence,
                speech_weight=config.summary.speech_weight,
                visual_weight=config.summary.visual_weight,
            )
            prompt = summarization.build_prompt(work.evidence, budget)
            work.summary = summarization.summarize_segment(
                prompt, budget, config.adapters["llm"]
            )
            work.timings["summarize"] = time.perf_counter() - t0

            if reference is None:
                raise NoSpeechFound("no voice reference available")
            t0 = time.perf_counter()
            work.narration = assembly.synthesize_narration(
                work.summary.summary_text,
                reference,
                config.adapters["tts"],
                workdir / f"narration_{seg.index:03d}.wav",
            )
            work.timings["synthesize"] = time.perf_counter() - t0

            t0 = time.perf_counter()
            work.clip = assembly.assemble_summary_clip(
                video_path,
                seg,
                work.narration,
                manifest_dir / "clips" / f"seg_{seg.index:03d}{toolchain.clip_suffix}",
                toolchain=toolchain,
                info=info,
                mode=config.assembly.cut_mode,
            )
            work.timings["assemble"] = time.perf_counter() - t0
        except (AdapterError, EmptySummary, NoSpeechFound, MediaError) as exc:
            work.failure = ("summarize", str(exc))
            work.narration = None
            work.clip = None

    with ThreadPoolExecutor(max_workers=config.parallelism) as pool:
        list(pool.map(extract_stage, works))

        reference = _extract_reference(audio, works, workdir, config)

        list(pool.map(lambda w: summary_stage(w, reference), works))

    manifest = _build_and_write_manifest(
        video_id, video_path, info, segments, works, manifest_dir, source_rel, config
    )
    report = _build_report(manifest, works, time.perf_counter() - started)
    (manifest_dir / "report.json").write_text(json.dumps(report.to_dict(), indent=2))
    return manifest_dir, report


def _extract_reference(
    audio: AudioBuffer,
    works: "list[_SegmentWork]",
    workdir: Path,
    config: PipelineConfig,
) -> "Path | None":
    pieces = tuple(
        piece
        for work in works
        if work.evidence is not None
        for piece in work.evidence.transcript.pieces
    )
    combined = Transcript(segment_index=-1, pieces=pieces, word_count=0)
    try:
        return assembly.extract_reference_audio(
            audio,
            combined,
            workdir / "reference.wav",
            max_duration=config.assembly.reference_max_duration,
            silence_threshold_db=config.segmentation.silence_threshold_db,
        )
    except (NoSpeechFound, VidskimError) as exc:
        logger.warning("voice reference unavailable: %s", exc)
        return None


def _build_and_write_manifest(
    video_id: str,
    video_path: Path,
    info: MediaInfo,
    segments: "list[Segment]",
    works: "list[_SegmentWork]",
    manifest_dir: Path,
    source_rel: str,
    config: PipelineConfig,
) -> catalog.Manifest:
    entries: dict[int, dict] = {}
    clip_suffix = config.media.build_toolchain().clip_suffix
    for work in works:
        evidence = work.evidence
        budget = None
        if work.summary is not None:
            b = work.summary.budget
            budget = catalog.BudgetInfo(
                l_t=b.transcript_words, l_o=b.object_count, l_c=b.ocr_words,
                n=b.target_words,
            )
        labels: tuple[str, ...] = ()
        if evidence is not None:
            labels = tuple(
                label.name
                for label in evidence.objects.labels
                if label.confidence >= evidence.objects.confidence_floor
            )
        complete = work.clip is not None and work.summary is not None
        entries[work.segment.index] = {
            "title": work.summary.title if complete else None,
            "summary_text": work.summary.summary_text if complete else None,
            "summary_clip": (
                f"clips/seg_{work.segment.index:03d}{clip_suffix}" if complete else None
            ),
            "original_clip": source_rel,
            "thumbnail": work.thumbnail_rel,
            "transcript": evidence.transcript.text if evidence else "",
            "ocr_text": evidence.ocr.deduplicated_text if evidence else "",
            "object_labels": labels,
            "budget": budget if complete else None,
        }
    manifest = catalog.build_manifest(
        video_id,
        str(video_path),
        info.duration,
        datetime.now(timezone.utc).isoformat(),
        config.fingerprint(),
        segments,
        entries,
        base_dir=manifest_dir,
    )
    catalog.write_manifest(manifest, manifest_dir)
    return manifest


def _build_report(
    manifest: catalog.Manifest,
    works: "list[_SegmentWork]",
    elapsed: float,
) -> PipelineReport:
    outcomes = []
    failures = []
    summary_total = 0.0
    original_total = 0.0
    for work in works:
        seg = work.segment
        ok = work.clip is not None and work.failure is None
        original_total += seg.duration
        if ok:
            summary_total += work.clip.duration
        if work.failure is not None:
            failures.append(
                {"segment": seg.index, "stage": work.failure[0], "error": work.failure[1]}
            )
        budget = None
        if work.summary is not None:
            b = work.summary.budget
            budget = {
                "l_t": b.transcript_words, "l_o": b.object_count,
                "l_c": b.ocr_words, "n": b.target_words,
            }
        outcomes.append(
            SegmentOutcome(
                index=seg.index,
                start=seg.start,
                end=seg.end,
                status="ok" if ok else "degraded",
                failure=None if work.failure is None else f"{work.failure[0]}: {work.failure[1]}",
                budget=budget,
                narration_duration=work.narration.duration if work.narration else None,
                clip_duration=work.clip.duration if work.clip else None,
                timings={k: round(v, 4) for k, v in work.timings.items()},
            )
        )
    ratio = summary_total / original_total if original_total > 0 else 0.0
    return PipelineReport(
        video_id=manifest.video_id,
        source_path=manifest.source_path,
        duration=manifest.duration,
        segments=outcomes,
        original_total=original_total,
        summary_total=summary_total,
        compression_ratio=ratio,
        failures=failures,
        elapsed=round(elapsed, 3),
    )


def load_report(manifest_dir: Path | str) -> "dict | None":
    path = Path(manifest_dir) / "report.json"
    if not path.exists():
        return None
    try:
        return json.loads(path.read_text())
    except (OSError, json.JSONDecodeError):
        return None


def inspect(manifest_dir: Path | str) -> dict:
    """Summarize a processed directory: per-segment counts, budgets, clip
    durations, and the overall compression ratio."""
    manifest_dir = Path(manifest_dir)
    manifest = catalog.load_manifest(manifest_dir)
    report = load_report(manifest_dir)
    clip_durations: dict[int, float] = {}
    if report:
        for seg in report.get("segments", []):
            if seg.get("clip_duration") is not None:
                clip_durations[seg["index"]] = seg["clip_duration"]
    rows = []
    summary_total = 0.0
    for entry in manifest.segments:
        duration = clip_durations.get(entry.index)
        if duration is not None:
            summary_total += duration
        rows.append(
            {
                "index": entry.index,
                "start": entry.start,
                "end": entry.end,
                "title": entry.title,
                "l_t": entry.budget.l_t if entry.budget else None,
                "l_c": entry.budget.l_c if entry.budget else None,
                "l_o": entry.budget.l_o if entry.budget else None,
                "n": entry.budget.n if entry.budget else None,
                "clip_duration": duration,
                "status": "ok" if entry.has_summary else "degraded",
            }
        )
    original_total = manifest.duration
    return {
        "video_id": manifest.video_id,
        "duration": manifest.duration,
        "created_at": manifest.created_at,
        "segments": rows,
        "totals": {
            "original_duration": original_total,
            "summary_duration": summary_total,
            "compression_ratio": (
                summary_total / original_total if original_total else 0.0
            ),
        },
    }
