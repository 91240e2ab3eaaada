"""Summary clip assembly: narration synthesis and video interval selection.

Narration is synthesized by the TTS adapter, conditioned on reference audio
cut from the original speaker.  The video interval is sized to the narration
and taken from the beginning, middle (default), or end of the segment; when
the narration outruns the whole segment the muxer holds the final frame.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from . import rawmedia
from .adapters import AdapterSpec, run_adapter
from .errors import AdapterFailure, NoSpeechFound
from .extraction import Transcript
from .media import AudioBuffer, MediaInfo, MediaToolchain, audio_file_duration, mux_clip
from .segmentation import Segment, detect_silences

CUT_MODES = ("begin", "middle", "end")

REFERENCE_MAX_SECONDS = 30.0


@dataclass(frozen=True)
class NarrationAudio:
    path: Path
    duration: float
    reference_path: Path


@dataclass(frozen=True)
class SummaryClip:
    segment_index: int
    interval_start: float
    interval_end: float
    clip_path: Path
    duration: float


def extract_reference_audio(
    audio: AudioBuffer,
    transcript: Transcript,
    out_path: Path | str,
    *,
    max_duration: float = REFERENCE_MAX_SECONDS,
    silence_threshold_db: float = -40.0,
) -> Path:
    """Write the longest speech-bearing stretch (capped) for voice cloning."""
    if not transcript.pieces:
        raise NoSpeechFound("transcript is empty")
    silences = detect_silences(audio, threshold_db=silence_threshold_db)
    edges = [0.0]
    for interval in silences:
        edges.extend((interval.start, interval.end))
    edges.append(audio.duration)
    spans = [
        (edges[i], edges[i + 1])
        for i in range(0, len(edges) - 1, 2)
        if edges[i + 1] - edges[i] > 0
    ]
    if not spans:
        raise NoSpeechFound("audio contains no voiced span")
    start, end = max(spans, key=lambda span: span[1] - span[0])
    end = min(end, start + max_duration)
    clip = audio.slice(start, end)
    rawmedia.write_wav(out_path, clip.samples, clip.sample_rate)
    return Path(out_path)


def synthesize_narration(
    summary_text: str,
    reference_path: Path | str,
    adapter: AdapterSpec,
    out_path: Path | str,
) -> NarrationAudio:
    """Drive the TTS adapter and record the probed narration duration."""
    if not summary_text.strip():
        raise ValueError("summary text is empty")
    response = run_adapter(
        adapter,
        {
            "text": summary_text,
            "reference_audio_path": str(reference_path),
            "out_path": str(out_path),
        },
    )
    audio_path = response.get("audio_path")
    if not isinstance(audio_path, str) or not Path(audio_path).exists():
        raise AdapterFailure(adapter.kind, "adapter wrote no audio file")
    duration = audio_file_duration(audio_path)
    return NarrationAudio(
        path=Path(audio_path), duration=duration, reference_path=Path(reference_path)
    )


def select_video_interval(
    segment: Segment,
    narration_duration: float,
    mode: str = "middle",
) -> tuple[float, float, bool]:
    """Pick the sub-interval of the segment the clip's video comes from.

    Returns (start, end, overflow); overflow means the narration is longer
    than the whole segment and the tail will be a frozen frame.
    """
    if mode not in CUT_MODES:
        raise ValueError(f"unknown cut mode: {mode}")
    if narration_duration <= 0:
        raise ValueError("narration duration must be positive")
    length = segment.duration
    if narration_duration >= length:
        return segment.start, segment.end, narration_duration > length
    if mode == "begin":
        return segment.start, segment.start + narration_duration, False
    if mode == "end":
        return segment.end - narration_duration, segment.end, False
    offset = (length - narration_duration) / 2.0
    return segment.start + offset, segment.start + offset + narration_duration, False


def assemble_summary_clip(
    source_path: Path | str,
    segment: Segment,
    narration: NarrationAudio,
    out_path: Path | str,
    *,
    toolchain: MediaToolchain,
    info: MediaInfo,
    mode: str = "middle",
) -> SummaryClip:
    """Mux the selected video interval with the narration into a clip."""
    start, end, _ = select_video_interval(segment, narration.duration, mode)
    clip_path, duration = mux_clip(
        source_path,
        start,
        end,
        narration.path,
        out_path,
        toolchain=toolchain,
        info=info,
        narration_duration=narration.duration,
    )
    return SummaryClip(
        segment_index=segment.index,
        interval_start=start,
        interval_end=end,
        clip_path=clip_path,
        duration=duration,
    )
