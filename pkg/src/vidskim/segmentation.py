"""Chapter segmentation from visual scene cuts and audio silences.

Scene transitions are found by comparing RGB color histograms of consecutive
frames; silences by thresholding windowed RMS amplitude.  Both cue types are
fused into chapter boundaries that tile the full video duration.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import BinMismatch, EmptyAudio, TooFewFrames
from .media import AudioBuffer, Frame

FULL_SCALE = 32767.0  # 16-bit PCM reference for dBFS


@dataclass(frozen=True)
class ColorHistogram:
    """Per-channel pixel-value tallies over equal-width bins."""

    bins_per_channel: int
    counts: np.ndarray  # (3, bins) int64
    total: int


@dataclass(frozen=True)
class SceneCut:
    frame_index: int
    time: float
    score: float


@dataclass(frozen=True)
class SilenceInterval:
    start: float
    end: float

    @property
    def midpoint(self) -> float:
        return (self.start + self.end) / 2.0


@dataclass(frozen=True)
class Segment:
    """A chapter: a contiguous slice of the source timeline."""

    index: int
    start: float
    end: float

    @property
    def duration(self) -> float:
        return self.end - self.start

    @property
    def midpoint(self) -> float:
        return (self.start + self.end) / 2.0


def compute_histogram(frame: Frame, bins: int = 16) -> ColorHistogram:
    """Histogram of each RGB channel; bin b covers values [b*256/B, (b+1)*256/B)."""
    if bins < 2:
        raise ValueError("need at least 2 bins per channel")
    pixels = frame.pixels.reshape(-1, 3)
    binned = (pixels.astype(np.uint32) * bins) >> 8 if bins & (bins - 1) == 0 else (
        pixels.astype(np.uint32) * bins // 256
    )
    counts = np.stack(
        [np.bincount(binned[:, c], minlength=bins) for c in range(3)]
    ).astype(np.int64)
    return ColorHistogram(bins_per_channel=bins, counts=counts, total=pixels.shape[0])


def histogram_distance(h1: ColorHistogram, h2: ColorHistogram) -> float:
    """Normalized L1 distance over the three channels, scaled into [0, 1].

    0 means identical color frequencies; 1 means every channel's mass sits in
    fully disjoint bins.
    """
    if h1.bins_per_channel != h2.bins_per_channel:
        raise BinMismatch(
            f"{h1.bins_per_channel} bins vs {h2.bins_per_channel} bins"
        )
    f1 = h1.counts / h1.total
    f2 = h2.counts / h2.total
    score = float(np.abs(f1 - f2).sum()) / 6.0
    return min(max(score, 0.0), 1.0)


def detect_scene_cuts(
    frames: Iterable[Frame],
    threshold: float = 0.4,
    min_gap: float = 2.0,
    bins: int = 16,
) -> list[SceneCut]:
    """Report frames whose histogram distance to the previous frame crosses
    the threshold, suppressing cuts closer than min_gap seconds to the last
    reported one.

    Single pass; only one histogram is retained, so arbitrarily long streams
    can be processed.
    """
    cuts: list[SceneCut] = []
    prev: ColorHistogram | None = None
    last_cut_time: float | None = None
    count = 0
    for frame in frames:
        count += 1
        hist = compute_histogram(frame, bins)
        if prev is not None:
            score = histogram_distance(prev, hist)
            if score >= threshold and (
                last_cut_time is None or frame.timestamp - last_cut_time >= min_gap
            ):
                cuts.append(
                    SceneCut(frame_index=frame.index, time=frame.timestamp, score=score)
                )
                last_cut_time = frame.timestamp
        prev = hist
    if count < 2:
        raise TooFewFrames(f"need at least 2 frames, got {count}")
    return cuts


def window_rms_dbfs(
    audio: AudioBuffer, window: float, hop: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Windowed RMS levels in dBFS.

    Windows start every ``hop`` seconds while they still contain samples; the
    final window is clipped at the buffer end.  Returns (starts, ends, dbfs).
    """
    n = len(audio.samples)
    rate = audio.sample_rate
    win = max(1, int(round(window * rate)))
    hop_s = max(1, int(round(hop * rate)))
    starts = np.arange(0, n, hop_s)
    ends = np.minimum(starts + win, n)
    sq = np.concatenate(([0.0], np.cumsum(audio.samples.astype(np.float64) ** 2)))
    sums = sq[ends] - sq[starts]
    rms = np.sqrt(sums / (ends - starts))
    with np.errstate(divide="ignore"):
        dbfs = 20.0 * np.log10(rms / FULL_SCALE)
    return starts / rate, ends / rate, dbfs


def detect_silences(
    audio: AudioBuffer,
    threshold_db: float = -40.0,
    min_duration: float = 0.5,
    window: float = 0.02,
    hop: float = 0.01,
) -> list[SilenceInterval]:
    """Maximal runs of RMS windows below threshold_db lasting min_duration.

    Each interval spans from the first quiet window's start to the last quiet
    window's end.
    """
    if len(audio.samples) == 0:
        raise EmptyAudio("cannot scan an empty buffer")
    if hop <= 0 or window < hop:
        raise ValueError("need window >= hop > 0")
    starts, ends, dbfs = window_rms_dbfs(audio, window, hop)
    quiet = dbfs < threshold_db
    intervals: list[SilenceInterval] = []
    run_start: int | None = None
    for i in range(len(quiet) + 1):
        if i < len(quiet) and quiet[i]:
            if run_start is None:
                run_start = i
        elif run_start is not None:
            lo, hi = starts[run_start], ends[i - 1]
            if hi - lo >= min_duration:
                intervals.append(SilenceInterval(start=float(lo), end=float(hi)))
            run_start = None
    return intervals


def fuse_boundaries(
    cuts: Sequence[SceneCut],
    silences: Sequence[SilenceInterval],
    duration: float,
    min_segment: float = 15.0,
    mode: str = "union",
) -> list[Segment]:
    """Fuse visual cuts and silence midpoints into chapters tiling [0, duration].

    Candidates are scene-cut times plus silence midpoints (a silence that
    contains a cut yields the cut time instead, so chapters never start
    mid-word when a visual transition pins the boundary).  Candidates are
    accepted left to right, skipping any closer than min_segment to the
    previous boundary or to either endpoint.  ``mode="intersection"`` keeps
    only cuts that fall inside a silence interval.
    """
    if duration <= 0:
        raise ValueError("duration must be positive")
    if mode not in ("union", "intersection"):
        raise ValueError(f"unknown fusion mode: {mode}")

    cut_times = sorted(c.time for c in cuts)
    candidates: list[float] = []
    if mode == "union":
        candidates.extend(cut_times)
        for silence in silences:
            covered = any(silence.start <= t <= silence.end for t in cut_times)
            if not covered:
                candidates.append(silence.midpoint)
    else:
        for t in cut_times:
            if any(s.start <= t <= s.end for s in silences):
                candidates.append(t)
    candidates.sort()

    boundaries = [0.0]
    for cand in candidates:
        if cand - boundaries[-1] >= min_segment and duration - cand >= min_segment:
            boundaries.append(cand)
    boundaries.append(duration)

    return [
        Segment(index=i, start=boundaries[i], end=boundaries[i + 1])
        for i in range(len(boundaries) - 1)
    ]
