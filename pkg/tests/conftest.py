"""Shared synthetic fixtures.

The canonical test video is 60 s at 10 fps, 320x240: three 20 s solid-color
scenes (hard cuts at 20 s and 40 s) with a distinct continuous tone per scene,
so every detector has a known ground truth and the mock adapters produce
predictable, per-segment-distinctive text.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from vidskim import rawmedia
from vidskim.media import AudioBuffer, Frame, MediaToolchain

FIXTURE_FPS = 10.0
FIXTURE_SIZE = (320, 240)  # (width, height)
FIXTURE_RATE = 16000
SCENE_COLORS = ((16, 32, 64), (160, 96, 192), (80, 208, 16))
SCENE_TONES = (220.0, 440.0, 880.0)
TONE_AMPLITUDE = 8000  # about -12 dBFS


def solid_frames(color, count, width=FIXTURE_SIZE[0], height=FIXTURE_SIZE[1]) -> np.ndarray:
    frames = np.empty((count, height, width, 3), dtype=np.uint8)
    frames[:] = np.array(color, dtype=np.uint8)
    return frames


def sine_samples(freq: float, duration: float, rate: int = FIXTURE_RATE,
                 amplitude: int = TONE_AMPLITUDE) -> np.ndarray:
    t = np.arange(int(round(duration * rate))) / rate
    return (amplitude * np.sin(2 * np.pi * freq * t)).astype(np.int16)


def build_lecture_video(
    path: Path,
    *,
    scene_seconds: float = 20.0,
    colors=SCENE_COLORS,
    tones=SCENE_TONES,
    fps: float = FIXTURE_FPS,
    rate: int = FIXTURE_RATE,
    silence_spans: "tuple[tuple[float, float], ...]" = (),
) -> Path:
    """Write the synthetic lecture: len(colors) scenes of scene_seconds each."""
    frames = np.concatenate(
        [solid_frames(color, int(round(scene_seconds * fps))) for color in colors]
    )
    audio = np.concatenate([sine_samples(tone, scene_seconds, rate) for tone in tones])
    for start, end in silence_spans:
        audio[int(start * rate): int(end * rate)] = 0
    return rawmedia.write_raw_media(path, frames, audio, fps=fps, sample_rate=rate)


def frame_at(index: int, pixels: np.ndarray, fps: float = FIXTURE_FPS) -> Frame:
    return Frame(index=index, timestamp=index / fps, pixels=pixels)


def frames_from_array(frames: np.ndarray, fps: float = FIXTURE_FPS) -> "list[Frame]":
    return [frame_at(i, frames[i], fps) for i in range(frames.shape[0])]


def audio_buffer(samples: np.ndarray, rate: int = FIXTURE_RATE) -> AudioBuffer:
    return AudioBuffer(sample_rate=rate, samples=samples.astype(np.int16))


@pytest.fixture(scope="session")
def raw_toolchain() -> MediaToolchain:
    return MediaToolchain.raw()


@pytest.fixture(scope="session")
def lecture_video(tmp_path_factory) -> Path:
    path = tmp_path_factory.mktemp("fixture") / "lecture60.rvm"
    return build_lecture_video(path)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance criterion."""
    lines = []
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            if getattr(report, "when", None) != "call":
                continue
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py" not in nodeid:
                continue
            status = "PASS" if outcome == "passed" else "FAIL"
            lines.append((nodeid.split("::")[-1], status))
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name, status in sorted(lines):
            terminalreporter.write_line(f"{status}  {name}")
