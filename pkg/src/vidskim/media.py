"""Media decode/encode boundary.

All codec work is delegated to external commands configured as templates; the
core only consumes raw RGB24 frames and s16le mono PCM over pipes, so results
are deterministic and no codec is ever linked in.  Two presets ship with the
package: ``raw`` (the in-repo `vidskim.rawmedia` tool, used by fixtures and
demos) and ``ffmpeg`` (real containers).  Custom toolchains supply their own
templates but must honour the same pipe formats and the probe JSON contract
``{"duration", "fps", "width", "height", "sample_rate"}``.
"""

from __future__ import annotations

import json
import shutil
import subprocess
import sys
import wave
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

import numpy as np
from PIL import Image

from .errors import (
    DecoderUnavailable,
    EncoderUnavailable,
    MuxerUnavailable,
    RangeOutOfBounds,
    UnreadableMedia,
    WriteFailed,
)

_EPS = 1e-6


@dataclass(frozen=True)
class MediaInfo:
    """Container-level facts reported by the probe command."""

    duration: float
    fps: float
    width: int
    height: int
    sample_rate: int


@dataclass(frozen=True)
class Frame:
    """One decoded video frame: row-major RGB, 8 bits per channel."""

    index: int
    timestamp: float
    pixels: np.ndarray  # (height, width, 3) uint8

    @property
    def width(self) -> int:
        return int(self.pixels.shape[1])

    @property
    def height(self) -> int:
        return int(self.pixels.shape[0])


@dataclass(frozen=True)
class AudioBuffer:
    """Mono 16-bit PCM audio."""

    sample_rate: int
    samples: np.ndarray  # (n,) int16

    @property
    def duration(self) -> float:
        return len(self.samples) / self.sample_rate

    def slice(self, start: float, end: float) -> "AudioBuffer":
        lo = int(round(start * self.sample_rate))
        hi = int(round(end * self.sample_rate))
        return AudioBuffer(self.sample_rate, self.samples[lo:hi])


@dataclass(frozen=True)
class MediaToolchain:
    """Command templates for the four external media operations.

    Templates are argv lists; ``{placeholder}`` tokens are substituted per
    call.  Available placeholders: input, start, end, stride, rate, narration,
    out, duration (narration seconds), freeze (seconds of trailing freeze).
    """

    kind: str
    probe_cmd: tuple[str, ...]
    frames_cmd: tuple[str, ...]
    audio_cmd: tuple[str, ...]
    mux_cmd: tuple[str, ...]
    clip_suffix: str = ".mp4"

    @staticmethod
    def raw() -> "MediaToolchain":
        tool = (sys.executable, "-m", "vidskim.rawmedia")
        return MediaToolchain(
            kind="raw",
            probe_cmd=tool + ("probe", "{input}"),
            frames_cmd=tool
            + ("frames", "{input}", "--start", "{start}", "--end", "{end}",
               "--stride", "{stride}"),
            audio_cmd=tool
            + ("audio", "{input}", "--start", "{start}", "--end", "{end}",
               "--rate", "{rate}"),
            mux_cmd=tool
            + ("mux", "{input}", "--start", "{start}", "--end", "{end}",
               "--narration", "{narration}", "--out", "{out}"),
            clip_suffix=".rvm",
        )

    @staticmethod
    def ffmpeg() -> "MediaToolchain":
        return MediaToolchain(
            kind="ffmpeg",
            probe_cmd=(
                "ffprobe", "-v", "error", "-print_format", "json",
                "-show_format", "-show_streams", "{input}",
            ),
            frames_cmd=(
                "ffmpeg", "-v", "error", "-nostdin", "-i", "{input}",
                "-ss", "{start}", "-to", "{end}",
                "-vf", "framestep={stride}",
                "-f", "rawvideo", "-pix_fmt", "rgb24", "-",
            ),
            audio_cmd=(
                "ffmpeg", "-v", "error", "-nostdin", "-i", "{input}",
                "-ss", "{start}", "-to", "{end}",
                "-vn", "-ac", "1", "-ar", "{rate}", "-f", "s16le", "-",
            ),
            mux_cmd=(
                "ffmpeg", "-v", "error", "-nostdin", "-y",
                "-ss", "{start}", "-to", "{end}", "-i", "{input}",
                "-i", "{narration}",
                "-map", "0:v", "-map", "1:a",
                "-vf", "tpad=stop_mode=clone:stop_duration={freeze}",
                "-t", "{duration}", "{out}",
            ),
            clip_suffix=".mp4",
        )

    def render(self, template: tuple[str, ...], **values: object) -> list[str]:
        return [tok.format(**{k: str(v) for k, v in values.items()}) for tok in template]


def _run_capture(cmd: list[str], unavailable_exc: type[Exception]) -> bytes:
    try:
        proc = subprocess.run(cmd, capture_output=True)
    except FileNotFoundError as exc:
        raise unavailable_exc(f"command not found: {cmd[0]}") from exc
    if proc.returncode != 0:
        raise UnreadableMedia(proc.stderr.decode(errors="replace").strip() or f"{cmd[0]} failed")
    return proc.stdout


def probe(path: Path | str, toolchain: MediaToolchain) -> MediaInfo:
    """Ask the configured prober for duration/fps/resolution/sample rate."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(path)
    cmd = toolchain.render(toolchain.probe_cmd, input=path)
    out = _run_capture(cmd, DecoderUnavailable)
    try:
        data = json.loads(out.decode())
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise UnreadableMedia(f"{path}: malformed probe output") from exc
    if toolchain.kind == "ffmpeg":
        return _parse_ffprobe(data, path)
    try:
        return MediaInfo(
            duration=float(data["duration"]),
            fps=float(data["fps"]),
            width=int(data["width"]),
            height=int(data["height"]),
            sample_rate=int(data["sample_rate"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise UnreadableMedia(f"{path}: incomplete probe output") from exc


def _parse_ffprobe(data: dict, path: Path) -> MediaInfo:
    video = audio = None
    for stream in data.get("streams", []):
        if stream.get("codec_type") == "video" and video is None:
            video = stream
        elif stream.get("codec_type") == "audio" and audio is None:
            audio = stream
    if video is None:
        raise UnreadableMedia(f"{path}: no video stream")
    num, _, den = str(video.get("r_frame_rate", "0/1")).partition("/")
    fps = float(num) / float(den or 1)
    return MediaInfo(
        duration=float(data.get("format", {}).get("duration", 0.0)),
        fps=fps,
        width=int(video["width"]),
        height=int(video["height"]),
        sample_rate=int(audio["sample_rate"]) if audio else 0,
    )


def _check_range(start: float, end: float, duration: float) -> None:
    if start < 0 or end < start:
        raise RangeOutOfBounds(f"invalid range [{start}, {end}]")
    if end > duration + _EPS:
        raise RangeOutOfBounds(f"range end {end} beyond duration {duration}")


def decode_frames(
    path: Path | str,
    start: float,
    end: float,
    *,
    toolchain: MediaToolchain,
    info: MediaInfo | None = None,
    stride: int = 1,
) -> Iterator[Frame]:
    """Stream frames with timestamps in [start, end), every stride-th.

    Frame indices refer to the source frame numbering, so stride 10 over a
    full decode yields indices 0, 10, 20, ...
    """
    path = Path(path)
    if stride < 1:
        raise ValueError("stride must be >= 1")
    if info is None:
        info = probe(path, toolchain)
    _check_range(start, end, info.duration)
    frame_bytes = info.width * info.height * 3
    first = max(0, int(np.ceil(start * info.fps - _EPS)))
    cmd = toolchain.render(
        toolchain.frames_cmd, input=path, start=start, end=end, stride=stride
    )
    try:
        proc = subprocess.Popen(cmd, stdout=subprocess.PIPE, stderr=subprocess.PIPE)
    except FileNotFoundError as exc:
        raise DecoderUnavailable(f"command not found: {cmd[0]}") from exc
    assert proc.stdout is not None
    try:
        emitted = 0
        while True:
            buf = proc.stdout.read(frame_bytes)
            if not buf:
                break
            if len(buf) != frame_bytes:
                proc.kill()
                raise UnreadableMedia(f"{path}: truncated frame from decoder")
            index = first + emitted * stride
            pixels = np.frombuffer(buf, dtype=np.uint8).reshape(
                info.height, info.width, 3
            )
            yield Frame(index=index, timestamp=index / info.fps, pixels=pixels)
            emitted += 1
        stderr = proc.stderr.read() if proc.stderr else b""
        if proc.wait() != 0:
            raise UnreadableMedia(stderr.decode(errors="replace").strip() or "decoder failed")
    finally:
        if proc.poll() is None:
            proc.kill()
            proc.wait()


def decode_audio(
    path: Path | str,
    start: float,
    end: float,
    *,
    toolchain: MediaToolchain,
    info: MediaInfo | None = None,
    sample_rate: int | None = None,
) -> AudioBuffer:
    """Decode a time range to mono PCM, downmixing by channel average."""
    path = Path(path)
    if info is None:
        info = probe(path, toolchain)
    _check_range(start, end, info.duration)
    rate = sample_rate or info.sample_rate
    if end - start <= 0:
        return AudioBuffer(rate, np.zeros(0, dtype=np.int16))
    cmd = toolchain.render(
        toolchain.audio_cmd, input=path, start=start, end=end, rate=rate
    )
    out = _run_capture(cmd, DecoderUnavailable)
    return AudioBuffer(rate, np.frombuffer(out, dtype="<i2"))


def render_thumbnail(
    frame: Frame,
    out_path: Path | str,
    *,
    max_width: int | None = None,
    image_format: str | None = None,
) -> Path:
    """Write a still of the frame, scaled down to max_width keeping aspect."""
    out_path = Path(out_path)
    image = Image.fromarray(frame.pixels, mode="RGB")
    if max_width is not None and frame.width > max_width:
        height = round(frame.height * max_width / frame.width)
        image = image.resize((max_width, height), Image.LANCZOS)
    try:
        image.save(out_path, format=image_format)
    except (KeyError, ValueError) as exc:
        raise EncoderUnavailable(f"unsupported image format for {out_path.name}") from exc
    except OSError as exc:
        raise WriteFailed(f"cannot write {out_path}: {exc}") from exc
    return out_path


def audio_file_duration(path: Path | str) -> float:
    """Duration of a 16-bit PCM WAV file in seconds."""
    with wave.open(str(path), "rb") as wf:
        return wf.getnframes() / wf.getframerate()


def mux_clip(
    source_path: Path | str,
    start: float,
    end: float,
    narration_path: Path | str,
    out_path: Path | str,
    *,
    toolchain: MediaToolchain,
    info: MediaInfo | None = None,
    narration_duration: float | None = None,
) -> tuple[Path, float]:
    """Combine a source video interval with a narration track.

    The clip lasts exactly as long as the narration (within 50 ms); when the
    narration outruns the interval the final frame is held frozen.  Returns
    the output path and its re-probed duration.
    """
    source_path = Path(source_path)
    narration_path = Path(narration_path)
    out_path = Path(out_path)
    if not narration_path.exists():
        raise FileNotFoundError(narration_path)
    if info is None:
        info = probe(source_path, toolchain)
    _check_range(start, end, info.duration)
    if narration_duration is None:
        narration_duration = audio_file_duration(narration_path)
    freeze = max(0.0, narration_duration - (end - start))
    cmd = toolchain.render(
        toolchain.mux_cmd,
        input=source_path,
        start=start,
        end=end,
        narration=narration_path,
        out=out_path,
        duration=narration_duration,
        freeze=freeze,
    )
    try:
        proc = subprocess.run(cmd, capture_output=True)
    except FileNotFoundError as exc:
        raise MuxerUnavailable(f"command not found: {cmd[0]}") from exc
    if proc.returncode != 0:
        raise WriteFailed(proc.stderr.decode(errors="replace").strip() or "mux failed")
    if not out_path.exists():
        raise WriteFailed(f"muxer produced no output at {out_path}")
    clip_info = probe(out_path, toolchain)
    return out_path, clip_info.duration


def toolchain_available(toolchain: MediaToolchain) -> bool:
    """True when the toolchain's commands can be spawned."""
    first = toolchain.probe_cmd[0]
    if first == sys.executable:
        return True
    return shutil.which(first) is not None
