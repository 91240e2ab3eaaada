"""Uncompressed media container (.rvm) and the command-line tool around it.

The toolchain talks to decoders through external commands that stream raw
RGB frames and s16le PCM over pipes (see `vidskim.media`).  ffmpeg fills that
role for real containers; this module provides a dependency-free stand-in
used by the test fixtures and the offline demos.  ``python -m vidskim.rawmedia``
exposes the same four operations the command templates expect:

    probe  <file>                                  -> JSON media info on stdout
    frames <file> --start S --end E --stride K     -> raw RGB24 frames on stdout
    audio  <file> --start S --end E [--rate R]     -> s16le mono PCM on stdout
    mux    <file> --start S --end E --narration N.wav --out OUT

File layout: magic ``RVM1``, a little-endian uint32 header length, a JSON
header, then ``frame_count`` frames of width*height*3 bytes, then interleaved
s16le samples (``sample_count`` per channel).
"""

from __future__ import annotations

import argparse
import json
import struct
import sys
import wave
from dataclasses import dataclass
from pathlib import Path

import numpy as np

MAGIC = b"RVM1"

_EPS = 1e-9


@dataclass(frozen=True)
class RawMediaHeader:
    width: int
    height: int
    fps: float
    frame_count: int
    sample_rate: int
    channels: int
    sample_count: int

    @property
    def video_duration(self) -> float:
        return self.frame_count / self.fps

    @property
    def audio_duration(self) -> float:
        return self.sample_count / self.sample_rate

    @property
    def duration(self) -> float:
        return max(self.video_duration, self.audio_duration)

    @property
    def frame_bytes(self) -> int:
        return self.width * self.height * 3


def write_raw_media(
    path: Path | str,
    frames: np.ndarray,
    audio: np.ndarray,
    *,
    fps: float,
    sample_rate: int,
) -> Path:
    """Write an .rvm file.

    ``frames`` is (n, height, width, 3) uint8; ``audio`` is (samples,) mono or
    (samples, channels) int16.
    """
    path = Path(path)
    frames = np.ascontiguousarray(frames, dtype=np.uint8)
    audio = np.ascontiguousarray(audio, dtype=np.int16)
    if frames.ndim != 4 or frames.shape[3] != 3:
        raise ValueError("frames must have shape (n, h, w, 3)")
    if audio.ndim == 1:
        audio = audio[:, None]
    header = RawMediaHeader(
        width=int(frames.shape[2]),
        height=int(frames.shape[1]),
        fps=float(fps),
        frame_count=int(frames.shape[0]),
        sample_rate=int(sample_rate),
        channels=int(audio.shape[1]),
        sample_count=int(audio.shape[0]),
    )
    head = json.dumps(header.__dict__).encode()
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", len(head)))
        fh.write(head)
        fh.write(frames.tobytes())
        fh.write(audio.tobytes())
    return path


def read_header(path: Path | str) -> tuple[RawMediaHeader, int]:
    """Return the header and the byte offset where frame data starts."""
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != MAGIC:
            raise ValueError(f"{path}: not a raw media file")
        (head_len,) = struct.unpack("<I", fh.read(4))
        head = json.loads(fh.read(head_len))
    return RawMediaHeader(**head), 8 + head_len


def read_frames(path: Path | str, indices: "list[int] | None" = None) -> np.ndarray:
    """Load frames by index (all frames when indices is None)."""
    header, offset = read_header(path)
    fb = header.frame_bytes
    if indices is None:
        indices = list(range(header.frame_count))
    out = np.empty((len(indices), header.height, header.width, 3), dtype=np.uint8)
    with open(path, "rb") as fh:
        for row, idx in enumerate(indices):
            if not 0 <= idx < header.frame_count:
                raise ValueError(f"frame index {idx} out of range")
            fh.seek(offset + idx * fb)
            out[row] = np.frombuffer(fh.read(fb), dtype=np.uint8).reshape(
                header.height, header.width, 3
            )
    return out


def read_audio(path: Path | str) -> tuple[np.ndarray, int]:
    """Load the full audio track as (samples, channels) int16."""
    header, offset = read_header(path)
    with open(path, "rb") as fh:
        fh.seek(offset + header.frame_count * header.frame_bytes)
        raw = fh.read(header.sample_count * header.channels * 2)
    samples = np.frombuffer(raw, dtype="<i2").reshape(-1, header.channels)
    return samples, header.sample_rate


def read_wav(path: Path | str) -> tuple[np.ndarray, int]:
    """Read a 16-bit PCM WAV as (samples, channels) int16."""
    with wave.open(str(path), "rb") as wf:
        if wf.getsampwidth() != 2:
            raise ValueError(f"{path}: expected 16-bit PCM")
        rate = wf.getframerate()
        channels = wf.getnchannels()
        raw = wf.readframes(wf.getnframes())
    samples = np.frombuffer(raw, dtype="<i2").reshape(-1, channels)
    return samples, rate


def write_wav(path: Path | str, samples: np.ndarray, sample_rate: int) -> Path:
    """Write mono or interleaved int16 samples to a WAV file."""
    samples = np.ascontiguousarray(samples, dtype=np.int16)
    if samples.ndim == 1:
        samples = samples[:, None]
    with wave.open(str(path), "wb") as wf:
        wf.setnchannels(samples.shape[1])
        wf.setsampwidth(2)
        wf.setframerate(sample_rate)
        wf.writeframes(samples.tobytes())
    return Path(path)


def downmix(samples: np.ndarray) -> np.ndarray:
    """Average interleaved channels into mono int16."""
    if samples.ndim == 1 or samples.shape[1] == 1:
        return samples.reshape(-1).astype(np.int16)
    mono = samples.astype(np.float64).mean(axis=1)
    return np.clip(np.rint(mono), -32768, 32767).astype(np.int16)


def resample_linear(samples: np.ndarray, src_rate: int, dst_rate: int) -> np.ndarray:
    """Linear-interpolation resample of a mono int16 buffer."""
    if src_rate == dst_rate or len(samples) == 0:
        return samples.astype(np.int16)
    n_out = int(round(len(samples) * dst_rate / src_rate))
    src_t = np.arange(len(samples)) / src_rate
    dst_t = np.arange(n_out) / dst_rate
    out = np.interp(dst_t, src_t, samples.astype(np.float64))
    return np.clip(np.rint(out), -32768, 32767).astype(np.int16)


def frame_range_indices(
    header: RawMediaHeader, start: float, end: float, stride: int
) -> list[int]:
    """Frame indices whose timestamps fall in [start, end), every stride-th."""
    first = int(np.ceil(start * header.fps - _EPS))
    indices = []
    idx = max(0, first)
    while idx < header.frame_count and idx / header.fps < end - _EPS:
        indices.append(idx)
        idx += stride
    return indices


# --- CLI --------------------------------------------------------------------


def _cmd_probe(args: argparse.Namespace) -> int:
    header, _ = read_header(args.file)
    info = {
        "duration": header.duration,
        "fps": header.fps,
        "width": header.width,
        "height": header.height,
        "sample_rate": header.sample_rate,
    }
    sys.stdout.write(json.dumps(info))
    return 0


def _check_range(start: float, end: float, duration: float) -> None:
    if start < 0 or end < start or end > duration + 1e-6:
        raise ValueError(f"range [{start}, {end}] outside [0, {duration}]")


def _cmd_frames(args: argparse.Namespace) -> int:
    header, offset = read_header(args.file)
    _check_range(args.start, args.end, header.duration)
    if args.stride < 1:
        raise ValueError("stride must be >= 1")
    fb = header.frame_bytes
    out = sys.stdout.buffer
    with open(args.file, "rb") as fh:
        for idx in frame_range_indices(header, args.start, args.end, args.stride):
            fh.seek(offset + idx * fb)
            out.write(fh.read(fb))
    out.flush()
    return 0


def _cmd_audio(args: argparse.Namespace) -> int:
    header, _ = read_header(args.file)
    _check_range(args.start, args.end, header.duration)
    samples, src_rate = read_audio(args.file)
    lo = int(round(args.start * src_rate))
    hi = int(round(args.end * src_rate))
    mono = downmix(samples[lo:hi])
    rate = args.rate or src_rate
    mono = resample_linear(mono, src_rate, rate)
    sys.stdout.buffer.write(mono.astype("<i2").tobytes())
    sys.stdout.buffer.flush()
    return 0


def _cmd_mux(args: argparse.Namespace) -> int:
    header, _ = read_header(args.file)
    _check_range(args.start, args.end, header.duration)
    narration, narr_rate = read_wav(args.narration)
    narr_mono = downmix(narration)
    narr_duration = len(narr_mono) / narr_rate

    interval = frame_range_indices(header, args.start, args.end, 1)
    if not interval:
        raise ValueError("empty video interval")
    # Video never outruns the narration: floor to whole frames, then hold the
    # last frame when the narration is longer than the interval.
    target = int(narr_duration * header.fps + _EPS)
    indices = interval[:target]
    if len(indices) < target:
        indices = indices + [interval[-1]] * (target - len(indices))
    frames = read_frames(args.file, indices)
    write_raw_media(
        args.out, frames, narr_mono, fps=header.fps, sample_rate=narr_rate
    )
    return 0


def main(argv: "list[str] | None" = None) -> int:
    parser = argparse.ArgumentParser(prog="rawmedia")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("probe")
    p.add_argument("file")
    p.set_defaults(func=_cmd_probe)

    p = sub.add_parser("frames")
    p.add_argument("file")
    p.add_argument("--start", type=float, default=0.0)
    p.add_argument("--end", type=float, required=True)
    p.add_argument("--stride", type=int, default=1)
    p.set_defaults(func=_cmd_frames)

    p = sub.add_parser("audio")
    p.add_argument("file")
    p.add_argument("--start", type=float, default=0.0)
    p.add_argument("--end", type=float, required=True)
    p.add_argument("--rate", type=int, default=0)
    p.set_defaults(func=_cmd_audio)

    p = sub.add_parser("mux")
    p.add_argument("file")
    p.add_argument("--start", type=float, required=True)
    p.add_argument("--end", type=float, required=True)
    p.add_argument("--narration", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_mux)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, json.JSONDecodeError, wave.Error) as exc:
        print(f"rawmedia: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
