"""End-to-end walkthrough on a synthetic lecture.

Builds a 60 s raw-container video (three solid-color scenes with distinct
tones, hard cuts at 20 s and 40 s), runs the full pipeline with the built-in
mock adapters, and prints what came out.  Everything runs offline.

    python demos/run_pipeline.py [workdir]
"""

import json
import sys
import tempfile
from pathlib import Path

import numpy as np

from vidskim import rawmedia
from vidskim.catalog import load_manifest
from vidskim.config import PipelineConfig
from vidskim.pipeline import process

SCENES = (
    ((16, 32, 64), 220.0),    # dark blue slide, 220 Hz speaker tone
    ((160, 96, 192), 440.0),  # purple slide, 440 Hz
    ((80, 208, 16), 880.0),   # green slide, 880 Hz
)
SCENE_SECONDS = 20.0
FPS = 10.0
RATE = 16000


def build_video(path: Path) -> Path:
    frames = []
    audio = []
    for color, tone in SCENES:
        n = int(SCENE_SECONDS * FPS)
        block = np.empty((n, 240, 320, 3), dtype=np.uint8)
        block[:] = np.array(color, dtype=np.uint8)
        frames.append(block)
        t = np.arange(int(SCENE_SECONDS * RATE)) / RATE
        audio.append((8000 * np.sin(2 * np.pi * tone * t)).astype(np.int16))
    return rawmedia.write_raw_media(
        path, np.concatenate(frames), np.concatenate(audio), fps=FPS, sample_rate=RATE
    )


def main() -> None:
    workdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp(prefix="vidskim_demo_"))
    workdir.mkdir(parents=True, exist_ok=True)

    video = build_video(workdir / "lecture60.rvm")
    print(f"built fixture: {video}")

    manifest_dir, report = process(video, PipelineConfig(), workdir / "out")
    print(f"\nprocessed into: {manifest_dir}\n")

    manifest = load_manifest(manifest_dir)
    for entry in manifest.segments:
        print(f"chapter {entry.index}: [{entry.start:6.2f}s .. {entry.end:6.2f}s]  {entry.title}")
        print(f"    budget: {entry.budget}")
        print(f"    summary: {' '.join(entry.summary_text.split()[:8])} ...")
        print(f"    clip: {entry.summary_clip}  thumbnail: {entry.thumbnail}")

    print(f"\ncompression ratio: {report.compression_ratio:.3f} "
          f"({report.summary_total:.1f}s of summary for {report.original_total:.1f}s of video)")
    print("\nfull report:")
    print(json.dumps(report.to_dict()["segments"][0], indent=2))
    print(f"\nnext: vidskim serve --root {manifest_dir.parent} --port 8080")


if __name__ == "__main__":
    main()
