"""How chapter boundaries come together, cue by cue.

Runs the two detectors over synthetic material and shows the fusion step:
color-histogram scene cuts, windowed-RMS silences, and the greedy pruning
that turns both into chapters.

    python demos/segmentation_walkthrough.py
"""

import numpy as np

from vidskim.media import AudioBuffer, Frame
from vidskim.segmentation import (
    compute_histogram,
    detect_scene_cuts,
    detect_silences,
    fuse_boundaries,
    histogram_distance,
)

RATE = 16000


def solid(color, count):
    block = np.empty((count, 24, 32, 3), dtype=np.uint8)
    block[:] = np.array(color, dtype=np.uint8)
    return block


def tone(freq, seconds, amplitude=12000):
    t = np.arange(int(seconds * RATE)) / RATE
    return (amplitude * np.sin(2 * np.pi * freq * t)).astype(np.int16)


def main() -> None:
    print("== histogram distances ==")
    black = Frame(0, 0.0, solid((0, 0, 0), 1)[0])
    white = Frame(1, 0.1, solid((255, 255, 255), 1)[0])
    grayish = Frame(2, 0.2, solid((8, 8, 8), 1)[0])
    hb, hw, hg = (compute_histogram(f) for f in (black, white, grayish))
    print(f"black vs white:  {histogram_distance(hb, hw):.3f}  (disjoint bins -> 1.0)")
    print(f"black vs near-black: {histogram_distance(hb, hg):.3f}  (same bins -> 0.0)")

    print("\n== scene cuts on a three-scene stream (10 fps) ==")
    stack = np.concatenate([solid((20, 20, 20), 80), solid((200, 60, 60), 70),
                            solid((60, 60, 220), 90)])
    frames = [Frame(i, i / 10.0, stack[i]) for i in range(stack.shape[0])]
    cuts = detect_scene_cuts(frames, threshold=0.4, min_gap=2.0)
    for cut in cuts:
        print(f"cut at frame {cut.frame_index} (t={cut.time:.1f}s, score={cut.score:.2f})")

    print("\n== silences in speech with two pauses ==")
    audio = AudioBuffer(RATE, np.concatenate([
        tone(300, 6.0), np.zeros(int(0.9 * RATE), np.int16),
        tone(300, 5.0), np.zeros(int(1.4 * RATE), np.int16),
        tone(300, 10.7),
    ]))
    silences = detect_silences(audio, threshold_db=-40.0, min_duration=0.5)
    for s in silences:
        print(f"silence [{s.start:5.2f}s .. {s.end:5.2f}s] (midpoint {s.midpoint:.2f}s)")

    print("\n== fusion: cuts + silence midpoints, pruned to min_segment ==")
    segments = fuse_boundaries(cuts, silences, duration=24.0, min_segment=5.0)
    for seg in segments:
        print(f"chapter {seg.index}: [{seg.start:5.2f}s .. {seg.end:5.2f}s] "
              f"({seg.duration:.2f}s)")
    print("\nnote how candidates closer than min_segment to a neighbour are",
          "dropped left to right, so chapters always tile the full duration.")


if __name__ == "__main__":
    main()
