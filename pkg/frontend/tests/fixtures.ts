import type { Manifest, SegmentEntry } from "../src/types.js";
import type { MediaSurface } from "../src/player.js";

export function makeSegment(index: number, overrides: Partial<SegmentEntry> = {}): SegmentEntry {
  return {
    index,
    title: `Chapter on tone${index}`,
    start: index * 20,
    end: (index + 1) * 20,
    summary_text: `tone${index} segment overview words`,
    summary_clip: `clips/seg_00${index}.rvm`,
    original_clip: "source.rvm",
    thumbnail: `thumbs/seg_00${index}.png`,
    transcript: `tone${index} lecture words spoken here`,
    ocr_text: `slide${index} heading alpha beta`,
    object_labels: [`board${index}`, "presenter"],
    budget: { l_t: 40, l_o: 2, l_c: 10, n: 50 },
    ...overrides,
  };
}

export function makeManifest(options: { degraded?: number[] } = {}): Manifest {
  const degraded = new Set(options.degraded ?? []);
  const segments = [0, 1, 2].map((i) =>
    degraded.has(i)
      ? makeSegment(i, { title: null, summary_text: null, summary_clip: null, budget: null })
      : makeSegment(i),
  );
  return {
    schema_version: 1,
    video_id: "lecture60",
    source_path: "/in/lecture60.rvm",
    duration: 60,
    created_at: "2024-01-01T00:00:00+00:00",
    config_fingerprint: "fp",
    segments,
  };
}

/** Minimal media element double; tests fire its events by hand. */
export class FakeMedia implements MediaSurface {
  src = "";
  currentTime = 0;
  playbackRate = 1;
  paused = true;
  playCalls = 0;
  private listeners = new Map<string, Array<() => void>>();

  play(): void {
    this.paused = false;
    this.playCalls += 1;
  }

  pause(): void {
    this.paused = true;
  }

  addEventListener(type: string, listener: () => void): void {
    const bucket = this.listeners.get(type) ?? [];
    bucket.push(listener);
    this.listeners.set(type, bucket);
  }

  emit(type: string): void {
    for (const listener of this.listeners.get(type) ?? []) {
      listener();
    }
  }

  /** Simulate playback reaching a position in the current source. */
  playTo(seconds: number): void {
    this.currentTime = seconds;
    this.emit("timeupdate");
  }
}

export const urlFor = (rel: string): string => `/media/lecture60/${rel}`;
