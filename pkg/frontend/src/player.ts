/**
 * Chaptered playback controller.
 *
 * Owns the player state (current segment, summary/original mode, rate) and
 * drives a media element: summary mode plays the chapter's narrated clip,
 * original mode plays the shared source file seeked to the chapter bounds.
 * Mode and segment are independent: toggling never changes the chapter,
 * selecting a chapter never changes the mode, except that a chapter without
 * a summary falls back to original (the toggle is disabled there).
 */

import type { Manifest, PlayMode, PlaybackRate, SegmentEntry } from "./types.js";
import { hasSummary } from "./types.js";

/** The slice of HTMLMediaElement the controller needs (stubbed in tests). */
export interface MediaSurface {
  src: string;
  currentTime: number;
  playbackRate: number;
  paused: boolean;
  play(): Promise<void> | void;
  pause(): void;
  addEventListener(type: string, listener: () => void): void;
}

export interface PlayerState {
  videoId: string;
  segmentIndex: number;
  mode: PlayMode;
  playbackRate: PlaybackRate;
  /** current position within the playing source, seconds */
  position: number;
  /** true after the last chapter finished; the replay control is shown */
  finished: boolean;
}

export type MediaUrlResolver = (relpath: string) => string;

const END_EPSILON = 1e-3;

export class PlayerController {
  private segmentIndex = 0;
  private mode: PlayMode = "summary";
  private rate: PlaybackRate = 1;
  private finished = false;
  private pendingSeek: number | null = null;
  private listeners: Array<(state: PlayerState) => void> = [];

  constructor(
    private readonly media: MediaSurface,
    private readonly manifest: Manifest,
    private readonly urlFor: MediaUrlResolver,
  ) {
    media.addEventListener("ended", () => this.handleEnded());
    media.addEventListener("timeupdate", () => this.handleTimeUpdate());
    media.addEventListener("loadedmetadata", () => {
      if (this.pendingSeek !== null) {
        this.media.currentTime = this.pendingSeek;
        this.pendingSeek = null;
      }
    });
    this.mode = hasSummary(this.segment(0)) ? "summary" : "original";
    this.applySegment(false);
  }

  get state(): PlayerState {
    return {
      videoId: this.manifest.video_id,
      segmentIndex: this.segmentIndex,
      mode: this.mode,
      playbackRate: this.rate,
      position: this.media.currentTime,
      finished: this.finished,
    };
  }

  get currentSegment(): SegmentEntry {
    return this.segment(this.segmentIndex);
  }

  /** Whether the toggle is available for the current chapter. */
  get canToggle(): boolean {
    return hasSummary(this.currentSegment);
  }

  onChange(listener: (state: PlayerState) => void): void {
    this.listeners.push(listener);
  }

  selectSegment(index: number, autoplay = true): void {
    if (index < 0 || index >= this.manifest.segments.length) {
      throw new RangeError(`segment ${index} out of range`);
    }
    this.segmentIndex = index;
    if (this.mode === "summary" && !hasSummary(this.segment(index))) {
      this.mode = "original"; // documented fallback for degraded chapters
    }
    this.finished = false;
    this.applySegment(autoplay);
  }

  toggleMode(): void {
    if (!this.canToggle) {
      return; // disabled, not an error
    }
    this.mode = this.mode === "summary" ? "original" : "summary";
    this.finished = false;
    this.applySegment(true);
  }

  setPlaybackRate(rate: PlaybackRate): void {
    this.rate = rate;
    this.media.playbackRate = rate;
    this.notify();
  }

  replay(): void {
    this.selectSegment(0);
  }

  private segment(index: number): SegmentEntry {
    const segment = this.manifest.segments[index];
    if (!segment) {
      throw new RangeError(`segment ${index} out of range`);
    }
    return segment;
  }

  private applySegment(autoplay: boolean): void {
    const segment = this.currentSegment;
    if (this.mode === "summary" && segment.summary_clip) {
      this.setSource(this.urlFor(segment.summary_clip), 0);
    } else {
      this.setSource(this.urlFor(segment.original_clip), segment.start);
    }
    this.media.playbackRate = this.rate;
    if (autoplay) {
      void this.media.play();
    }
    this.notify();
  }

  private setSource(url: string, position: number): void {
    if (this.media.src !== url) {
      this.media.src = url;
      // browsers apply seeks reliably only once metadata is in
      this.pendingSeek = position;
    }
    this.media.currentTime = position;
  }

  private handleEnded(): void {
    this.advance();
  }

  private handleTimeUpdate(): void {
    if (this.mode !== "original" || this.finished) {
      return;
    }
    // original mode plays only the chapter's slice of the source file
    if (this.media.currentTime >= this.currentSegment.end - END_EPSILON) {
      this.advance();
    }
  }

  private advance(): void {
    const next = this.segmentIndex + 1;
    if (next >= this.manifest.segments.length) {
      this.finished = true;
      this.media.pause();
      this.notify();
      return;
    }
    this.selectSegment(next);
  }

  private notify(): void {
    const snapshot = this.state;
    for (const listener of this.listeners) {
      listener(snapshot);
    }
  }
}
