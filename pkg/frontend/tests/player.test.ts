import { describe, expect, it } from "vitest";

import { PlayerController } from "../src/player.js";
import { FakeMedia, makeManifest, urlFor } from "./fixtures.js";

function setup(options: { degraded?: number[] } = {}) {
  const media = new FakeMedia();
  const manifest = makeManifest(options);
  const player = new PlayerController(media, manifest, urlFor);
  return { media, manifest, player };
}

describe("initial load", () => {
  it("starts at segment 0 in summary mode when a summary exists", () => {
    const { media, player } = setup();
    expect(player.state.segmentIndex).toBe(0);
    expect(player.state.mode).toBe("summary");
    expect(media.src).toBe("/media/lecture60/clips/seg_000.rvm");
    expect(media.currentTime).toBe(0);
  });

  it("exposes the playback position in its state", () => {
    const { media, player } = setup();
    player.toggleMode(); // original
    media.playTo(12.5);
    expect(player.state.position).toBe(12.5);
  });

  it("falls back to original mode when segment 0 has no summary", () => {
    const { media, player } = setup({ degraded: [0] });
    expect(player.state.mode).toBe("original");
    expect(media.src).toBe("/media/lecture60/source.rvm");
    expect(media.currentTime).toBe(0);
  });
});

describe("toggle_mode", () => {
  it("preserves the segment index both ways", () => {
    const { player } = setup();
    player.selectSegment(2);
    expect(player.state.segmentIndex).toBe(2);
    player.toggleMode();
    expect(player.state.segmentIndex).toBe(2);
    expect(player.state.mode).toBe("original");
    player.toggleMode();
    expect(player.state.segmentIndex).toBe(2);
    expect(player.state.mode).toBe("summary");
  });

  it("original mode seeks the source to the segment start", () => {
    const { media, player } = setup();
    player.selectSegment(2);
    player.toggleMode();
    expect(media.src).toBe("/media/lecture60/source.rvm");
    expect(media.currentTime).toBe(40);
  });

  it("summary mode plays the segment clip from its start", () => {
    const { media, player } = setup();
    player.selectSegment(1);
    player.toggleMode(); // -> original, playing the source inside [20, 40)
    media.playTo(30);
    player.toggleMode(); // -> summary again
    expect(player.state.segmentIndex).toBe(1);
    expect(media.src).toBe("/media/lecture60/clips/seg_001.rvm");
    expect(media.currentTime).toBe(0);
  });

  it("is a no-op on segments without a summary", () => {
    const { media, player } = setup({ degraded: [1] });
    player.selectSegment(1);
    expect(player.state.mode).toBe("original");
    expect(player.canToggle).toBe(false);
    const before = media.src;
    player.toggleMode();
    expect(player.state.mode).toBe("original");
    expect(player.state.segmentIndex).toBe(1);
    expect(media.src).toBe(before);
  });
});

describe("select_segment and auto-advance", () => {
  it("keeps the current mode when selecting", () => {
    const { player } = setup();
    player.toggleMode(); // original
    player.selectSegment(2);
    expect(player.state.mode).toBe("original");
    expect(player.state.segmentIndex).toBe(2);
  });

  it("falls back to original when the target has no summary", () => {
    const { media, player } = setup({ degraded: [1] });
    expect(player.state.mode).toBe("summary");
    player.selectSegment(1);
    expect(player.state.mode).toBe("original");
    expect(media.src).toBe("/media/lecture60/source.rvm");
    expect(media.currentTime).toBe(20);
  });

  it("chains summary clips in order when each ends", () => {
    const { media, player } = setup();
    expect(media.src).toBe("/media/lecture60/clips/seg_000.rvm");
    media.emit("ended");
    expect(player.state.segmentIndex).toBe(1);
    expect(player.state.mode).toBe("summary");
    expect(media.src).toBe("/media/lecture60/clips/seg_001.rvm");
    media.emit("ended");
    expect(player.state.segmentIndex).toBe(2);
    expect(media.src).toBe("/media/lecture60/clips/seg_002.rvm");
  });

  it("stops after the last clip and offers replay", () => {
    const { media, player } = setup();
    player.selectSegment(2);
    media.emit("ended");
    expect(player.state.finished).toBe(true);
    expect(player.state.segmentIndex).toBe(2);
    expect(media.paused).toBe(true);
    player.replay();
    expect(player.state.finished).toBe(false);
    expect(player.state.segmentIndex).toBe(0);
  });

  it("advances out of a degraded chapter in original mode", () => {
    const { media, player } = setup({ degraded: [1] });
    player.selectSegment(1); // falls back to original
    media.playTo(39.999); // reaches segment 1 end in the source file
    expect(player.state.segmentIndex).toBe(2);
    expect(player.state.mode).toBe("original");
  });

  it("original mode never plays past the segment end without advancing", () => {
    const { media, player } = setup();
    player.toggleMode(); // original, segment 0 [0, 20)
    media.playTo(10);
    expect(player.state.segmentIndex).toBe(0);
    media.playTo(20.0);
    expect(player.state.segmentIndex).toBe(1);
    expect(media.currentTime).toBe(20); // next chapter starts where this ended
  });

  it("rejects out-of-range indexes", () => {
    const { player } = setup();
    expect(() => player.selectSegment(99)).toThrow(RangeError);
    expect(() => player.selectSegment(-1)).toThrow(RangeError);
  });
});

describe("playback rate", () => {
  it("defaults to 1x", () => {
    const { media, player } = setup();
    expect(player.state.playbackRate).toBe(1);
    expect(media.playbackRate).toBe(1);
  });

  it("persists across segment changes and toggles", () => {
    const { media, player } = setup();
    player.setPlaybackRate(1.5);
    expect(media.playbackRate).toBe(1.5);
    player.selectSegment(1);
    expect(media.playbackRate).toBe(1.5);
    player.toggleMode();
    expect(media.playbackRate).toBe(1.5);
    media.emit("ended"); // auto-advance keeps it too
    expect(media.playbackRate).toBe(1.5);
  });
});

describe("state notifications", () => {
  it("reports every transition to listeners", () => {
    const { player } = setup();
    const modes: string[] = [];
    player.onChange((state) => modes.push(`${state.segmentIndex}:${state.mode}`));
    player.selectSegment(1);
    player.toggleMode();
    expect(modes).toEqual(["1:summary", "1:original"]);
  });
});
