/**
 * Bootstrap: fetch the catalog, load a manifest, wire player + components.
 * The video is picked from ?video=<id>, falling back to the first available.
 */

import { ApiClient, ApiError } from "./api.js";
import { PlayerController } from "./player.js";
import { PlayerControls, SearchPanel, SegmentBrowser, clearBanner, showBanner } from "./ui.js";

function required<T extends HTMLElement>(root: ParentNode, selector: string): T {
  const el = root.querySelector<T>(selector);
  if (!el) throw new Error(`missing element: ${selector}`);
  return el;
}

export async function bootstrap(root: Document, api: ApiClient): Promise<PlayerController | null> {
  const banner = required<HTMLElement>(root, "#banner");
  clearBanner(banner);
  try {
    const videos = await api.listVideos();
    if (videos.length === 0) {
      showBanner(banner, "no processed videos on the server");
      return null;
    }
    const requested = new URLSearchParams(root.defaultView?.location.search ?? "").get("video");
    const videoId =
      videos.find((v) => v.video_id === requested)?.video_id ?? videos[0]!.video_id;
    const manifest = await api.fetchManifest(videoId);

    const media = required<HTMLVideoElement>(root, "#player");
    const player = new PlayerController(media, manifest, (rel) =>
      api.mediaUrl(videoId, rel),
    );

    const browser = new SegmentBrowser(
      required(root, "#segments"),
      manifest,
      api,
      (index) => player.selectSegment(index),
    );
    browser.render();
    browser.setActive(player.state.segmentIndex);
    player.onChange((state) => browser.setActive(state.segmentIndex));

    new PlayerControls(
      required(root, "#segment-title"),
      required(root, "#btn-summary"),
      required(root, "#btn-original"),
      required(root, "#rate"),
      required(root, "#btn-replay"),
      player,
    );

    new SearchPanel(
      required(root, "#search-form"),
      required(root, "#search-input"),
      required(root, "#search-results"),
      (query) => api.search(videoId, query),
      (index) => player.selectSegment(index),
      (indexes) => browser.setHighlights(indexes),
      (message) => showBanner(banner, message),
    );
    return player;
  } catch (err) {
    const detail = err instanceof ApiError ? err.message : String(err);
    showBanner(banner, `could not load video: ${detail}`);
    return null;
  }
}

if (typeof window !== "undefined" && !("__VIDSKIM_TEST__" in window)) {
  const api = new ApiClient(
    new URLSearchParams(window.location.search).get("api") ?? "",
  );
  void bootstrap(document, api);
}
