/** Thin client for the vidskim server; the UI talks to nothing else. */

import type { Manifest, SearchHit, VideoSummary } from "./types.js";

export class ApiError extends Error {
  constructor(message: string, readonly status?: number) {
    super(message);
    this.name = "ApiError";
  }
}

export class ApiClient {
  constructor(private readonly baseUrl: string = "") {}

  private async getJson<T>(path: string): Promise<T> {
    let response: Response;
    try {
      response = await fetch(this.baseUrl + path);
    } catch (err) {
      throw new ApiError(`server unreachable: ${String(err)}`);
    }
    if (!response.ok) {
      throw new ApiError(`${path} failed (${response.status})`, response.status);
    }
    return (await response.json()) as T;
  }

  listVideos(): Promise<VideoSummary[]> {
    return this.getJson("/api/videos");
  }

  fetchManifest(videoId: string): Promise<Manifest> {
    return this.getJson(`/api/videos/${encodeURIComponent(videoId)}/manifest`);
  }

  search(videoId: string, query: string): Promise<SearchHit[]> {
    const q = encodeURIComponent(query);
    return this.getJson(`/api/videos/${encodeURIComponent(videoId)}/search?q=${q}`);
  }

  /** URL for a manifest-relative media path. */
  mediaUrl(videoId: string, relpath: string): string {
    const parts = relpath.split("/").map(encodeURIComponent).join("/");
    return `${this.baseUrl}/media/${encodeURIComponent(videoId)}/${parts}`;
  }
}
