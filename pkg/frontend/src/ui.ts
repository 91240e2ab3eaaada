/**
 * DOM components: segment browser (thumbnails, titles, summary text),
 * summary/original controls with speed selector, keyword search, banner.
 */

import type { ApiClient } from "./api.js";
import type { Manifest, SearchHit, SegmentEntry } from "./types.js";
import { PLAYBACK_RATES, hasSummary, segmentTitle } from "./types.js";
import type { PlayerController, PlayerState } from "./player.js";

export function showBanner(element: HTMLElement, message: string): void {
  element.textContent = message;
  element.hidden = false;
}

export function clearBanner(element: HTMLElement): void {
  element.textContent = "";
  element.hidden = true;
}

/** Chapter cards in segment order; clicking one plays that chapter. */
export class SegmentBrowser {
  private cards: HTMLElement[] = [];

  constructor(
    private readonly container: HTMLElement,
    private readonly manifest: Manifest,
    private readonly api: ApiClient,
    private readonly onSelect: (index: number) => void,
  ) {}

  render(): void {
    this.container.textContent = "";
    this.cards = this.manifest.segments.map((segment) => this.buildCard(segment));
    for (const card of this.cards) {
      this.container.appendChild(card);
    }
  }

  private buildCard(segment: SegmentEntry): HTMLElement {
    const card = document.createElement("article");
    card.className = "segment-card";
    card.dataset.index = String(segment.index);

    const thumb = document.createElement("img");
    thumb.className = "segment-thumb";
    thumb.src = this.api.mediaUrl(this.manifest.video_id, segment.thumbnail);
    thumb.alt = segmentTitle(segment);
    card.appendChild(thumb);

    const title = document.createElement("h3");
    title.className = "segment-title";
    title.textContent = segmentTitle(segment);
    card.appendChild(title);

    if (!hasSummary(segment)) {
      const badge = document.createElement("span");
      badge.className = "badge original-only";
      badge.textContent = "original only";
      card.appendChild(badge);
    }

    const text = document.createElement("p");
    text.className = "segment-summary";
    text.textContent = segment.summary_text ?? "";
    card.appendChild(text);

    card.addEventListener("click", () => this.onSelect(segment.index));
    return card;
  }

  setActive(index: number): void {
    this.cards.forEach((card, i) => card.classList.toggle("active", i === index));
  }

  setHighlights(indexes: Set<number>): void {
    this.cards.forEach((card, i) =>
      card.classList.toggle("search-hit", indexes.has(i)),
    );
  }
}

/** Summary/Original buttons, playback speed, replay, current chapter title. */
export class PlayerControls {
  constructor(
    private readonly titleEl: HTMLElement,
    private readonly summaryBtn: HTMLButtonElement,
    private readonly originalBtn: HTMLButtonElement,
    private readonly rateSelect: HTMLSelectElement,
    private readonly replayBtn: HTMLButtonElement,
    private readonly player: PlayerController,
  ) {
    for (const rate of PLAYBACK_RATES) {
      const option = document.createElement("option");
      option.value = String(rate);
      option.textContent = `${rate}x`;
      if (rate === 1) option.selected = true;
      rateSelect.appendChild(option);
    }
    summaryBtn.addEventListener("click", () => {
      if (player.state.mode !== "summary") player.toggleMode();
    });
    originalBtn.addEventListener("click", () => {
      if (player.state.mode !== "original") player.toggleMode();
    });
    rateSelect.addEventListener("change", () => {
      const rate = Number(rateSelect.value);
      if ((PLAYBACK_RATES as readonly number[]).includes(rate)) {
        player.setPlaybackRate(rate as (typeof PLAYBACK_RATES)[number]);
      }
    });
    replayBtn.addEventListener("click", () => player.replay());
    player.onChange((state) => this.update(state));
    this.update(player.state);
  }

  update(state: PlayerState): void {
    this.titleEl.textContent = segmentTitle(this.player.currentSegment);
    const toggleable = this.player.canToggle;
    this.summaryBtn.disabled = !toggleable || state.mode === "summary";
    this.originalBtn.disabled = state.mode === "original";
    this.summaryBtn.classList.toggle("active", state.mode === "summary");
    this.originalBtn.classList.toggle("active", state.mode === "original");
    this.replayBtn.hidden = !state.finished;
  }
}

/** Keyword search over the current video; clicking a hit plays its chapter. */
export class SearchPanel {
  private requestEpoch = 0;

  constructor(
    private readonly form: HTMLFormElement,
    private readonly input: HTMLInputElement,
    private readonly results: HTMLElement,
    private readonly runSearch: (query: string) => Promise<SearchHit[]>,
    private readonly onPick: (index: number) => void,
    private readonly onHits: (indexes: Set<number>) => void,
    private readonly onError: (message: string) => void,
  ) {
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.submit();
    });
  }

  async submit(): Promise<void> {
    const query = this.input.value.trim();
    if (!query) {
      return; // empty submit is a no-op
    }
    const epoch = ++this.requestEpoch;
    let hits: SearchHit[];
    try {
      hits = await this.runSearch(query);
    } catch (err) {
      if (epoch === this.requestEpoch) {
        this.onError(`search failed: ${err instanceof Error ? err.message : err}`);
      }
      return; // prior highlights are retained
    }
    if (epoch !== this.requestEpoch) {
      return; // a newer search superseded this response
    }
    this.renderHits(hits);
    this.onHits(new Set(hits.map((hit) => hit.segment_index)));
  }

  private renderHits(hits: SearchHit[]): void {
    this.results.textContent = "";
    if (hits.length === 0) {
      const notice = document.createElement("p");
      notice.className = "no-results";
      notice.textContent = "no results";
      this.results.appendChild(notice);
      return;
    }
    for (const hit of hits) {
      const item = document.createElement("button");
      item.type = "button";
      item.className = "search-result";
      item.dataset.segment = String(hit.segment_index);
      item.textContent = `#${hit.segment_index + 1} (${hit.field}): …${hit.snippet}…`;
      item.addEventListener("click", () => this.onPick(hit.segment_index));
      this.results.appendChild(item);
    }
  }
}
