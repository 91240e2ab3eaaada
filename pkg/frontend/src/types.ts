/** Wire formats of the vidskim HTTP API. */

export interface VideoSummary {
  video_id: string;
  title: string;
  duration: number;
  segment_count: number;
}

export interface BudgetInfo {
  l_t: number;
  l_o: number;
  l_c: number;
  n: number;
}

export interface SegmentEntry {
  index: number;
  title: string | null;
  start: number;
  end: number;
  summary_text: string | null;
  summary_clip: string | null;
  original_clip: string;
  thumbnail: string;
  transcript: string;
  ocr_text: string;
  object_labels: string[];
  budget: BudgetInfo | null;
}

export interface Manifest {
  schema_version: number;
  video_id: string;
  source_path: string;
  duration: number;
  created_at: string;
  config_fingerprint: string;
  segments: SegmentEntry[];
}

export interface SearchHit {
  segment_index: number;
  field: string;
  snippet: string;
  match_start: number;
  match_end: number;
}

export type PlayMode = "summary" | "original";

export const PLAYBACK_RATES = [0.5, 1, 1.25, 1.5, 2] as const;
export type PlaybackRate = (typeof PLAYBACK_RATES)[number];

export function hasSummary(segment: SegmentEntry): boolean {
  return segment.summary_clip !== null && segment.summary_text !== null;
}

export function segmentTitle(segment: SegmentEntry): string {
  return segment.title ?? `Chapter ${segment.index + 1}`;
}
