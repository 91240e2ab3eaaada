"""Summary length budgeting and LLM-driven summary generation.

The target word count for each chapter grows with the evidence available:
transcript words weighted by the speech coefficient, on-screen words and
object count weighted by the visual coefficient, clamped to a 50-word floor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .adapters import AdapterSpec, run_adapter
from .errors import AdapterFailure, EmptySummary
from .extraction import SegmentEvidence

DEFAULT_SPEECH_WEIGHT = 0.3
DEFAULT_VISUAL_WEIGHT = 2.5
MIN_SUMMARY_WORDS = 50

SUMMARY_INSTRUCTIONS = (
    "Using the provided transcription of spoken content, OCR-derived textual "
    "data, and object detection information, synthesize a comprehensive "
    "summary. This summary should highlight the key themes and actions "
    "depicted in the video. Focus on distilling the essence of the video by "
    "combining insights from the transcription (which captures the spoken "
    "words), the OCR data (which provides text found within the video), and "
    "object detection (which identifies significant objects and actions)."
)


@dataclass(frozen=True)
class SummaryBudget:
    """Inputs and result of the length computation for one segment."""

    transcript_words: int
    object_count: int
    ocr_words: int
    speech_weight: float
    visual_weight: float
    target_words: int


@dataclass(frozen=True)
class SummaryResult:
    title: str
    summary_text: str
    budget: SummaryBudget


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def compute_summary_budget(
    evidence: SegmentEvidence,
    speech_weight: float = DEFAULT_SPEECH_WEIGHT,
    visual_weight: float = DEFAULT_VISUAL_WEIGHT,
) -> SummaryBudget:
    """Target words = max(50, speech_weight*transcript_words +
    visual_weight*(object_count + ocr_words)), rounded half up."""
    if speech_weight < 0 or visual_weight < 0:
        raise ValueError("weights must be non-negative")
    transcript_words = evidence.transcript.word_count
    object_count = evidence.objects.distinct_count
    ocr_words = evidence.ocr.word_count
    raw = speech_weight * transcript_words + visual_weight * (object_count + ocr_words)
    target = max(MIN_SUMMARY_WORDS, _round_half_up(raw))
    return SummaryBudget(
        transcript_words=transcript_words,
        object_count=object_count,
        ocr_words=ocr_words,
        speech_weight=speech_weight,
        visual_weight=visual_weight,
        target_words=target,
    )


def _section(text: str) -> str:
    return text if text.strip() else "(none)"


def build_prompt(evidence: SegmentEvidence, budget: SummaryBudget) -> str:
    """Deterministic prompt: instructions, labelled evidence sections, the
    word-limit clause, and a title request."""
    objects = ", ".join(
        label.name
        for label in evidence.objects.labels
        if label.confidence >= evidence.objects.confidence_floor
    )
    return (
        f"{SUMMARY_INSTRUCTIONS}\n"
        "\n"
        "TRANSCRIPTION:\n"
        f"{_section(evidence.transcript.text)}\n"
        "\n"
        "OCR_TEXT:\n"
        f"{_section(evidence.ocr.deduplicated_text)}\n"
        "\n"
        "OBJECTS:\n"
        f"{_section(objects)}\n"
        "\n"
        f"Limit the summary to approximately {budget.target_words} words.\n"
        "Also provide a one-line title for this segment."
    )


def summarize_segment(
    prompt: str,
    budget: SummaryBudget,
    adapter: AdapterSpec,
) -> SummaryResult:
    """Call the LLM adapter; one retry when the response is malformed or the
    summary comes back empty."""
    request = {"prompt": prompt, "max_words": budget.target_words}
    last_error: Exception | None = None
    for _ in range(2):
        response = run_adapter(adapter, request)
        title = response.get("title")
        summary = response.get("summary")
        if not isinstance(title, str) or not isinstance(summary, str):
            last_error = AdapterFailure(
                adapter.kind, "response must carry both title and summary"
            )
            continue
        title = title.strip()
        summary = summary.strip()
        if not summary or not title:
            last_error = EmptySummary("adapter returned an empty summary")
            continue
        return SummaryResult(title=title, summary_text=summary, budget=budget)
    assert last_error is not None
    raise last_error
