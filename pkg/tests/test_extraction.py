"""Evidence extraction through the adapter protocol."""

from __future__ import annotations

import json
import sys
import textwrap

import numpy as np
import pytest

from tests.conftest import audio_buffer, frame_at, sine_samples, solid_frames
from vidskim.adapters import AdapterSpec
from vidskim.errors import AdapterFailure, AdapterTimeout, InconsistentSegment
from vidskim.extraction import (
    ObjectSet,
    OcrResult,
    Transcript,
    TranscriptPiece,
    aggregate_evidence,
    detect_objects,
    keyframe_times,
    ocr_segment,
    sample_keyframes,
    transcribe,
)
from vidskim.media import MediaToolchain, probe
from vidskim.segmentation import Segment

MOCK_ASR = AdapterSpec(kind="asr")
MOCK_OCR = AdapterSpec(kind="ocr")
MOCK_OBJDET = AdapterSpec(kind="objdet")


def scripted_adapter(tmp_path, kind: str, body: str) -> AdapterSpec:
    """Adapter whose behaviour is the given python body; request bound to `req`."""
    script = tmp_path / f"{kind}_adapter.py"
    script.write_text(
        "import json, sys\n"
        "req = json.loads(sys.stdin.read())\n" + textwrap.dedent(body)
    )
    return AdapterSpec(kind=kind, command=(sys.executable, str(script)))


def keyframes_of(colors, start_index=0):
    return [
        frame_at(start_index + i, solid_frames(color, 1, width=32, height=24)[0])
        for i, color in enumerate(colors)
    ]


class TestTranscribe:
    def test_mock_emits_words_at_fixed_rate(self, tmp_path):
        segment = Segment(index=0, start=0.0, end=20.0)
        audio = audio_buffer(sine_samples(440.0, 20.0))
        transcript = transcribe(audio, segment, MOCK_ASR, workdir=tmp_path)
        assert transcript.word_count == 40  # 2 words/s over 20 s
        assert transcript.text.startswith("tone440")
        assert transcript.pieces[0].start >= segment.start
        assert transcript.pieces[-1].end <= segment.end

    def test_silent_segment_yields_empty_transcript(self, tmp_path):
        segment = Segment(index=1, start=20.0, end=25.0)
        audio = audio_buffer(np.zeros(5 * 16000, dtype=np.int16))
        transcript = transcribe(audio, segment, MOCK_ASR, workdir=tmp_path)
        assert transcript.word_count == 0
        assert transcript.pieces == ()

    def test_malformed_response(self, tmp_path):
        adapter = scripted_adapter(tmp_path, "asr", "print('not json at all')")
        segment = Segment(index=0, start=0.0, end=1.0)
        with pytest.raises(AdapterFailure):
            transcribe(audio_buffer(sine_samples(440.0, 1.0)), segment, adapter,
                       workdir=tmp_path)

    def test_missing_segments_key(self, tmp_path):
        adapter = scripted_adapter(tmp_path, "asr", "print(json.dumps({'nope': 1}))")
        segment = Segment(index=0, start=0.0, end=1.0)
        with pytest.raises(AdapterFailure):
            transcribe(audio_buffer(sine_samples(440.0, 1.0)), segment, adapter,
                       workdir=tmp_path)

    def test_timeout(self, tmp_path, monkeypatch):
        monkeypatch.setenv("VIDSKIM_MOCK_SLEEP", "asr:5")
        adapter = AdapterSpec(kind="asr", timeout=0.4)
        segment = Segment(index=0, start=0.0, end=1.0)
        with pytest.raises(AdapterTimeout):
            transcribe(audio_buffer(sine_samples(440.0, 1.0)), segment, adapter,
                       workdir=tmp_path)

    def test_adapter_crash_surfaces_as_failure(self, tmp_path, monkeypatch):
        monkeypatch.setenv("VIDSKIM_MOCK_FAIL", "asr")
        segment = Segment(index=0, start=0.0, end=1.0)
        with pytest.raises(AdapterFailure):
            transcribe(audio_buffer(sine_samples(440.0, 1.0)), segment, MOCK_ASR,
                       workdir=tmp_path)


class TestOcrSegment:
    def _adapter_with_texts(self, tmp_path, texts_by_index):
        body = f"""
            texts = {texts_by_index!r}
            frames = [{{"lines": texts[i]}} for i in range(len(req["image_paths"]))]
            print(json.dumps({{"frames": frames}}))
        """
        return scripted_adapter(tmp_path, "ocr", body)

    def test_identical_slides_counted_once(self, tmp_path):
        lines = ["word" + " word" * 39]  # one 40-word line
        adapter = self._adapter_with_texts(tmp_path, [lines, lines, lines])
        segment = Segment(index=0, start=0.0, end=6.0)
        result = ocr_segment(keyframes_of([(90, 90, 90)] * 3), segment, adapter,
                             workdir=tmp_path)
        assert result.word_count == 40

    def test_two_distinct_slides_sum(self, tmp_path):
        a = ["alpha" + " alpha" * 39]
        b = ["beta" + " beta" * 39]
        adapter = self._adapter_with_texts(tmp_path, [a, a, b, b])
        segment = Segment(index=0, start=0.0, end=8.0)
        result = ocr_segment(keyframes_of([(90, 90, 90)] * 4), segment, adapter,
                             workdir=tmp_path)
        assert result.word_count == 80

    def test_multiline_slides_dedup_at_frame_level(self, tmp_path):
        block = ["first line here", "second line there"]
        adapter = self._adapter_with_texts(tmp_path, [block, block, block])
        segment = Segment(index=0, start=0.0, end=6.0)
        result = ocr_segment(keyframes_of([(90, 90, 90)] * 3), segment, adapter,
                             workdir=tmp_path)
        assert result.word_count == 6
        assert result.deduplicated_text == "first line here\nsecond line there"

    def test_blank_frames(self, tmp_path):
        segment = Segment(index=0, start=0.0, end=4.0)
        result = ocr_segment(keyframes_of([(0, 0, 0)] * 2), segment, MOCK_OCR,
                             workdir=tmp_path)
        assert result.word_count == 0
        assert result.deduplicated_text == ""

    def test_dedup_idempotence_with_mock(self, tmp_path):
        segment = Segment(index=0, start=0.0, end=10.0)
        one = ocr_segment(keyframes_of([(90, 120, 150)]), segment, MOCK_OCR,
                          workdir=tmp_path / "a")
        many = ocr_segment(keyframes_of([(90, 120, 150)] * 5), segment, MOCK_OCR,
                           workdir=tmp_path / "b")
        assert many.deduplicated_text == one.deduplicated_text
        assert many.word_count == one.word_count

    def test_frame_count_mismatch_is_failure(self, tmp_path):
        adapter = scripted_adapter(
            tmp_path, "ocr", "print(json.dumps({'frames': []}))"
        )
        segment = Segment(index=0, start=0.0, end=2.0)
        with pytest.raises(AdapterFailure):
            ocr_segment(keyframes_of([(90, 90, 90)]), segment, adapter,
                        workdir=tmp_path)


class TestDetectObjects:
    def _adapter_with_labels(self, tmp_path, labels_by_index):
        body = f"""
            labels = {labels_by_index!r}
            frames = [
                {{"labels": [{{"name": n, "confidence": c}} for n, c in labels[i]]}}
                for i in range(len(req["image_paths"]))
            ]
            print(json.dumps({{"frames": frames}}))
        """
        return scripted_adapter(tmp_path, "objdet", body)

    def test_repeated_labels_count_once(self, tmp_path):
        labels = [[("car", 0.9), ("person", 0.8)]] * 3
        adapter = self._adapter_with_labels(tmp_path, labels)
        segment = Segment(index=0, start=0.0, end=6.0)
        result = detect_objects(keyframes_of([(90, 90, 90)] * 3), segment, adapter,
                                workdir=tmp_path)
        assert result.distinct_count == 2

    def test_below_floor_excluded(self, tmp_path):
        adapter = self._adapter_with_labels(tmp_path, [[("car", 0.2)]])
        segment = Segment(index=0, start=0.0, end=2.0)
        result = detect_objects(keyframes_of([(90, 90, 90)]), segment, adapter,
                                workdir=tmp_path, confidence_floor=0.5)
        assert result.distinct_count == 0
        assert [l.name for l in result.labels] == ["car"]

    def test_union_across_keyframes(self, tmp_path):
        labels = [[("a", 0.9)], [("a", 0.9), ("b", 0.9)], [("c", 0.9)]]
        adapter = self._adapter_with_labels(tmp_path, labels)
        segment = Segment(index=0, start=0.0, end=6.0)
        result = detect_objects(keyframes_of([(90, 90, 90)] * 3), segment, adapter,
                                workdir=tmp_path)
        assert result.distinct_count == 3

    def test_per_frame_sum_mode(self, tmp_path):
        labels = [[("a", 0.9)], [("a", 0.9), ("b", 0.9)], [("c", 0.9)]]
        adapter = self._adapter_with_labels(tmp_path, labels)
        segment = Segment(index=0, start=0.0, end=6.0)
        result = detect_objects(keyframes_of([(90, 90, 90)] * 3), segment, adapter,
                                workdir=tmp_path, count_mode="per_frame_sum")
        assert result.distinct_count == 4


class TestSampleKeyframes:
    def test_default_rate_on_20s_segment(self, lecture_video, raw_toolchain):
        info = probe(lecture_video, raw_toolchain)
        segment = Segment(index=0, start=0.0, end=20.0)
        frames = sample_keyframes(lecture_video, segment, toolchain=raw_toolchain,
                                  info=info, interval=2.0)
        assert len(frames) == 10
        midpoint_idx = int(10.0 * info.fps)
        assert midpoint_idx in [f.index for f in frames]

    def test_short_segment_yields_midpoint_only(self, lecture_video, raw_toolchain):
        info = probe(lecture_video, raw_toolchain)
        segment = Segment(index=0, start=30.0, end=31.0)
        frames = sample_keyframes(lecture_video, segment, toolchain=raw_toolchain,
                                  info=info, interval=2.0)
        assert len(frames) == 1
        assert frames[0].index == int(30.5 * info.fps)

    def test_one_per_second_rate(self, lecture_video, raw_toolchain):
        info = probe(lecture_video, raw_toolchain)
        segment = Segment(index=0, start=0.0, end=20.0)
        frames = sample_keyframes(lecture_video, segment, toolchain=raw_toolchain,
                                  info=info, interval=1.0)
        assert len(frames) == 20

    def test_midpoint_added_when_off_grid(self):
        times = keyframe_times(Segment(index=0, start=0.0, end=21.0), 2.0)
        assert 10.5 in times
        assert len(times) == 11


class TestAggregateEvidence:
    def _children(self, index=0):
        transcript = Transcript(
            segment_index=index,
            pieces=(TranscriptPiece(text="hello world", start=0.5, end=1.5),),
            word_count=2,
        )
        ocr = OcrResult(segment_index=index, frame_texts=(("hi",),),
                        deduplicated_text="hi", word_count=1)
        objects = ObjectSet(segment_index=index, labels=(), confidence_floor=0.5,
                            distinct_count=0)
        return transcript, ocr, objects

    def test_counts_carried_through(self, ):
        segment = Segment(index=0, start=0.0, end=2.0)
        transcript, ocr, objects = self._children()
        evidence = aggregate_evidence(segment, transcript, ocr, objects)
        assert evidence.transcript.word_count == 2
        assert evidence.ocr.word_count == 1
        assert evidence.objects.distinct_count == 0

    def test_wrong_segment_rejected(self):
        segment = Segment(index=0, start=0.0, end=2.0)
        transcript, ocr, objects = self._children(index=3)
        with pytest.raises(InconsistentSegment):
            aggregate_evidence(segment, transcript, ocr, objects)

    def test_out_of_bounds_piece_rejected(self):
        segment = Segment(index=0, start=0.0, end=1.0)
        transcript = Transcript(
            segment_index=0,
            pieces=(TranscriptPiece(text="late", start=0.5, end=5.0),),
            word_count=1,
        )
        _, ocr, objects = self._children()
        with pytest.raises(InconsistentSegment):
            aggregate_evidence(segment, transcript, ocr, objects)

    def test_empty_children_valid(self):
        segment = Segment(index=0, start=0.0, end=2.0)
        transcript = Transcript(segment_index=0, pieces=(), word_count=0)
        ocr = OcrResult(segment_index=0, frame_texts=((),),
                        deduplicated_text="", word_count=0)
        objects = ObjectSet(segment_index=0, labels=(), confidence_floor=0.5,
                            distinct_count=0)
        evidence = aggregate_evidence(segment, transcript, ocr, objects)
        assert evidence.transcript.word_count == 0
        assert evidence.ocr.word_count == 0
        assert evidence.objects.distinct_count == 0

    def test_count_determinism_recompute(self):
        segment = Segment(index=0, start=0.0, end=2.0)
        transcript = Transcript(
            segment_index=0,
            pieces=(TranscriptPiece(text="three words here", start=0.0, end=1.0),),
            word_count=99,  # stale; aggregate recomputes
        )
        _, ocr, objects = self._children()
        evidence = aggregate_evidence(segment, transcript, ocr, objects)
        assert evidence.transcript.word_count == 3
