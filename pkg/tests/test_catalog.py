"""Manifest build/persist/search."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from vidskim.catalog import (
    BudgetInfo,
    Manifest,
    SegmentEntry,
    build_manifest,
    load_manifest,
    search,
    write_manifest,
)
from vidskim.errors import (
    CorruptManifest,
    EmptyQuery,
    MissingArtifact,
    SchemaVersionMismatch,
)
from vidskim.segmentation import Segment


def make_fixture_dir(tmp_path: Path, n: int = 3, *, degrade: "set[int]" = frozenset()):
    """Create media files + entry dicts for n segments of 20 s each."""
    (tmp_path / "clips").mkdir(exist_ok=True)
    (tmp_path / "thumbs").mkdir(exist_ok=True)
    (tmp_path / "source.rvm").write_bytes(b"src" * 100)
    segments = [Segment(index=i, start=20.0 * i, end=20.0 * (i + 1)) for i in range(n)]
    entries = {}
    for i in range(n):
        thumb = f"thumbs/seg_{i:03d}.png"
        (tmp_path / thumb).write_bytes(b"png")
        degraded = i in degrade
        clip = None
        if not degraded:
            clip = f"clips/seg_{i:03d}.rvm"
            (tmp_path / clip).write_bytes(b"clip" * 50)
        entries[i] = {
            "title": None if degraded else f"Chapter {i} on topic{i}",
            "summary_text": None if degraded else f"summary body {i} covers topic{i}",
            "summary_clip": clip,
            "original_clip": "source.rvm",
            "thumbnail": thumb,
            "transcript": f"transcript words tone{i} spoken here",
            "ocr_text": f"slide{i} bullet points",
            "object_labels": (f"board{i}", "presenter"),
            "budget": None if degraded else BudgetInfo(l_t=40, l_o=2, l_c=10, n=50),
        }
    return segments, entries


def make_manifest(tmp_path: Path, n: int = 3, **kwargs) -> Manifest:
    segments, entries = make_fixture_dir(tmp_path, n, **kwargs)
    return build_manifest(
        "vid1", "/src/video.rvm", 20.0 * n, "2024-01-01T00:00:00+00:00",
        "fp123", segments, entries, base_dir=tmp_path,
    )


class TestBuildManifest:
    def test_three_complete_segments(self, tmp_path):
        manifest = make_manifest(tmp_path)
        assert [e.index for e in manifest.segments] == [0, 1, 2]
        assert all(e.has_summary for e in manifest.segments)

    def test_missing_thumbnail_named(self, tmp_path):
        segments, entries = make_fixture_dir(tmp_path)
        (tmp_path / entries[1]["thumbnail"]).unlink()
        with pytest.raises(MissingArtifact) as err:
            build_manifest("vid1", "/src", 60.0, "t", "fp", segments, entries,
                           base_dir=tmp_path)
        assert err.value.segment_index == 1
        assert err.value.artifact == "thumbnail"

    def test_zero_segments_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            build_manifest("vid1", "/src", 60.0, "t", "fp", [], {}, base_dir=tmp_path)

    def test_degraded_entry_keeps_nulls(self, tmp_path):
        manifest = make_manifest(tmp_path, degrade={1})
        entry = manifest.segments[1]
        assert entry.title is None
        assert entry.summary_text is None
        assert entry.summary_clip is None
        assert entry.budget is None
        assert not entry.has_summary
        assert manifest.segments[0].has_summary


class TestManifestRoundTrip:
    def test_round_trip_equality(self, tmp_path):
        manifest = make_manifest(tmp_path)
        write_manifest(manifest, tmp_path)
        assert load_manifest(tmp_path) == manifest

    def test_round_trip_with_degraded(self, tmp_path):
        manifest = make_manifest(tmp_path, degrade={2})
        write_manifest(manifest, tmp_path)
        assert load_manifest(tmp_path) == manifest

    def test_unknown_schema_version(self, tmp_path):
        manifest = make_manifest(tmp_path)
        path = write_manifest(manifest, tmp_path)
        data = json.loads(path.read_text())
        data["schema_version"] = 99
        path.write_text(json.dumps(data))
        with pytest.raises(SchemaVersionMismatch):
            load_manifest(tmp_path)

    def test_truncated_file(self, tmp_path):
        manifest = make_manifest(tmp_path)
        path = write_manifest(manifest, tmp_path)
        path.write_text(path.read_text()[: len(path.read_text()) // 2])
        with pytest.raises(CorruptManifest):
            load_manifest(tmp_path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(CorruptManifest):
            load_manifest(tmp_path)

    def test_missing_field(self, tmp_path):
        manifest = make_manifest(tmp_path)
        path = write_manifest(manifest, tmp_path)
        data = json.loads(path.read_text())
        del data["segments"][0]["transcript"]
        path.write_text(json.dumps(data))
        with pytest.raises(CorruptManifest):
            load_manifest(tmp_path)

    def test_media_paths_cover_everything(self, tmp_path):
        manifest = make_manifest(tmp_path, degrade={1})
        paths = manifest.media_paths()
        assert "source.rvm" in paths
        assert "thumbs/seg_000.png" in paths
        assert "clips/seg_000.rvm" in paths
        assert "clips/seg_001.rvm" not in paths


class TestSearch:
    def test_hit_only_in_one_transcript(self, tmp_path):
        manifest = make_manifest(tmp_path)
        hits = search(manifest, "tone2")
        assert [(h.segment_index, h.field) for h in hits] == [(2, "transcript")]
        assert "tone2" in hits[0].snippet.lower()

    def test_title_ordered_before_transcript(self, tmp_path):
        segments, entries = make_fixture_dir(tmp_path)
        entries[0]["title"] = "All about DNA"
        entries[0]["transcript"] = "the dna molecule is discussed"
        manifest = build_manifest("vid1", "/src", 60.0, "t", "fp", segments,
                                  entries, base_dir=tmp_path)
        hits = search(manifest, "DNA")
        assert [h.field for h in hits[:2]] == ["title", "transcript"]
        assert hits[0].segment_index == 0

    def test_case_insensitive(self, tmp_path):
        manifest = make_manifest(tmp_path)
        assert search(manifest, "TONE1")
        assert search(manifest, "Slide0")

    def test_absent_query(self, tmp_path):
        manifest = make_manifest(tmp_path)
        assert search(manifest, "zebra-quux") == []

    def test_empty_query_rejected(self, tmp_path):
        manifest = make_manifest(tmp_path)
        with pytest.raises(EmptyQuery):
            search(manifest, "   ")

    def test_snippet_offsets_point_at_match(self, tmp_path):
        manifest = make_manifest(tmp_path)
        for hit in search(manifest, "presenter") + search(manifest, "bullet"):
            assert hit.snippet[hit.match_start:hit.match_end].lower() in (
                "presenter", "bullet"
            )

    def test_matches_brute_force_scan(self, tmp_path):
        manifest = make_manifest(tmp_path, degrade={1})
        for query in ("tone", "slide1", "summary", "chapter", "presenter", "zzz"):
            hits = search(manifest, query)
            expected = []
            for entry in manifest.segments:
                for field, text in (
                    ("title", entry.title or ""),
                    ("summary", entry.summary_text or ""),
                    ("transcript", entry.transcript),
                    ("ocr", entry.ocr_text),
                ):
                    if query.lower() in text.lower():
                        expected.append((entry.index, field))
            assert [(h.segment_index, h.field) for h in hits] == expected
