"""Pipeline configuration.

One TOML document holds every tunable the processing stages read; anything
omitted falls back to the defaults below.  Adapter commands default to the
in-repo mocks so a fresh checkout can process fixtures offline.
"""

from __future__ import annotations

import hashlib
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .adapters import ADAPTER_KINDS, DEFAULT_TIMEOUT, MOCK_SENTINEL, AdapterSpec
from .media import MediaToolchain


@dataclass(frozen=True)
class SegmentationConfig:
    scene_threshold: float = 0.4
    scene_min_gap: float = 2.0
    histogram_bins: int = 16
    silence_threshold_db: float = -40.0
    silence_min_duration: float = 0.5
    silence_window: float = 0.02
    silence_hop: float = 0.01
    min_segment: float = 15.0
    boundary_mode: str = "union"  # or "intersection"


@dataclass(frozen=True)
class ExtractionConfig:
    keyframe_interval: float = 2.0
    object_confidence_floor: float = 0.5
    object_count_mode: str = "distinct"  # or "per_frame_sum"


@dataclass(frozen=True)
class SummaryConfig:
    speech_weight: float = 0.3
    visual_weight: float = 2.5


@dataclass(frozen=True)
class AssemblyConfig:
    cut_mode: str = "middle"  # begin | middle | end
    reference_max_duration: float = 30.0


@dataclass(frozen=True)
class MediaConfig:
    toolchain: str = "raw"  # raw | ffmpeg
    sample_rate: int = 16000
    thumbnail_max_width: int = 320
    thumbnail_format: str = "png"
    max_native_fps: float = 15.0  # above this, sample cut detection to ~10 fps

    def build_toolchain(self) -> MediaToolchain:
        if self.toolchain == "raw":
            return MediaToolchain.raw()
        if self.toolchain == "ffmpeg":
            return MediaToolchain.ffmpeg()
        raise ValueError(f"unknown toolchain preset: {self.toolchain}")

    def analysis_stride(self, fps: float) -> int:
        if fps <= self.max_native_fps:
            return 1
        return max(1, round(fps / 10.0))


@dataclass(frozen=True)
class PipelineConfig:
    segmentation: SegmentationConfig = field(default_factory=SegmentationConfig)
    extraction: ExtractionConfig = field(default_factory=ExtractionConfig)
    summary: SummaryConfig = field(default_factory=SummaryConfig)
    assembly: AssemblyConfig = field(default_factory=AssemblyConfig)
    media: MediaConfig = field(default_factory=MediaConfig)
    adapters: "dict[str, AdapterSpec]" = field(default_factory=dict)
    parallelism: int = 2

    def __post_init__(self):
        if self.summary.speech_weight < 0 or self.summary.visual_weight < 0:
            raise ValueError("summary weights must be non-negative")
        if self.parallelism < 1:
            raise ValueError("parallelism must be >= 1")
        if self.assembly.cut_mode not in ("begin", "middle", "end"):
            raise ValueError(f"unknown cut mode: {self.assembly.cut_mode}")
        adapters = dict(self.adapters)
        for kind in ADAPTER_KINDS:
            adapters.setdefault(kind, AdapterSpec(kind=kind))
        object.__setattr__(self, "adapters", adapters)

    def fingerprint(self) -> str:
        """Stable digest of every tunable, recorded in the manifest."""
        payload = asdict(self)
        payload["adapters"] = {
            kind: {"command": list(spec.command), "timeout": spec.timeout}
            for kind, spec in sorted(self.adapters.items())
        }
        blob = json.dumps(payload, sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()


def _section(data: dict, name: str, cls):
    fields = cls.__dataclass_fields__
    raw = data.get(name, {})
    unknown = set(raw) - set(fields)
    if unknown:
        raise ValueError(f"[{name}]: unknown keys {sorted(unknown)}")
    return cls(**raw)


def _adapter_section(data: dict) -> "dict[str, AdapterSpec]":
    adapters: dict[str, AdapterSpec] = {}
    raw = data.get("adapters", {})
    unknown = set(raw) - set(ADAPTER_KINDS)
    if unknown:
        raise ValueError(f"[adapters]: unknown kinds {sorted(unknown)}")
    for kind, section in raw.items():
        command = section.get("command", MOCK_SENTINEL)
        if isinstance(command, str):
            command = (command,) if command == MOCK_SENTINEL else tuple(command.split())
        else:
            command = tuple(str(tok) for tok in command)
        adapters[kind] = AdapterSpec(
            kind=kind,
            command=command,
            timeout=float(section.get("timeout", DEFAULT_TIMEOUT)),
        )
    return adapters


def load_config(path: "Path | str | None" = None) -> PipelineConfig:
    """Read a TOML config file; a missing path yields pure defaults."""
    if path is None:
        return PipelineConfig()
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    return PipelineConfig(
        segmentation=_section(data, "segmentation", SegmentationConfig),
        extraction=_section(data, "extraction", ExtractionConfig),
        summary=_section(data, "summary", SummaryConfig),
        assembly=_section(data, "assembly", AssemblyConfig),
        media=_section(data, "media", MediaConfig),
        adapters=_adapter_section(data),
        parallelism=int(data.get("parallelism", 2)),
    )
