"""Exception hierarchy shared across the toolchain."""

from __future__ import annotations


class VidskimError(Exception):
    """Base class for all toolchain errors."""


# --- media boundary ---------------------------------------------------------

class MediaError(VidskimError):
    pass


class DecoderUnavailable(MediaError):
    """The configured external decoder command could not be executed."""


class EncoderUnavailable(MediaError):
    """The configured still-image encoder does not support the format."""


class MuxerUnavailable(MediaError):
    """The configured external muxer command could not be executed."""


class UnreadableMedia(MediaError):
    """The decoder rejected the input file."""


class RangeOutOfBounds(MediaError):
    """A requested time range falls outside the media duration."""


class WriteFailed(MediaError):
    """An output file could not be produced."""


# --- segmentation -----------------------------------------------------------

class SegmentationError(VidskimError):
    pass


class BinMismatch(SegmentationError):
    """Histograms with different bin counts cannot be compared."""


class TooFewFrames(SegmentationError):
    """Scene-cut detection needs at least two frames."""


class EmptyAudio(SegmentationError):
    """Silence detection needs a non-empty buffer."""


# --- adapters / extraction --------------------------------------------------

class AdapterError(VidskimError):
    def __init__(self, kind: str, message: str):
        super().__init__(f"{kind} adapter: {message}")
        self.kind = kind


class AdapterFailure(AdapterError):
    """Adapter exited nonzero or returned a malformed response."""


class AdapterTimeout(AdapterError):
    """Adapter did not answer within the configured timeout."""


class InconsistentSegment(VidskimError):
    """Evidence pieces do not all belong to the same segment."""


# --- summarization / assembly -----------------------------------------------

class EmptySummary(VidskimError):
    """The LLM adapter produced an empty summary after a retry."""


class NoSpeechFound(VidskimError):
    """No speech-bearing audio available for voice reference extraction."""


# --- catalog ----------------------------------------------------------------

class CatalogError(VidskimError):
    pass


class MissingArtifact(CatalogError):
    """A manifest entry references a file that does not exist."""

    def __init__(self, segment_index: int, artifact: str):
        super().__init__(f"segment {segment_index}: missing {artifact}")
        self.segment_index = segment_index
        self.artifact = artifact


class SchemaVersionMismatch(CatalogError):
    """The manifest on disk uses an unsupported schema version."""


class CorruptManifest(CatalogError):
    """The manifest file cannot be parsed into the expected shape."""


class EmptyQuery(CatalogError):
    """Search requires a non-empty query after trimming."""
