"""vidskim: lecture-video summarization toolchain.

Segments a video into chapters from visual scene cuts and audio silences,
gathers transcript/OCR/object evidence per chapter, drives an LLM to write a
length-budgeted summary, narrates it in the original speaker's voice via a
TTS adapter, and assembles per-chapter summary clips served to an
interactive player.
"""

__version__ = "0.1.0"
