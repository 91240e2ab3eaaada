"""Deterministic mock adapters.

These implement the adapter JSON protocol with fixture-driven behaviour so
the whole pipeline can run offline and reproducibly:

    asr     emits words at a fixed rate over voiced spans of the input audio;
            the first word encodes the dominant tone frequency (``tone440``),
            so synthetic fixtures produce distinctive, searchable transcripts.
    ocr     maps the mean color of each image to a fixed ten-word slide line;
            near-black images count as blank.
    objdet  two labels per non-blank image, one keyed to the image color.
    llm     summary of exactly ``max_words`` words seeded by the first
            transcription token; title derived from the same token.
    tts     writes a 16 kHz WAV lasting ``words / rate`` seconds.

Environment hooks for tests and demos:

    VIDSKIM_MOCK_FAIL=kind[:substring]   exit nonzero when the kind matches
                                         and the request contains substring
    VIDSKIM_MOCK_SLEEP=kind:seconds      delay before answering
    VIDSKIM_MOCK_ASR_WPS / VIDSKIM_MOCK_TTS_WPS   override the word rates
"""

from __future__ import annotations

import json
import os
import sys
import time

import numpy as np

ASR_WORDS_PER_SECOND = 2.0
TTS_WORDS_PER_SECOND = 2.5
TTS_SAMPLE_RATE = 16000
SILENCE_DBFS = -40.0
BLANK_LUMA = 24.0


def _voiced_spans(samples: np.ndarray, rate: int) -> list[tuple[float, float]]:
    """Complement of below-threshold RMS windows (20 ms windows, 10 ms hop)."""
    win = max(1, int(0.02 * rate))
    hop = max(1, int(0.01 * rate))
    n = len(samples)
    if n == 0:
        return []
    starts = np.arange(0, n, hop)
    ends = np.minimum(starts + win, n)
    sq = np.concatenate(([0.0], np.cumsum(samples.astype(np.float64) ** 2)))
    rms = np.sqrt((sq[ends] - sq[starts]) / (ends - starts))
    with np.errstate(divide="ignore"):
        quiet = 20 * np.log10(rms / 32767.0) < SILENCE_DBFS
    spans: list[tuple[float, float]] = []
    run_start = None
    for i in range(len(quiet) + 1):
        voiced = i < len(quiet) and not quiet[i]
        if voiced and run_start is None:
            run_start = i
        elif not voiced and run_start is not None:
            spans.append((float(starts[run_start] / rate), float(ends[i - 1] / rate)))
            run_start = None
    return spans


def _dominant_tone(samples: np.ndarray, rate: int) -> int:
    """Dominant frequency of the first second, rounded to 10 Hz."""
    chunk = samples[: min(len(samples), rate)].astype(np.float64)
    if len(chunk) < 16 or not chunk.any():
        return 0
    spectrum = np.abs(np.fft.rfft(chunk))
    freq = np.fft.rfftfreq(len(chunk), 1.0 / rate)[int(np.argmax(spectrum))]
    return int(round(freq / 10.0) * 10)


def mock_asr(request: dict) -> dict:
    import wave

    wps = float(os.environ.get("VIDSKIM_MOCK_ASR_WPS", ASR_WORDS_PER_SECOND))
    with wave.open(request["audio_path"], "rb") as wf:
        rate = wf.getframerate()
        raw = wf.readframes(wf.getnframes())
        channels = wf.getnchannels()
    samples = np.frombuffer(raw, dtype="<i2").reshape(-1, channels).mean(axis=1)
    pieces = []
    for start, end in _voiced_spans(samples, rate):
        lo, hi = int(start * rate), int(end * rate)
        tone = _dominant_tone(samples[lo:hi], rate)
        n_words = max(1, int(round((end - start) * wps)))
        words = [f"tone{tone}", "lecture"][:n_words]
        words += [f"w{i:03d}" for i in range(len(words) + 1, n_words + 1)]
        pieces.append({"text": " ".join(words), "start": start, "end": end})
    return {"segments": pieces}


def _image_key(path: str) -> "str | None":
    """Quantized mean color of the image, or None when nearly black."""
    from PIL import Image

    with Image.open(path) as img:
        mean = np.asarray(img.convert("RGB"), dtype=np.float64).mean(axis=(0, 1))
    if mean.max() < BLANK_LUMA:
        return None
    r, g, b = (int(v) // 32 for v in mean)
    return f"{r}{g}{b}"


def mock_ocr(request: dict) -> dict:
    frames = []
    for path in request["image_paths"]:
        key = _image_key(path)
        if key is None:
            frames.append({"lines": []})
        else:
            frames.append(
                {"lines": [
                    f"slide{key} heading alpha beta gamma delta epsilon zeta eta theta"
                ]}
            )
    return {"frames": frames}


def mock_objdet(request: dict) -> dict:
    frames = []
    for path in request["image_paths"]:
        key = _image_key(path)
        if key is None:
            frames.append({"labels": []})
        else:
            frames.append(
                {"labels": [
                    {"name": f"board{key}", "confidence": 0.9},
                    {"name": "presenter", "confidence": 0.8},
                ]}
            )
    return {"frames": frames}


def _seed_token(prompt: str) -> str:
    section = None
    for line in prompt.splitlines():
        stripped = line.strip()
        if stripped.endswith(":") and stripped[:-1] in ("TRANSCRIPTION", "OCR_TEXT"):
            section = stripped[:-1]
            continue
        if section and stripped and stripped != "(none)":
            return stripped.split()[0]
        if section and stripped == "(none)":
            section = None
    return "untitled"


def mock_llm(request: dict) -> dict:
    max_words = int(request["max_words"])
    token = _seed_token(request["prompt"])
    words = [token, "segment", "overview"][:max_words]
    words += [f"s{i:03d}" for i in range(len(words) + 1, max_words + 1)]
    return {"title": f"Chapter on {token}", "summary": " ".join(words)}


def mock_tts(request: dict) -> dict:
    from .. import rawmedia

    wps = float(os.environ.get("VIDSKIM_MOCK_TTS_WPS", TTS_WORDS_PER_SECOND))
    reference = request["reference_audio_path"]
    if not os.path.exists(reference):
        raise FileNotFoundError(f"reference audio missing: {reference}")
    words = len(request["text"].split())
    if words == 0:
        raise ValueError("empty text")
    duration = words / wps
    n = int(round(duration * TTS_SAMPLE_RATE))
    t = np.arange(n) / TTS_SAMPLE_RATE
    samples = (3000 * np.sin(2 * np.pi * 220.0 * t)).astype(np.int16)
    rawmedia.write_wav(request["out_path"], samples, TTS_SAMPLE_RATE)
    return {"audio_path": request["out_path"], "duration_seconds": n / TTS_SAMPLE_RATE}


HANDLERS = {
    "asr": mock_asr,
    "ocr": mock_ocr,
    "objdet": mock_objdet,
    "llm": mock_llm,
    "tts": mock_tts,
}


def _apply_hooks(kind: str, raw_request: str) -> None:
    sleep_spec = os.environ.get("VIDSKIM_MOCK_SLEEP", "")
    if sleep_spec:
        sleep_kind, _, seconds = sleep_spec.partition(":")
        if sleep_kind == kind:
            time.sleep(float(seconds))
    fail_spec = os.environ.get("VIDSKIM_MOCK_FAIL", "")
    if fail_spec:
        fail_kind, _, needle = fail_spec.partition(":")
        if fail_kind == kind and (not needle or needle in raw_request):
            raise RuntimeError(f"injected {kind} failure")


def main(argv: "list[str] | None" = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if len(argv) != 1 or argv[0] not in HANDLERS:
        print(f"usage: python -m vidskim.mocks {{{'|'.join(HANDLERS)}}}", file=sys.stderr)
        return 2
    kind = argv[0]
    raw = sys.stdin.read()
    try:
        _apply_hooks(kind, raw)
        response = HANDLERS[kind](json.loads(raw))
    except Exception as exc:  # any failure must surface as a nonzero exit
        print(f"mock {kind}: {exc}", file=sys.stderr)
        return 3
    sys.stdout.write(json.dumps(response))
    return 0
