"""External model adapters.

Every model capability (ASR, OCR, object detection, LLM, TTS) is an external
command: one JSON request document on stdin, one JSON response document on
stdout, nonzero exit means failure.  Real model servers and the in-repo mocks
plug in through the same contract.

Request/response schemas:

    asr     {"audio_path", "sample_rate"}            -> {"segments": [{"text", "start", "end"}]}
    ocr     {"image_paths": [...]}                   -> {"frames": [{"lines": [...]}]}
    objdet  {"image_paths": [...]}                   -> {"frames": [{"labels": [{"name", "confidence"}]}]}
    llm     {"prompt", "max_words"}                  -> {"title", "summary"}
    tts     {"text", "reference_audio_path", "out_path"} -> {"audio_path", "duration_seconds"}
"""

from __future__ import annotations

import json
import subprocess
import sys
from dataclasses import dataclass

from .errors import AdapterFailure, AdapterTimeout

ADAPTER_KINDS = ("asr", "ocr", "objdet", "llm", "tts")

DEFAULT_TIMEOUT = 120.0

MOCK_SENTINEL = "mock"


@dataclass(frozen=True)
class AdapterSpec:
    """One configured adapter: its kind, command template, and timeout."""

    kind: str
    command: tuple[str, ...] = (MOCK_SENTINEL,)
    timeout: float = DEFAULT_TIMEOUT

    def resolve_command(self) -> list[str]:
        if self.command == (MOCK_SENTINEL,):
            return [sys.executable, "-m", "vidskim.mocks", self.kind]
        return list(self.command)


def run_adapter(spec: AdapterSpec, request: dict) -> dict:
    """Invoke the adapter process and return its parsed JSON response."""
    cmd = spec.resolve_command()
    try:
        proc = subprocess.run(
            cmd,
            input=json.dumps(request).encode(),
            capture_output=True,
            timeout=spec.timeout,
        )
    except subprocess.TimeoutExpired as exc:
        raise AdapterTimeout(spec.kind, f"no response within {spec.timeout}s") from exc
    except FileNotFoundError as exc:
        raise AdapterFailure(spec.kind, f"command not found: {cmd[0]}") from exc
    if proc.returncode != 0:
        detail = proc.stderr.decode(errors="replace").strip()
        raise AdapterFailure(
            spec.kind, f"exit status {proc.returncode}" + (f": {detail}" if detail else "")
        )
    try:
        response = json.loads(proc.stdout.decode())
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise AdapterFailure(spec.kind, "malformed response (not a JSON document)") from exc
    if not isinstance(response, dict):
        raise AdapterFailure(spec.kind, "malformed response (not a JSON object)")
    return response
