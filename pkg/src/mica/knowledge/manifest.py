"""File ingestion for the distillation pipeline.

Input formats (byte-level examples in the README):

* transcript file - JSON object:
    {"language": "en", "words": [{"text": "Add", "start": 0.0, "end": 0.4}, ...]}

* frame manifest - one JSON record per line, either an inline descriptor or
  an image path that is reduced to a coarse RGB histogram descriptor:
    {"t": 0.0, "descriptor": [0.8, 0.1, 0.1]}
    {"t": 0.5, "image": "frames/0001.png"}

* audio file - mono 16-bit PCM WAV; windows are sliced per sentence interval
  and returned as floats in [-1, 1].
"""

from __future__ import annotations

import json
import struct
import wave
from pathlib import Path

from ..errors import EmptyInput, SchemaViolation
from .types import FrameRecord, TimedTranscript, TranscriptWord

HISTOGRAM_BUCKETS = 4  # per RGB channel


def read_transcript_file(path: str | Path) -> TimedTranscript:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        words = [TranscriptWord(w["text"], float(w["start"]), float(w["end"]))
                 for w in data["words"]]
        return TimedTranscript(words=words, language=data.get("language", "en"))
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise SchemaViolation(f"bad transcript file {path}: {exc}") from exc


def write_transcript_file(transcript: TimedTranscript, path: str | Path) -> None:
    data = {
        "language": transcript.language,
        "words": [{"text": w.text, "start": w.start, "end": w.end} for w in transcript.words],
    }
    Path(path).write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")


def image_descriptor(image_path: str | Path) -> tuple[float, ...]:
    """Coarse normalized RGB histogram; buckets are HISTOGRAM_BUCKETS per channel."""
    from PIL import Image

    with Image.open(image_path) as img:
        raw = img.convert("RGB").tobytes()
    counts = [0] * (HISTOGRAM_BUCKETS * 3)
    span = 256 // HISTOGRAM_BUCKETS
    for i in range(0, len(raw), 3):
        counts[min(raw[i] // span, HISTOGRAM_BUCKETS - 1)] += 1
        counts[HISTOGRAM_BUCKETS + min(raw[i + 1] // span, HISTOGRAM_BUCKETS - 1)] += 1
        counts[2 * HISTOGRAM_BUCKETS + min(raw[i + 2] // span, HISTOGRAM_BUCKETS - 1)] += 1
    total = max(1, len(raw) // 3)
    return tuple(c / total for c in counts)


def read_frame_manifest(path: str | Path) -> list[FrameRecord]:
    base = Path(path).parent
    frames: list[FrameRecord] = []
    for line_no, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
            t = float(record["t"])
            if "descriptor" in record:
                descriptor = tuple(float(x) for x in record["descriptor"])
            else:
                descriptor = image_descriptor(base / record["image"])
        except Exception as exc:
            raise SchemaViolation(f"bad frame manifest line {line_no}: {exc}") from exc
        frames.append(FrameRecord(timestamp=t, descriptor=descriptor))
    if not frames:
        raise EmptyInput(f"frame manifest {path} is empty")
    return frames


def write_frame_manifest(frames: list[FrameRecord], path: str | Path) -> None:
    lines = [
        json.dumps({"t": f.timestamp, "descriptor": list(f.descriptor)})
        for f in frames
    ]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_audio_samples(path: str | Path) -> tuple[list[float], int]:
    """Load a mono 16-bit PCM WAV file as floats plus its sample rate."""
    with wave.open(str(path), "rb") as wav:
        if wav.getsampwidth() != 2 or wav.getnchannels() != 1:
            raise SchemaViolation("audio file must be mono 16-bit PCM WAV")
        rate = wav.getframerate()
        raw = wav.readframes(wav.getnframes())
    count = len(raw) // 2
    ints = struct.unpack(f"<{count}h", raw)
    return [x / 32768.0 for x in ints], rate


def write_audio_samples(samples: list[float], rate: int, path: str | Path) -> None:
    clipped = [max(-1.0, min(1.0, x)) for x in samples]
    raw = struct.pack(f"<{len(clipped)}h", *(int(x * 32767) for x in clipped))
    with wave.open(str(path), "wb") as wav:
        wav.setnchannels(1)
        wav.setsampwidth(2)
        wav.setframerate(rate)
        wav.writeframes(raw)


def audio_window(samples: list[float], rate: int, t_start: float, t_end: float) -> list[float]:
    lo = max(0, int(t_start * rate))
    hi = min(len(samples), int(t_end * rate))
    return samples[lo:hi]
