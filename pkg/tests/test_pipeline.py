import json
from pathlib import Path

import pytest

from mica.adapters import CannedDescriber, EchoDescriber, FailingAdapter
from mica.knowledge.manifest import (audio_window, read_audio_samples,
                                     read_frame_manifest, read_transcript_file,
                                     write_audio_samples, write_frame_manifest,
                                     write_transcript_file)
from mica.knowledge.pipeline import distill, write_result
from mica.knowledge.serialize import dumps_canonical
from mica.knowledge.types import FrameRecord, TimedTranscript, TranscriptWord

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = FIXTURES / "three_unit.golden.json"


def three_unit_transcript():
    words = []
    spec = [("Preheat", 0.0, 0.5), ("the", 0.5, 0.8), ("oven.", 0.8, 1.2),
            ("Knead", 2.0, 2.4), ("the", 2.4, 2.6), ("dough", 2.6, 3.0),
            ("well.", 3.0, 3.4), ("Bake", 5.0, 5.4), ("until", 5.4, 5.8),
            ("golden.", 5.8, 6.2)]
    for text, start, end in spec:
        words.append(TranscriptWord(text, start, end))
    return TimedTranscript(words=words)


def three_unit_frames():
    # scene changes at t=1.6 and t=4.8, well above the 0.5 threshold
    frames = []
    level = 0.0
    t = 0.2
    while t <= 6.4:
        if abs(t - 1.6) < 1e-9 or abs(t - 4.8) < 1e-9:
            level += 2.0
        frames.append(FrameRecord(timestamp=round(t, 1), descriptor=(level,)))
        t = round(t + 0.2, 10)
    return frames


def three_unit_audio():
    # 1 kHz of samples; sizzling burst over the last sentence only
    rate = 1000
    samples = [0.0] * (7 * rate)
    for i in range(5 * rate, 7 * rate):
        samples[i] = 0.3 if i % 2 == 0 else -0.3
    return samples, rate


def canned_describer():
    return CannedDescriber({
        "visual": [
            "an oven dial being turned to temperature",
            "hands kneading dough on a floured counter",
            "a loaf browning behind the oven glass",
        ],
        "audio": ["silence", "silence", "sizzling"],
        "structure": [json.dumps({
            "steps": [
                {"summary": "preheat the oven", "first": 0, "last": 0},
                {"summary": "knead the dough", "first": 1, "last": 1},
                {"summary": "bake until golden", "first": 2, "last": 2},
            ],
            "ingredients": [
                {"name": "dough", "quantity": "one batch", "first_mention": 1},
            ],
        })],
    })


def run_three_unit_pipeline():
    return distill(three_unit_transcript(), three_unit_frames(),
                   three_unit_audio(), canned_describer(),
                   recipe_id="three-unit", title="Golden Fixture Loaf")


def test_pipeline_output_matches_golden_file():
    result = run_three_unit_pipeline()
    assert result.warnings == []
    assert dumps_canonical(result.knowledge) == GOLDEN.read_text(encoding="utf-8")


def test_pipeline_is_deterministic():
    first = dumps_canonical(run_three_unit_pipeline().knowledge)
    second = dumps_canonical(run_three_unit_pipeline().knowledge)
    assert first == second


def test_describer_failure_degrades_to_warning():
    result = distill(three_unit_transcript(), three_unit_frames(), None,
                     FailingAdapter(), recipe_id="x")
    assert all(u.visual_description == "" for u in result.knowledge.sentences)
    assert any("visual describer failed" in w for w in result.warnings)
    # structure fell back to a single step spanning everything
    assert len(result.knowledge.steps) == 1
    assert result.knowledge.steps[0].last_sentence == 2


def test_audio_descriptions_follow_rms(tmp_path):
    result = run_three_unit_pipeline()
    descriptions = [u.audio_description for u in result.knowledge.sentences]
    assert descriptions == ["silence", "silence", "sizzling"]


def test_echo_describer_end_to_end():
    result = distill(three_unit_transcript(), three_unit_frames(),
                     three_unit_audio(), EchoDescriber(), recipe_id="echo")
    first = result.knowledge.sentences[0]
    assert first.visual_description.startswith("KF:")
    assert "TXT:Preheat the oven." in first.visual_description
    # echo audio descriptions computed from real RMS of each window
    assert [u.audio_description for u in result.knowledge.sentences] == \
        ["silence", "silence", "sizzling"]


def test_write_result_emits_warnings_sidecar(tmp_path):
    result = distill(three_unit_transcript(), three_unit_frames(), None,
                     FailingAdapter(), recipe_id="x")
    out = tmp_path / "k.json"
    write_result(result, out)
    sidecar = tmp_path / "k.json.warnings"
    assert sidecar.exists()
    assert len(sidecar.read_text().splitlines()) == len(result.warnings)


def test_file_formats_round_trip(tmp_path):
    transcript = three_unit_transcript()
    write_transcript_file(transcript, tmp_path / "t.json")
    assert read_transcript_file(tmp_path / "t.json") == transcript

    frames = three_unit_frames()
    write_frame_manifest(frames, tmp_path / "f.jsonl")
    assert read_frame_manifest(tmp_path / "f.jsonl") == frames

    samples, rate = three_unit_audio()
    write_audio_samples(samples, rate, tmp_path / "a.wav")
    loaded, loaded_rate = read_audio_samples(tmp_path / "a.wav")
    assert loaded_rate == rate
    assert len(loaded) == len(samples)
    assert max(abs(a - b) for a, b in zip(loaded, samples)) < 1e-3


def test_audio_window_slices_by_time():
    samples = list(range(100))
    window = audio_window(samples, 10, 2.0, 4.0)
    assert window == list(range(20, 40))


def test_image_manifest_descriptor(tmp_path):
    from PIL import Image

    red = Image.new("RGB", (8, 8), (255, 0, 0))
    red.save(tmp_path / "red.png")
    manifest = tmp_path / "frames.jsonl"
    manifest.write_text(
        '{"t": 0.0, "descriptor": [1.0, 0.0]}\n'
        '{"t": 1.0, "image": "red.png"}\n', encoding="utf-8")
    frames = read_frame_manifest(manifest)
    assert frames[0].descriptor == (1.0, 0.0)
    # fully red image: all mass in the last red bucket, none in green/blue high buckets
    descriptor = frames[1].descriptor
    assert descriptor[3] == 1.0
    assert descriptor[4] == 1.0  # green channel lowest bucket
    assert descriptor[8] == 1.0  # blue channel lowest bucket
