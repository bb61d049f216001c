"""Command-line interface.

    mica distill --transcript f.json --frames f.jsonl --audio f.wav --out r.json
    mica serve --recipe r.json [--config c.json] [--mock-all] [--port N]
    mica replay-trace trace.jsonl --recipe r.json [--out stream.jsonl]
    mica metrics trace.jsonl
    mica annotate trace.jsonl --labels labels.json --out annotated.jsonl
    mica conformance
    mica export memory.jsonl [--out dump.jsonl]
    mica harness run DIR [--report report.xml]
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .adapters import EchoDescriber, RemoteModelAdapter
from .clock import SimulatedClock
from .errors import MicaError
from .knowledge.manifest import (read_audio_samples, read_frame_manifest,
                                 read_transcript_file)
from .knowledge.pipeline import distill as distill_pipeline
from .knowledge.pipeline import write_result


@click.group()
def main():
    """Mixed-initiative cooking assistant engine."""


@main.command()
@click.option("--transcript", "transcript_path", required=True, type=click.Path(exists=True))
@click.option("--frames", "frames_path", required=True, type=click.Path(exists=True))
@click.option("--audio", "audio_path", type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--scene-threshold", type=float, default=0.5, show_default=True)
@click.option("--gap-seconds", type=float, default=1.5, show_default=True)
@click.option("--describer", default="mock", show_default=True,
              help="'mock' or an HTTP endpoint URL")
@click.option("--structure", "structure_path", type=click.Path(exists=True),
              help="hand-authored steps/ingredients override file")
@click.option("--recipe-id", default=None)
def distill(transcript_path, frames_path, audio_path, out_path, scene_threshold,
            gap_seconds, describer, structure_path, recipe_id):
    """Distill video inputs into a structured recipe knowledge file."""
    transcript = read_transcript_file(transcript_path)
    frames = read_frame_manifest(frames_path)
    audio = read_audio_samples(audio_path) if audio_path else None
    adapter = EchoDescriber() if describer == "mock" else RemoteModelAdapter(describer)
    result = distill_pipeline(
        transcript, frames, audio, adapter,
        recipe_id=recipe_id or Path(out_path).stem,
        scene_threshold=scene_threshold, gap_seconds=gap_seconds,
        structure_file=structure_path)
    write_result(result, out_path)
    click.echo(f"wrote {out_path} ({len(result.knowledge.sentences)} sentences, "
               f"{len(result.warnings)} warnings)")


@main.command()
@click.option("--recipe", "recipe_path", required=True, type=click.Path(exists=True))
@click.option("--config", "config_path", type=click.Path(exists=True))
@click.option("--mock-all", is_flag=True, help="force mock adapters")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8757, show_default=True)
def serve(recipe_path, config_path, mock_all, host, port):
    """Serve one live session over the streaming websocket API."""
    from .clock import WallClock
    from .session.api import serve as serve_session
    from .session.config import SessionConfig, load_config
    from .session.engine import mock_adapters, start_session

    if config_path:
        cfg = load_config(config_path)
        cfg.recipe_path = recipe_path
    else:
        cfg = SessionConfig(recipe_path=recipe_path)
    adapters = mock_adapters() if mock_all else None
    session = start_session(cfg, adapters, WallClock(),
                            memory_stream=Path(cfg.trace_dir) / "session.memory.jsonl",
                            trace_path=Path(cfg.trace_dir) / "session.trace.jsonl")
    serve_session(session, host=host, port=port)


@main.command("replay-trace")
@click.argument("trace_path", type=click.Path(exists=True))
@click.option("--recipe", "recipe_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", type=click.Path())
def replay_trace(trace_path, recipe_path, out_path):
    """Re-drive a recorded trace through mock adapters; emit the stream."""
    from .session.config import SessionConfig
    from .session.engine import mock_adapters, start_session
    from .session.trace import load_trace

    records = load_trace(trace_path)
    cfg = SessionConfig(recipe_path=recipe_path)
    session = start_session(cfg, mock_adapters(), SimulatedClock())
    for record in records:
        if record.stimulus != "utterance" or not record.utterance:
            continue
        gap = record.received_at - session.clock.now()
        if gap > 0:
            session.advance(gap)
        try:
            result = session.ingest_utterance(record.utterance)
            if result.envelope is not None:
                session.speak(result.envelope)
        except MicaError as exc:
            click.echo(f"replay error at record {record.record_id}: {exc}", err=True)
    lines = "".join(json.dumps(m, sort_keys=True) + "\n" for m in session.outbound)
    if out_path:
        Path(out_path).write_text(lines, encoding="utf-8")
        click.echo(f"wrote {len(session.outbound)} stream messages to {out_path}")
    else:
        sys.stdout.write(lines)


@main.command()
@click.argument("trace_path", type=click.Path(exists=True))
def metrics(trace_path):
    """Compute mapping and response accuracy over an annotated trace."""
    from .session.metrics import compute_metrics
    from .session.trace import load_trace

    report = compute_metrics(load_trace(trace_path))
    click.echo(json.dumps(report.as_dict(), indent=2, sort_keys=True))


@main.command()
@click.argument("trace_path", type=click.Path(exists=True))
@click.option("--labels", "labels_path", required=True, type=click.Path(exists=True),
              help="JSON: {record_id: {ground_truth_event, response_correct}}")
@click.option("--out", "out_path", required=True, type=click.Path())
def annotate(trace_path, labels_path, out_path):
    """Merge offline annotation labels into a trace file."""
    from .session.trace import apply_annotations, load_trace, save_trace

    labels = json.loads(Path(labels_path).read_text(encoding="utf-8"))
    annotated = apply_annotations(load_trace(trace_path), labels)
    save_trace(annotated, out_path)
    click.echo(f"wrote {out_path}")


@main.command()
def conformance():
    """Print the full transition table."""
    from .dialogue.transitions import format_table

    click.echo(format_table())


@main.command()
@click.argument("memory_path", type=click.Path(exists=True))
@click.option("--out", "out_path", type=click.Path())
def export(memory_path, out_path):
    """Dump a session memory stream (validates every record)."""
    from .memory import MemoryRecord

    lines = []
    for line in Path(memory_path).read_text(encoding="utf-8").splitlines():
        if line.strip():
            lines.append(MemoryRecord.from_json(line).to_json())
    text = "".join(line + "\n" for line in lines)
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
        click.echo(f"exported {len(lines)} records to {out_path}")
    else:
        sys.stdout.write(text)


@main.group()
def harness():
    """Scenario harness."""


@harness.command("run")
@click.argument("directory", type=click.Path(exists=True, file_okay=False))
@click.option("--report", "report_path", type=click.Path())
def harness_run(directory, report_path):
    """Run every *.scenario script in DIRECTORY."""
    from .harness.runner import junit_report, run_directory

    reports = run_directory(directory)
    failed = 0
    for report in reports:
        for check in report.checks:
            status = "PASS" if check.passed else "FAIL"
            click.echo(f"[{status}] {report.script_name}: {check.expectation.label()}")
            if not check.passed:
                failed += 1
                click.echo(f"       {check.detail}")
    if report_path:
        Path(report_path).write_text(junit_report(reports), encoding="utf-8")
        click.echo(f"report written to {report_path}")
    if failed:
        raise SystemExit(1)
    click.echo(f"all {sum(len(r.checks) for r in reports)} expectations passed")


if __name__ == "__main__":
    main()
