"""Command-line entry point.

    vidskim process <video> --config <file> --out <dir>
    vidskim inspect <dir> [--json]
    vidskim serve --root <dir> --port <n> [--bind <addr>]

Exit codes for ``process``: 0 success, 1 fatal, 2 partial (some segments
degraded to original-only).
"""

from __future__ import annotations

import json
import logging
import sys
from pathlib import Path

import click

from . import pipeline
from .config import load_config
from .errors import VidskimError


@click.group()
@click.version_option(package_name="vidskim")
def main() -> None:
    """Lecture-video summarization toolchain."""
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")


@main.command()
@click.argument("video", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              default=None, help="TOML config file (defaults apply when omitted).")
@click.option("--out", "out_dir", type=click.Path(file_okay=False, path_type=Path),
              required=True, help="Output root; the manifest directory is created inside.")
def process(video: Path, config_path: "Path | None", out_dir: Path) -> None:
    """Process VIDEO into a chaptered, summarized manifest directory."""
    try:
        config = load_config(config_path)
        manifest_dir, report = pipeline.process(video, config, out_dir)
    except (VidskimError, OSError, ValueError) as exc:
        click.echo(f"fatal: {exc}", err=True)
        sys.exit(1)
    _print_report(report)
    click.echo(f"manifest: {manifest_dir}")
    sys.exit(report.exit_code())


def _print_report(report: pipeline.PipelineReport) -> None:
    click.echo(f"{'seg':>4} {'start':>8} {'end':>8} {'status':<9} "
               f"{'l_t':>5} {'l_c':>5} {'l_o':>4} {'n':>5} {'clip_s':>7}")
    for seg in report.segments:
        budget = seg.budget or {}
        clip = f"{seg.clip_duration:.2f}" if seg.clip_duration is not None else "-"
        click.echo(
            f"{seg.index:>4} {seg.start:>8.2f} {seg.end:>8.2f} {seg.status:<9} "
            f"{budget.get('l_t', '-'):>5} {budget.get('l_c', '-'):>5} "
            f"{budget.get('l_o', '-'):>4} {budget.get('n', '-'):>5} {clip:>7}"
        )
    click.echo(
        f"totals: original {report.original_total:.2f}s, "
        f"summary {report.summary_total:.2f}s, "
        f"compression ratio {report.compression_ratio:.3f}"
    )
    for failure in report.failures:
        click.echo(
            f"degraded segment {failure['segment']} ({failure['stage']}): {failure['error']}",
            err=True,
        )


@main.command()
@click.argument("manifest_dir", type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("--json", "as_json", is_flag=True, help="Emit the report as JSON.")
def inspect(manifest_dir: Path, as_json: bool) -> None:
    """Print a table of segments, budgets, and the compression ratio."""
    try:
        summary = pipeline.inspect(manifest_dir)
    except VidskimError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    if as_json:
        click.echo(json.dumps(summary, indent=2))
        return
    click.echo(f"video {summary['video_id']} ({summary['duration']:.2f}s), "
               f"created {summary['created_at']}")
    click.echo(f"{'seg':>4} {'start':>8} {'end':>8} {'l_t':>5} {'l_c':>5} "
               f"{'l_o':>4} {'n':>5} {'clip_s':>7} status")
    for row in summary["segments"]:
        clip = f"{row['clip_duration']:.2f}" if row["clip_duration"] is not None else "-"
        click.echo(
            f"{row['index']:>4} {row['start']:>8.2f} {row['end']:>8.2f} "
            f"{row['l_t'] if row['l_t'] is not None else '-':>5} "
            f"{row['l_c'] if row['l_c'] is not None else '-':>5} "
            f"{row['l_o'] if row['l_o'] is not None else '-':>4} "
            f"{row['n'] if row['n'] is not None else '-':>5} {clip:>7} {row['status']}"
        )
    totals = summary["totals"]
    click.echo(
        f"totals: original {totals['original_duration']:.2f}s, "
        f"summary {totals['summary_duration']:.2f}s, "
        f"compression ratio {totals['compression_ratio']:.3f}"
    )


@main.command()
@click.option("--root", type=click.Path(exists=True, file_okay=False, path_type=Path),
              required=True, help="Directory holding processed video directories.")
@click.option("--port", type=int, default=8080, show_default=True)
@click.option("--bind", default="127.0.0.1", show_default=True)
@click.option("--cors", multiple=True, help="Allowed CORS origin (repeatable).")
@click.option("--ui", "ui_dir", type=click.Path(exists=True, file_okay=False, path_type=Path),
              default=None, help="Optionally serve a built web UI from this directory.")
def serve(root: Path, port: int, bind: str, cors: "tuple[str, ...]", ui_dir: "Path | None") -> None:
    """Serve manifests, media (with range support), and search over HTTP."""
    import uvicorn

    from .server import create_app

    app = create_app(root, cors_origins=cors, ui_dir=ui_dir)
    try:
        uvicorn.run(app, host=bind, port=port, log_level="info")
    except (OSError, SystemExit) as exc:
        click.echo(f"server failed to start: {exc}", err=True)
        sys.exit(1)


if __name__ == "__main__":
    main()
