"""Command-line entry points: analyze, tracks, serve.

Exit codes: 0 success, 1 parse/configuration error (message on stderr),
2 internal error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .coloring import DEFAULT_COLORMAP, ColorMap, ColorStop, parse_hex
from .document import ConfigError, RunOptions, VersionSelect, build_document, write_document
from .model import CanonicalError, Score, read_canonical
from .tabtext import ParseError, parse_tabtext, score_tracks

__all__ = ["load_score", "main"]

DEFAULT_PORT = 8765


def load_score(path: str | Path) -> Score:
    """Read a score file in either supported format.

    Canonical documents are recognized by a leading '{' (after whitespace);
    everything else is treated as .tabtxt.
    """
    text = Path(path).read_text("utf-8")
    if text.lstrip()[:1] == "{":
        return read_canonical(text)
    return parse_tabtext(text)


def _parse_track_list(spec: str | None, count: int) -> list[int]:
    if spec is None:
        return [0] * count
    try:
        tracks = [int(part) for part in spec.split(",")]
    except ValueError:
        raise ConfigError(f"--track expects comma-separated integers, got {spec!r}") from None
    if len(tracks) != count:
        raise ConfigError(f"--track lists {len(tracks)} indices for {count} files")
    return tracks


def _parse_colormap(spec: str | None) -> ColorMap | None:
    """Colormap override: 't:#RRGGBB,t:#RRGGBB,...'."""
    if spec is None:
        return None
    stops = []
    for part in spec.split(","):
        pos, sep, hexcolor = part.partition(":")
        if not sep:
            raise ConfigError(f"--colormap stop {part!r} is not 't:#RRGGBB'")
        try:
            stops.append(ColorStop(float(pos), parse_hex(hexcolor)))
        except ValueError as exc:
            raise ConfigError(f"--colormap stop {part!r}: {exc}") from None
    try:
        return ColorMap(tuple(stops))
    except ValueError as exc:
        raise ConfigError(f"--colormap: {exc}") from None


def _cmd_analyze(args: argparse.Namespace) -> int:
    if len(args.files) < 2:
        raise ConfigError("need at least 2 versions")
    tracks = _parse_track_list(args.track, len(args.files))
    scores = [load_score(path) for path in args.files]
    colormap = _parse_colormap(args.colormap)
    options = RunOptions(
        versions=tuple(
            VersionSelect(track=t, name=Path(path).stem)
            for path, t in zip(args.files, tracks)
        ),
        gap_cost=args.gap_cost,
        w_chroma=args.wc,
        w_onset=args.wo,
        scale_length_mm=args.scale_length,
        reference=args.reference,
        colormap=colormap if colormap is not None else DEFAULT_COLORMAP,
    )
    text = write_document(build_document(scores, options))
    if args.out:
        Path(args.out).write_text(text, "utf-8")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_tracks(args: argparse.Namespace) -> int:
    for index, name, strings, bars in score_tracks(load_score(args.file)):
        print(f"{index}\t{name}\t{strings}\t{bars}")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .server import create_app

    app = create_app(data_dir=args.data_dir, ui_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tabcompare",
        description="Compare guitar tablature versions bar by bar.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="build a comparison document from 2+ tab files")
    analyze.add_argument("files", nargs="+", metavar="FILE", help=".tabtxt or canonical score files")
    analyze.add_argument("--track", help="comma-separated track index per file (default: 0 for each)")
    analyze.add_argument("--gap-cost", type=float, default=0.75, help="alignment gap cost (default 0.75)")
    analyze.add_argument("--scale-length", type=float, default=648.0, metavar="MM",
                         help="scale length in mm for the fret span metric (default 648)")
    analyze.add_argument("--wc", type=float, default=1.0, help="chroma feature weight (default 1)")
    analyze.add_argument("--wo", type=float, default=1.0, help="onset feature weight (default 1)")
    analyze.add_argument("--reference", type=int, default=None,
                         help="force the reference version index (default: most bars)")
    analyze.add_argument("--colormap", help="similarity colormap stops 't:#RRGGBB,...'")
    analyze.add_argument("--out", help="output path (default: stdout)")
    analyze.set_defaults(func=_cmd_analyze)

    tracks = sub.add_parser("tracks", help="list the tracks of a tab file")
    tracks.add_argument("file", metavar="FILE")
    tracks.set_defaults(func=_cmd_tracks)

    serve = sub.add_parser("serve", help="run the HTTP service and web UI")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int,
                       default=int(os.environ.get("TABCOMPARE_PORT", DEFAULT_PORT)))
    serve.add_argument("--data-dir", help="persist uploads and documents to this directory")
    serve.add_argument("--ui-dir", help="static UI bundle directory (default: ./frontend/dist)")
    serve.set_defaults(func=_cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_arg_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, CanonicalError, ConfigError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except BrokenPipeError:
        return 0
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
