"""The comparison document: full pipeline run and its serialized form.

``build_document`` runs track selection, reference choice, pairwise alignment,
grid merge, per-bar metrics, the all-versions-at-once similarity coloring, and
per-column diffing, then freezes everything into one self-contained document.
The document embeds the selected tracks' full bar content, so a consumer needs
neither the original files nor a parser; it is the only contract between the
engine and any UI.

Serialization is deterministic: fixed key order, floats rounded to six
decimals (the in-memory document already holds the rounded values, so reading
a written document reproduces it exactly), rationals as "n/d", colors as
"#RRGGBB". The normative JSON Schema ships in ``schemas/``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from fractions import Fraction
from importlib import resources
from typing import Any, Sequence

from .alignment import AlignParams, align_pair, choose_reference, merge_alignments
from .coloring import (
    DEFAULT_COLORMAP,
    ColorMap,
    ColorStop,
    color_of,
    distance_matrix,
    format_hex,
    mds_1d,
    parse_hex,
)
from .diffing import (
    BeatState,
    ColumnStatus,
    EditKind,
    NoteEdit,
    NoteState,
    column_statuses,
)
from .features import bar_distance, bar_feature
from .metrics import DEFAULT_SCALE_LENGTH_MM, BarMetrics, bar_metrics
from .model import (
    Bar,
    Score,
    Technique,
    Tuning,
    bar_from_jsonable,
    bar_to_jsonable,
    technique_sort_key,
)

__all__ = [
    "SCHEMA_VERSION",
    "Cell",
    "ComparisonDocument",
    "ConfigError",
    "DocOptions",
    "DocumentError",
    "Normalization",
    "RunOptions",
    "VersionInfo",
    "VersionSelect",
    "build_document",
    "load_schema",
    "read_document",
    "write_document",
]

SCHEMA_VERSION = "1"

_TECHNIQUE_BY_NAME = {t.value: t for t in Technique}


class ConfigError(Exception):
    """Invalid run configuration (too few versions, bad track index, ...)."""


class DocumentError(Exception):
    """Malformed serialized comparison document."""

    def __init__(self, message: str, path: str = "$"):
        self.message = message
        self.path = path
        super().__init__(f"{path}: {message}")


@dataclass(frozen=True)
class VersionSelect:
    """Which track of one input score to compare, and under what name."""

    track: int = 0
    name: str | None = None


@dataclass(frozen=True)
class RunOptions:
    versions: tuple[VersionSelect, ...]
    gap_cost: float = 0.75
    w_chroma: float = 1.0
    w_onset: float = 1.0
    scale_length_mm: float = DEFAULT_SCALE_LENGTH_MM
    colormap: ColorMap = DEFAULT_COLORMAP
    reference: int | None = None  # None picks the version with the most bars


@dataclass(frozen=True)
class DocOptions:
    """Echo of the run options inside the document."""

    gap_cost: float
    w_chroma: float
    w_onset: float
    scale_length_mm: float
    reference: int | None
    colormap: ColorMap


@dataclass(frozen=True)
class VersionInfo:
    name: str
    track_name: str
    track_index: int
    tuning: Tuning
    bars: tuple[Bar, ...]

    @property
    def bar_count(self) -> int:
        return len(self.bars)


@dataclass(frozen=True)
class Cell:
    """One (version, column) slot: a bar with metrics and color, or a gap."""

    bar: int | None
    status: ColumnStatus
    metrics: BarMetrics | None = None
    coordinate: float | None = None
    color: str | None = None
    edits: tuple[NoteEdit, ...] = ()


@dataclass(frozen=True)
class Normalization:
    """Per-document maxima the UI uses to scale density and span colors."""

    density_max: int
    fret_span_frets_max: int
    fret_span_mm_max: float


@dataclass(frozen=True)
class ComparisonDocument:
    schema_version: str
    options: DocOptions
    versions: tuple[VersionInfo, ...]
    reference_index: int
    columns: tuple[tuple[int | None, ...], ...]
    cells: tuple[tuple[Cell, ...], ...]
    normalization: Normalization

    @property
    def num_columns(self) -> int:
        return len(self.columns)


def _round6(value: float) -> float:
    return round(float(value), 6)


def build_document(scores: Sequence[Score], options: RunOptions) -> ComparisonDocument:
    """Run the whole comparison pipeline; deterministic for fixed inputs."""
    if len(scores) < 2:
        raise ConfigError("need at least 2 versions")
    if len(options.versions) != len(scores):
        raise ConfigError(
            f"got {len(scores)} scores but {len(options.versions)} version selections"
        )

    tracks = []
    infos = []
    for i, (score, select) in enumerate(zip(scores, options.versions)):
        if not 0 <= select.track < len(score.tracks):
            raise ConfigError(
                f"version {i}: track index {select.track} out of range "
                f"(score has {len(score.tracks)} tracks)"
            )
        track = score.tracks[select.track]
        if not track.bars:
            raise ConfigError(f"version {i}: track '{track.name}' has no bars")
        tracks.append(track)
        name = select.name or score.title or f"Version {i + 1}"
        infos.append(
            VersionInfo(
                name=name,
                track_name=track.name,
                track_index=select.track,
                tuning=track.tuning,
                bars=track.bars,
            )
        )

    reference = options.reference
    if reference is None:
        reference = choose_reference(tracks)
    elif not 0 <= reference < len(tracks):
        raise ConfigError(f"reference index {reference} out of range")

    features = [
        [bar_feature(bar, track.tuning, options.w_chroma, options.w_onset) for bar in track.bars]
        for track in tracks
    ]
    params = AlignParams(gap_cost=options.gap_cost)
    pairs = [
        align_pair(features[reference], features[v], params, bar_distance)
        for v in range(len(tracks))
        if v != reference
    ]
    grid = merge_alignments(len(tracks[reference].bars), pairs, reference)

    coords = mds_1d(distance_matrix([f for per_version in features for f in per_version]))
    coordinates: list[list[float]] = []
    colors: list[list[str]] = []
    offset = 0
    for track in tracks:
        per_bar = [_round6(coords[offset + i]) for i in range(len(track.bars))]
        coordinates.append(per_bar)
        colors.append([format_hex(color_of(t, options.colormap)) for t in per_bar])
        offset += len(track.bars)

    metrics = [
        [_rounded_metrics(bar_metrics(bar, options.scale_length_mm)) for bar in track.bars]
        for track in tracks
    ]
    statuses = column_statuses(grid, tracks)

    cells = tuple(
        tuple(
            Cell(
                bar=bar_idx,
                status=statuses[v][c].status,
                metrics=metrics[v][bar_idx] if bar_idx is not None else None,
                coordinate=coordinates[v][bar_idx] if bar_idx is not None else None,
                color=colors[v][bar_idx] if bar_idx is not None else None,
                edits=statuses[v][c].edits,
            )
            for c, bar_idx in enumerate(grid.rows[v])
        )
        for v in range(len(tracks))
    )

    all_metrics = [m for per_version in metrics for m in per_version]
    normalization = Normalization(
        density_max=max(m.density for m in all_metrics),
        fret_span_frets_max=max(
            (m.fret_span_frets for m in all_metrics if m.fret_span_frets is not None), default=0
        ),
        fret_span_mm_max=max(
            (m.fret_span_mm for m in all_metrics if m.fret_span_mm is not None), default=0.0
        ),
    )

    doc_options = DocOptions(
        gap_cost=_round6(options.gap_cost),
        w_chroma=_round6(options.w_chroma),
        w_onset=_round6(options.w_onset),
        scale_length_mm=_round6(options.scale_length_mm),
        reference=options.reference,
        colormap=ColorMap(
            tuple(ColorStop(_round6(s.t), s.rgb) for s in options.colormap.stops)
        ),
    )
    columns = tuple(
        tuple(grid.rows[v][c] for v in range(len(tracks))) for c in range(grid.num_columns)
    )
    return ComparisonDocument(
        schema_version=SCHEMA_VERSION,
        options=doc_options,
        versions=tuple(infos),
        reference_index=reference,
        columns=columns,
        cells=cells,
        normalization=normalization,
    )


def _rounded_metrics(m: BarMetrics) -> BarMetrics:
    if m.fret_span_mm is None:
        return m
    return replace(m, fret_span_mm=_round6(m.fret_span_mm))


# -- serialization ------------------------------------------------------------


def _fraction_str(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def _state_to_jsonable(state: NoteState | BeatState | None) -> Any:
    if state is None:
        return None
    if isinstance(state, BeatState):
        return {"duration": _fraction_str(state.duration)}
    return {
        "fret": state.fret,
        "tied": state.tied,
        "techniques": [t.value for t in sorted(state.techniques, key=technique_sort_key)],
    }


def _edit_to_jsonable(edit: NoteEdit) -> dict[str, Any]:
    return {
        "kind": edit.kind.value,
        "onset": _fraction_str(edit.onset),
        "string": edit.string,
        "before": _state_to_jsonable(edit.before),
        "after": _state_to_jsonable(edit.after),
    }


def _metrics_to_jsonable(m: BarMetrics | None) -> Any:
    if m is None:
        return None
    return {
        "density": m.density,
        "fretSpanFrets": m.fret_span_frets,
        "fretSpanMm": m.fret_span_mm,
        "techniques": {t.value: count for t, count in m.techniques.items()},
    }


def _cell_to_jsonable(cell: Cell) -> dict[str, Any]:
    return {
        "bar": cell.bar,
        "status": cell.status.value,
        "metrics": _metrics_to_jsonable(cell.metrics),
        "coordinate": cell.coordinate,
        "color": cell.color,
        "edits": [_edit_to_jsonable(e) for e in cell.edits],
    }


def document_to_jsonable(doc: ComparisonDocument) -> dict[str, Any]:
    """Document as plain data, laid out exactly as the schema prescribes."""
    return {
        "schemaVersion": doc.schema_version,
        "options": {
            "gapCost": doc.options.gap_cost,
            "wChroma": doc.options.w_chroma,
            "wOnset": doc.options.w_onset,
            "scaleLengthMm": doc.options.scale_length_mm,
            "reference": doc.options.reference,
            "colormap": [
                {"t": stop.t, "rgb": format_hex(stop.rgb)} for stop in doc.options.colormap.stops
            ],
        },
        "versions": [
            {
                "name": info.name,
                "trackName": info.track_name,
                "trackIndex": info.track_index,
                "tuning": list(info.tuning.pitches),
                "barCount": info.bar_count,
                "bars": [bar_to_jsonable(bar) for bar in info.bars],
            }
            for info in doc.versions
        ],
        "referenceIndex": doc.reference_index,
        "columns": [list(col) for col in doc.columns],
        "cells": [[_cell_to_jsonable(cell) for cell in row] for row in doc.cells],
        "normalization": {
            "densityMax": doc.normalization.density_max,
            "fretSpanFretsMax": doc.normalization.fret_span_frets_max,
            "fretSpanMmMax": doc.normalization.fret_span_mm_max,
        },
    }


def write_document(doc: ComparisonDocument) -> str:
    return json.dumps(document_to_jsonable(doc), indent=2, ensure_ascii=False) + "\n"


def _expect(value: Any, kind: type | tuple[type, ...], what: str, path: str) -> Any:
    kinds = kind if isinstance(kind, tuple) else (kind,)
    if isinstance(value, bool) and bool not in kinds:
        raise DocumentError(f"expected {what}, got {value!r}", path)
    if not isinstance(value, kind):
        raise DocumentError(f"expected {what}, got {type(value).__name__}", path)
    return value


def _get(obj: dict, key: str, kind: type, what: str, path: str) -> Any:
    if key not in obj:
        raise DocumentError(f"missing key '{key}'", path)
    return _expect(obj[key], kind, what, f"{path}.{key}")


def _opt(obj: dict, key: str, kind: type, what: str, path: str) -> Any:
    if obj.get(key) is None:
        return None
    return _expect(obj[key], kind, what, f"{path}.{key}")


def _parse_fraction(text: str, path: str) -> Fraction:
    num, sep, den = text.partition("/")
    if not sep or not num.isdigit() or not den.isdigit() or int(den) == 0:
        raise DocumentError(f"expected rational 'n/d', got {text!r}", path)
    return Fraction(int(num), int(den))


def _state_from_jsonable(obj: Any, path: str) -> NoteState | BeatState | None:
    if obj is None:
        return None
    _expect(obj, dict, "object", path)
    if "duration" in obj:
        return BeatState(_parse_fraction(_get(obj, "duration", str, "string", path), path))
    techniques = set()
    for token in _get(obj, "techniques", list, "array", path):
        technique = _TECHNIQUE_BY_NAME.get(token)
        if technique is None:
            raise DocumentError(f"unknown technique {token!r}", f"{path}.techniques")
        techniques.add(technique)
    return NoteState(
        fret=_get(obj, "fret", int, "integer", path),
        techniques=frozenset(techniques),
        tied=_get(obj, "tied", bool, "boolean", path),
    )


def _edit_from_jsonable(obj: Any, path: str) -> NoteEdit:
    _expect(obj, dict, "object", path)
    kind_text = _get(obj, "kind", str, "string", path)
    try:
        kind = EditKind(kind_text)
    except ValueError:
        raise DocumentError(f"unknown edit kind {kind_text!r}", f"{path}.kind") from None
    return NoteEdit(
        kind=kind,
        onset=_parse_fraction(_get(obj, "onset", str, "string", path), f"{path}.onset"),
        string=_get(obj, "string", int, "integer", path),
        before=_state_from_jsonable(obj.get("before"), f"{path}.before"),
        after=_state_from_jsonable(obj.get("after"), f"{path}.after"),
    )


def _metrics_from_jsonable(obj: Any, path: str) -> BarMetrics | None:
    if obj is None:
        return None
    _expect(obj, dict, "object", path)
    techniques: dict[Technique, int] = {}
    for token, count in _get(obj, "techniques", dict, "object", path).items():
        technique = _TECHNIQUE_BY_NAME.get(token)
        if technique is None:
            raise DocumentError(f"unknown technique {token!r}", f"{path}.techniques")
        techniques[technique] = _expect(count, int, "integer", f"{path}.techniques.{token}")
    return BarMetrics(
        density=_get(obj, "density", int, "integer", path),
        fret_span_frets=_opt(obj, "fretSpanFrets", int, "integer", path),
        fret_span_mm=(
            None
            if obj.get("fretSpanMm") is None
            else float(_expect(obj["fretSpanMm"], (int, float), "number", f"{path}.fretSpanMm"))
        ),
        techniques={t: techniques[t] for t in sorted(techniques, key=technique_sort_key)},
    )


def _cell_from_jsonable(obj: Any, path: str) -> Cell:
    _expect(obj, dict, "object", path)
    status_text = _get(obj, "status", str, "string", path)
    try:
        status = ColumnStatus(status_text)
    except ValueError:
        raise DocumentError(f"unknown status {status_text!r}", f"{path}.status") from None
    coordinate = obj.get("coordinate")
    if coordinate is not None:
        coordinate = float(_expect(coordinate, (int, float), "number", f"{path}.coordinate"))
    return Cell(
        bar=_opt(obj, "bar", int, "integer", path),
        status=status,
        metrics=_metrics_from_jsonable(obj.get("metrics"), f"{path}.metrics"),
        coordinate=coordinate,
        color=_opt(obj, "color", str, "string", path),
        edits=tuple(
            _edit_from_jsonable(e, f"{path}.edits[{i}]")
            for i, e in enumerate(_get(obj, "edits", list, "array", path))
        ),
    )


def read_document(data: str | bytes) -> ComparisonDocument:
    """Parse a serialized comparison document back into its object form."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        root = json.loads(data)
    except json.JSONDecodeError as exc:
        raise DocumentError(exc.msg, path=f"line {exc.lineno}") from exc
    _expect(root, dict, "object", "$")

    version = _get(root, "schemaVersion", str, "string", "$")
    if version != SCHEMA_VERSION:
        raise DocumentError(f"unsupported schema version {version!r}", "$.schemaVersion")

    opts = _get(root, "options", dict, "object", "$")
    stops = []
    for i, stop in enumerate(_get(opts, "colormap", list, "array", "$.options")):
        spath = f"$.options.colormap[{i}]"
        _expect(stop, dict, "object", spath)
        t = float(_expect(stop.get("t"), (int, float), "number", f"{spath}.t"))
        try:
            rgb = parse_hex(_get(stop, "rgb", str, "string", spath))
        except ValueError as exc:
            raise DocumentError(str(exc), f"{spath}.rgb") from None
        stops.append(ColorStop(t, rgb))
    options = DocOptions(
        gap_cost=float(_expect(opts.get("gapCost"), (int, float), "number", "$.options.gapCost")),
        w_chroma=float(_expect(opts.get("wChroma"), (int, float), "number", "$.options.wChroma")),
        w_onset=float(_expect(opts.get("wOnset"), (int, float), "number", "$.options.wOnset")),
        scale_length_mm=float(
            _expect(opts.get("scaleLengthMm"), (int, float), "number", "$.options.scaleLengthMm")
        ),
        reference=_opt(opts, "reference", int, "integer", "$.options"),
        colormap=ColorMap(tuple(stops)),
    )

    versions = []
    for i, obj in enumerate(_get(root, "versions", list, "array", "$")):
        vpath = f"$.versions[{i}]"
        _expect(obj, dict, "object", vpath)
        tuning = Tuning(
            tuple(
                _expect(p, int, "integer", f"{vpath}.tuning[{j}]")
                for j, p in enumerate(_get(obj, "tuning", list, "array", vpath))
            )
        )
        bars = tuple(
            bar_from_jsonable(bar_obj, j, f"{vpath}.bars[{j}]")
            for j, bar_obj in enumerate(_get(obj, "bars", list, "array", vpath))
        )
        info = VersionInfo(
            name=_get(obj, "name", str, "string", vpath),
            track_name=_get(obj, "trackName", str, "string", vpath),
            track_index=_get(obj, "trackIndex", int, "integer", vpath),
            tuning=tuning,
            bars=bars,
        )
        if _get(obj, "barCount", int, "integer", vpath) != info.bar_count:
            raise DocumentError("barCount disagrees with bars length", f"{vpath}.barCount")
        versions.append(info)

    columns = tuple(
        tuple(
            _expect(entry, (int, type(None)), "integer or null", f"$.columns[{c}][{v}]")
            for v, entry in enumerate(_expect(col, list, "array", f"$.columns[{c}]"))
        )
        for c, col in enumerate(_get(root, "columns", list, "array", "$"))
    )
    cells = tuple(
        tuple(
            _cell_from_jsonable(cell, f"$.cells[{v}][{c}]")
            for c, cell in enumerate(_expect(row, list, "array", f"$.cells[{v}]"))
        )
        for v, row in enumerate(_get(root, "cells", list, "array", "$"))
    )

    norm_obj = _get(root, "normalization", dict, "object", "$")
    normalization = Normalization(
        density_max=_get(norm_obj, "densityMax", int, "integer", "$.normalization"),
        fret_span_frets_max=_get(norm_obj, "fretSpanFretsMax", int, "integer", "$.normalization"),
        fret_span_mm_max=float(
            _expect(
                norm_obj.get("fretSpanMmMax"), (int, float), "number", "$.normalization.fretSpanMmMax"
            )
        ),
    )

    return ComparisonDocument(
        schema_version=version,
        options=options,
        versions=tuple(versions),
        reference_index=_get(root, "referenceIndex", int, "integer", "$"),
        columns=columns,
        cells=cells,
        normalization=normalization,
    )


def load_schema() -> dict[str, Any]:
    """The normative JSON Schema for serialized comparison documents."""
    text = resources.files("tabcompare").joinpath("schemas/comparison-document.schema.json").read_text(
        "utf-8"
    )
    return json.loads(text)
