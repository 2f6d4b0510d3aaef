"""Per-bar playability metrics: note density, fret span, technique counts.

Density counts attacks (tied continuations are not re-struck, so they do not
count). Fret span measures how far the fretting hand stretches inside a bar,
either in frets or in physical millimeters derived from the standard fret
placement rule: fret n sits ``L * (1 - 2^(-n/12))`` from the nut on a string
of scale length L. Open strings and dead notes involve no fretting-hand
position, so they never widen the span.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .model import Bar, Technique, technique_sort_key

__all__ = [
    "DEFAULT_SCALE_LENGTH_MM",
    "BarMetrics",
    "bar_metrics",
    "fret_position_mm",
    "fret_span",
    "note_density",
    "techniques_in_bar",
]

#: 25.5 inch scale, the common full-size guitar scale length.
DEFAULT_SCALE_LENGTH_MM = 648.0


@dataclass(frozen=True)
class BarMetrics:
    """Bundle of all per-bar metrics. Span fields are None for bars without
    any fretted note; both are None or both present."""

    density: int
    fret_span_frets: int | None
    fret_span_mm: float | None
    techniques: dict[Technique, int] = field(default_factory=dict)


def note_density(bar: Bar) -> int:
    """Number of note attacks in the bar. Chord notes count individually;
    tied notes and rests do not count."""
    return sum(1 for beat in bar.beats for note in beat.notes if not note.tied)


def fret_position_mm(fret: int, scale_length_mm: float = DEFAULT_SCALE_LENGTH_MM) -> float:
    """Distance of a fret from the nut, in millimeters."""
    return scale_length_mm * (1.0 - 2.0 ** (-fret / 12.0))


def fret_span(
    bar: Bar, scale_length_mm: float = DEFAULT_SCALE_LENGTH_MM
) -> tuple[int | None, float | None]:
    """(max fret - min fret, same distance in mm) over the bar's fretted notes.

    Only notes with fret >= 1 and without the DeadNote flag participate;
    returns (None, None) when there are none.
    """
    frets = [
        note.fret
        for beat in bar.beats
        for note in beat.notes
        if note.fret >= 1 and Technique.DEAD_NOTE not in note.techniques
    ]
    if not frets:
        return None, None
    lo, hi = min(frets), max(frets)
    return hi - lo, fret_position_mm(hi, scale_length_mm) - fret_position_mm(lo, scale_length_mm)


def techniques_in_bar(bar: Bar) -> Counter[Technique]:
    """Technique multiset over all notes of the bar."""
    counts: Counter[Technique] = Counter()
    for beat in bar.beats:
        for note in beat.notes:
            counts.update(note.techniques)
    return counts


def bar_metrics(bar: Bar, scale_length_mm: float = DEFAULT_SCALE_LENGTH_MM) -> BarMetrics:
    """All metrics for one bar, with technique counts in enumeration order."""
    span_frets, span_mm = fret_span(bar, scale_length_mm)
    counts = techniques_in_bar(bar)
    return BarMetrics(
        density=note_density(bar),
        fret_span_frets=span_frets,
        fret_span_mm=span_mm,
        techniques={t: counts[t] for t in sorted(counts, key=technique_sort_key)},
    )
