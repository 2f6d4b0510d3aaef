"""Explicit differences between the reference version and every other version.

Each aligned column gets a status per version: Same, Changed (with note-level
edits attached), MissingInVersion (the version has a gap there) or
ExtraInVersion (the reference has a gap there). Bar comparison is positional:
the same pitch on a different string is a difference, because tabs prescribe
hand positions, not just sounds.

Edits come in two granularities sharing one record type:

* note edits (``string >= 1``): a note was added, removed, or modified
  (fret, techniques, or tie flag) inside a beat; beats are paired by exact
  onset and notes within a beat are matched by string, which is unambiguous
  because a beat holds at most one note per string.
* beat edits (``string == BEAT_SLOT``, i.e. 0): the beat structure itself
  changed at an onset: a beat appeared, disappeared, or changed duration.
  These carry the information note edits cannot (rest layout, durations), so
  that replaying a diff on the old bar reconstructs the new one exactly.

Bars with different time signatures are replaced wholesale (every beat and
note removed, then added).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .alignment import AlignmentGrid
from .model import Bar, Note, Technique, Track

__all__ = [
    "BEAT_SLOT",
    "CellDiff",
    "ColumnStatus",
    "EditKind",
    "BeatState",
    "NoteEdit",
    "NoteState",
    "bar_diff",
    "bar_equal",
    "column_statuses",
]

#: ``NoteEdit.string`` value marking a beat-level edit.
BEAT_SLOT = 0


class ColumnStatus(Enum):
    SAME = "Same"
    CHANGED = "Changed"
    MISSING_IN_VERSION = "MissingInVersion"
    EXTRA_IN_VERSION = "ExtraInVersion"


class EditKind(Enum):
    ADDED = "Added"
    REMOVED = "Removed"
    MODIFIED = "Modified"


@dataclass(frozen=True)
class NoteState:
    """Note payload of an edit (everything but its position keys)."""

    fret: int
    techniques: frozenset[Technique]
    tied: bool

    @classmethod
    def of(cls, note: Note) -> NoteState:
        return cls(fret=note.fret, techniques=note.techniques, tied=note.tied)


@dataclass(frozen=True)
class BeatState:
    """Beat payload of a beat-level edit."""

    duration: Fraction


@dataclass(frozen=True)
class NoteEdit:
    """One difference at (onset, string). Modified has both states, Added only
    ``after``, Removed only ``before``."""

    kind: EditKind
    onset: Fraction
    string: int
    before: NoteState | BeatState | None = None
    after: NoteState | BeatState | None = None

    @property
    def is_beat_edit(self) -> bool:
        return self.string == BEAT_SLOT


def bar_equal(a: Bar, b: Bar) -> bool:
    """Identical time signature and beat lists (onsets, durations, notes)."""
    return a.time_signature == b.time_signature and a.beats == b.beats


def _sorted(edits: list[NoteEdit]) -> list[NoteEdit]:
    return sorted(edits, key=lambda e: (e.onset, e.string, e.kind.value))


def _whole_bar_edits(bar: Bar, kind: EditKind) -> list[NoteEdit]:
    edits = []
    for beat in bar.beats:
        state = BeatState(beat.duration)
        before, after = (state, None) if kind is EditKind.REMOVED else (None, state)
        edits.append(NoteEdit(kind, beat.onset, BEAT_SLOT, before=before, after=after))
        for note in beat.notes:
            ns = NoteState.of(note)
            nb, na = (ns, None) if kind is EditKind.REMOVED else (None, ns)
            edits.append(NoteEdit(kind, beat.onset, note.string, before=nb, after=na))
    return edits


def bar_diff(ref_bar: Bar, other_bar: Bar) -> list[NoteEdit]:
    """Edits that turn ``ref_bar`` into ``other_bar``; empty iff bar_equal.

    Sorted by (onset, string, kind); beat edits (string 0) therefore precede
    the note edits of their onset.
    """
    if bar_equal(ref_bar, other_bar):
        return []
    if ref_bar.time_signature != other_bar.time_signature:
        return _sorted(
            _whole_bar_edits(ref_bar, EditKind.REMOVED)
            + _whole_bar_edits(other_bar, EditKind.ADDED)
        )

    a_beats = {beat.onset: beat for beat in ref_bar.beats}
    b_beats = {beat.onset: beat for beat in other_bar.beats}
    edits: list[NoteEdit] = []
    for onset in sorted(set(a_beats) | set(b_beats)):
        a, b = a_beats.get(onset), b_beats.get(onset)
        if a is not None and b is not None:
            if a.duration != b.duration:
                edits.append(
                    NoteEdit(
                        EditKind.MODIFIED,
                        onset,
                        BEAT_SLOT,
                        before=BeatState(a.duration),
                        after=BeatState(b.duration),
                    )
                )
            a_notes = {note.string: note for note in a.notes}
            b_notes = {note.string: note for note in b.notes}
            for string in sorted(set(a_notes) | set(b_notes)):
                na, nb = a_notes.get(string), b_notes.get(string)
                if na is not None and nb is not None:
                    if na != nb:
                        edits.append(
                            NoteEdit(
                                EditKind.MODIFIED,
                                onset,
                                string,
                                before=NoteState.of(na),
                                after=NoteState.of(nb),
                            )
                        )
                elif na is not None:
                    edits.append(NoteEdit(EditKind.REMOVED, onset, string, before=NoteState.of(na)))
                else:
                    edits.append(NoteEdit(EditKind.ADDED, onset, string, after=NoteState.of(nb)))
        elif a is not None:
            edits.append(
                NoteEdit(EditKind.REMOVED, onset, BEAT_SLOT, before=BeatState(a.duration))
            )
            for note in a.notes:
                edits.append(NoteEdit(EditKind.REMOVED, onset, note.string, before=NoteState.of(note)))
        else:
            edits.append(NoteEdit(EditKind.ADDED, onset, BEAT_SLOT, after=BeatState(b.duration)))
            for note in b.notes:
                edits.append(NoteEdit(EditKind.ADDED, onset, note.string, after=NoteState.of(note)))
    return _sorted(edits)


@dataclass(frozen=True)
class CellDiff:
    status: ColumnStatus
    edits: tuple[NoteEdit, ...] = ()


def column_statuses(grid: AlignmentGrid, versions: Sequence[Track]) -> list[list[CellDiff]]:
    """Status (plus edits when Changed) for every (version, column) cell.

    The reference row is Same wherever it holds a bar; at insertion columns it
    has a gap like any other version and reads MissingInVersion.
    """
    if len(versions) != grid.num_versions:
        raise ValueError(f"grid has {grid.num_versions} versions, got {len(versions)} tracks")
    ref_row = grid.rows[grid.reference]
    ref_bars = versions[grid.reference].bars
    out: list[list[CellDiff]] = []
    for v, row in enumerate(grid.rows):
        bars = versions[v].bars
        cells: list[CellDiff] = []
        for c, bar_idx in enumerate(row):
            if bar_idx is None:
                cells.append(CellDiff(ColumnStatus.MISSING_IN_VERSION))
                continue
            ref_idx = ref_row[c]
            if ref_idx is None:
                cells.append(CellDiff(ColumnStatus.EXTRA_IN_VERSION))
                continue
            if v == grid.reference:
                cells.append(CellDiff(ColumnStatus.SAME))
                continue
            ref_bar, bar = ref_bars[ref_idx], bars[bar_idx]
            if bar_equal(ref_bar, bar):
                cells.append(CellDiff(ColumnStatus.SAME))
            else:
                cells.append(CellDiff(ColumnStatus.CHANGED, tuple(bar_diff(ref_bar, bar))))
        out.append(cells)
    return out
