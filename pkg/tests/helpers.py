"""Shared test utilities: random score generation and independent oracles.

The oracles here deliberately take different routes than the library code:
alignment costs come from exhaustive enumeration of all global alignments,
MDS coordinates from a full eigendecomposition, and diffs are checked by
replaying edits with a small patch interpreter.
"""

from __future__ import annotations

import random
from fractions import Fraction

import numpy as np

from tabcompare.diffing import BeatState, EditKind, NoteEdit, NoteState
from tabcompare.model import Bar, Beat, Note, Score, Technique, TimeSignature, Track, Tuning

# Durations that keep every prefix sum on the 1/16 grid, so greedy tiling
# always completes a 4/4 bar exactly.
TILEABLE_DURATIONS = [
    Fraction(1, 1),
    Fraction(3, 4),
    Fraction(1, 2),
    Fraction(3, 8),
    Fraction(1, 4),
    Fraction(3, 16),
    Fraction(1, 8),
    Fraction(1, 16),
]

ALL_TECHNIQUES = list(Technique)


def random_bar(
    rng: random.Random,
    index: int = 0,
    ts: TimeSignature = TimeSignature(4, 4),
    num_strings: int = 6,
    rest_prob: float = 0.2,
    technique_prob: float = 0.15,
    tie_prob: float = 0.1,
    max_fret: int = 14,
) -> Bar:
    capacity = ts.capacity
    onset = Fraction(0)
    beats: list[Beat] = []
    while onset < capacity:
        remaining = capacity - onset
        duration = rng.choice([d for d in TILEABLE_DURATIONS if d <= remaining])
        notes: tuple[Note, ...] = ()
        if rng.random() >= rest_prob:
            count = min(rng.choice([1, 1, 1, 1, 2, 2, 3]), num_strings)
            strings = sorted(rng.sample(range(1, num_strings + 1), count))
            notes = tuple(
                Note(
                    string=s,
                    fret=rng.randint(0, max_fret),
                    techniques=(
                        frozenset(rng.sample(ALL_TECHNIQUES, rng.randint(1, 2)))
                        if rng.random() < technique_prob
                        else frozenset()
                    ),
                    tied=rng.random() < tie_prob,
                )
                for s in strings
            )
        beats.append(Beat(onset=onset, duration=duration, notes=notes))
        onset += duration
    return Bar(index=index, time_signature=ts, beats=tuple(beats))


def random_track(rng: random.Random, num_bars: int, name: str = "Guitar") -> Track:
    return Track(
        name=name,
        tuning=Tuning(),
        bars=tuple(random_bar(rng, index=i) for i in range(num_bars)),
    )


def random_score(rng: random.Random, num_tracks: int = 1, num_bars: int = 4) -> Score:
    return Score(
        title="Random Fixture",
        tracks=tuple(random_track(rng, num_bars, name=f"Track {t}") for t in range(num_tracks)),
    )


def bars_strategy(max_fret: int = 14):
    """Hypothesis strategy producing valid 4/4 bars via the seeded generator.

    Reuses random_bar so hypothesis explores (and shrinks over) generator
    seeds rather than re-encoding the tiling rules.
    """
    from hypothesis import strategies as st

    return st.builds(lambda seed: random_bar(random.Random(seed)), st.integers(0, 2**32 - 1))


# -- alignment oracle ---------------------------------------------------------


def enumerate_alignments(n: int, m: int):
    """Every global alignment of sequence lengths n and m, as column lists."""

    def rec(i: int, j: int):
        if i == n and j == m:
            yield []
            return
        if i < n and j < m:
            for rest in rec(i + 1, j + 1):
                yield [(i, j)] + rest
        if i < n:
            for rest in rec(i + 1, j):
                yield [(i, None)] + rest
        if j < m:
            for rest in rec(i, j + 1):
                yield [(None, j)] + rest

    yield from rec(0, 0)


def brute_force_alignment_cost(ref, other, gap_cost, distance) -> float:
    """Minimum alignment cost by exhaustive enumeration. Exponential; keep
    sequences short."""
    best = float("inf")
    for columns in enumerate_alignments(len(ref), len(other)):
        cost = sum(
            gap_cost if r is None or o is None else distance(ref[r], other[o])
            for r, o in columns
        )
        best = min(best, cost)
    return best


# -- MDS oracle ---------------------------------------------------------------


def cmds_embedding_eigh(matrix: np.ndarray) -> np.ndarray:
    """1D classical MDS via numpy's full symmetric eigendecomposition."""
    matrix = np.asarray(matrix, dtype=float)
    n = matrix.shape[0]
    centering = np.eye(n) - np.full((n, n), 1.0 / n)
    gram = -0.5 * centering @ (matrix * matrix) @ centering
    eigenvalues, eigenvectors = np.linalg.eigh(gram)
    if eigenvalues[-1] <= 1e-12:
        return np.zeros(n)
    return np.sqrt(eigenvalues[-1]) * eigenvectors[:, -1]


# -- diff patch interpreter ----------------------------------------------------


def apply_edits(bar: Bar, edits: list[NoteEdit]) -> Bar:
    """Replay a diff on a bar: remove Removed, add Added, rewrite Modified.

    Beat creations and duration changes are applied first so note edits always
    find their beat; beat removals run last, once their notes are gone.
    """
    beats: dict[Fraction, list] = {
        beat.onset: [beat.duration, {note.string: note for note in beat.notes}]
        for beat in bar.beats
    }

    for edit in edits:
        if edit.is_beat_edit and edit.kind is not EditKind.REMOVED:
            assert isinstance(edit.after, BeatState)
            if edit.kind is EditKind.ADDED:
                assert edit.onset not in beats, "added beat already present"
                beats[edit.onset] = [edit.after.duration, {}]
            else:
                beats[edit.onset][0] = edit.after.duration

    for edit in edits:
        if edit.is_beat_edit:
            continue
        duration, notes = beats[edit.onset]
        if edit.kind is EditKind.REMOVED:
            assert edit.string in notes, "removed note not present"
            del notes[edit.string]
        else:
            assert isinstance(edit.after, NoteState)
            if edit.kind is EditKind.ADDED:
                assert edit.string not in notes, "added note already present"
            new_note = Note(
                string=edit.string,
                fret=edit.after.fret,
                techniques=edit.after.techniques,
                tied=edit.after.tied,
            )
            notes[edit.string] = new_note

    for edit in edits:
        if edit.is_beat_edit and edit.kind is EditKind.REMOVED:
            duration, notes = beats[edit.onset]
            assert not notes, "removed beat still has notes"
            del beats[edit.onset]

    rebuilt = tuple(
        Beat(onset=onset, duration=beats[onset][0],
             notes=tuple(sorted(beats[onset][1].values(), key=lambda n: n.string)))
        for onset in sorted(beats)
    )
    return Bar(index=bar.index, time_signature=bar.time_signature, beats=rebuilt)
