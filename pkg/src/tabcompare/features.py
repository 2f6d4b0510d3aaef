"""Fixed-length bar feature vectors and the bar distance built on them.

Each bar becomes a 28-dimensional vector: 12 chroma entries (duration-weighted
pitch-class mass) plus 16 onset-grid entries (note counts per sixteenth of the
bar). Both halves are L1-normalized, scaled by their weights, concatenated and
L2-normalized. The distance between two bars is one minus the dot product of
their combined vectors, so it is bounded, scale-free, and zero for identical
bars. The same distance drives both the bar alignment and the similarity
coloring.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import Bar, Tuning, pitch_of

__all__ = [
    "CHROMA_DIM",
    "ONSET_SLOTS",
    "BarFeature",
    "bar_distance",
    "bar_feature",
    "chroma_vector",
    "onset_vector",
]

CHROMA_DIM = 12
ONSET_SLOTS = 16


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class BarFeature:
    """Per-bar descriptor: chroma, onset grid, and their weighted combination.

    ``combined`` has unit L2 norm unless the bar is all rests, in which case
    it is all zeros.
    """

    chroma: np.ndarray
    onsets: np.ndarray
    combined: np.ndarray

    @property
    def is_silent(self) -> bool:
        return not self.combined.any()


def chroma_vector(bar: Bar, tuning: Tuning) -> np.ndarray:
    """Duration-weighted pitch-class mass, L1-normalized when nonzero.

    Every note contributes its beat's duration (in whole notes) to the bin of
    its pitch class; tied and dead notes count like any other since they
    occupy sounding time.
    """
    chroma = np.zeros(CHROMA_DIM)
    for beat in bar.beats:
        weight = float(beat.duration)
        for note in beat.notes:
            chroma[pitch_of(note, tuning) % 12] += weight
    total = chroma.sum()
    if total > 0:
        chroma /= total
    return _readonly(chroma)


def onset_vector(bar: Bar) -> np.ndarray:
    """Note counts on a 16-slot onset grid, L1-normalized when nonzero.

    Slot = floor(16 * onset / bar capacity), computed exactly on rationals and
    clamped to the last slot. Rests contribute nothing.
    """
    counts = np.zeros(ONSET_SLOTS)
    capacity = bar.time_signature.capacity
    for beat in bar.beats:
        if not beat.notes:
            continue
        slot = min(int(beat.onset * ONSET_SLOTS / capacity), ONSET_SLOTS - 1)
        counts[slot] += len(beat.notes)
    total = counts.sum()
    if total > 0:
        counts /= total
    return _readonly(counts)


def bar_feature(
    bar: Bar, tuning: Tuning, w_chroma: float = 1.0, w_onset: float = 1.0
) -> BarFeature:
    """Extract the combined feature vector for one bar."""
    chroma = chroma_vector(bar, tuning)
    onsets = onset_vector(bar)
    combined = np.concatenate([w_chroma * chroma, w_onset * onsets])
    norm = np.linalg.norm(combined)
    if norm > 0:
        combined /= norm
    return BarFeature(chroma=chroma, onsets=onsets, combined=_readonly(combined))


def bar_distance(a: BarFeature, b: BarFeature) -> float:
    """Distance in [0, 2]: 0 for two silent bars, 1 when exactly one is silent,
    otherwise one minus the cosine of the combined vectors."""
    a_silent = a.is_silent
    b_silent = b.is_silent
    if a_silent and b_silent:
        return 0.0
    if a_silent or b_silent:
        return 1.0
    if a.combined is b.combined or np.array_equal(a.combined, b.combined):
        return 0.0
    d = 1.0 - float(a.combined @ b.combined)
    return min(max(d, 0.0), 2.0)
