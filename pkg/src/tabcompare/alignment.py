"""Global bar-sequence alignment and the multi-version column grid.

Each non-reference version is aligned to the reference with a global
(Needleman-Wunsch style) dynamic program that minimizes the summed bar
distance over matched columns plus a fixed cost per gap. The pairwise results
are then merged into one grid: reference bars become columns in order, and
each maximal run of bars that exist only in one version becomes a block of
extra columns inserted right after the reference bar preceding the run. This
center-star merge is deliberately pairwise; it does not attempt true
multi-sequence alignment, so insertion blocks from different versions at the
same spot stay separate, ordered by version index.

GAP entries are represented as None throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence, TypeVar

from .model import Track

__all__ = [
    "AlignParams",
    "AlignmentGrid",
    "PairAlignment",
    "align_pair",
    "choose_reference",
    "merge_alignments",
]

T = TypeVar("T")

_DIAG, _UP, _LEFT = 1, 2, 3


@dataclass(frozen=True)
class AlignParams:
    """Gap cost for the alignment DP. Matches are scored by the bar distance."""

    gap_cost: float = 0.75

    def __post_init__(self) -> None:
        if self.gap_cost <= 0:
            raise ValueError(f"gap_cost must be positive, got {self.gap_cost}")


@dataclass(frozen=True)
class PairAlignment:
    """Column list of (reference index or None, other index or None)."""

    columns: tuple[tuple[int | None, int | None], ...]
    total_cost: float


@dataclass(frozen=True)
class AlignmentGrid:
    """Global column layout: rows[version][column] is a bar index or None.

    Per version the non-None entries are strictly increasing and cover that
    version's bars exactly once; no column is None for every version.
    """

    reference: int
    rows: tuple[tuple[int | None, ...], ...]

    @property
    def num_columns(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @property
    def num_versions(self) -> int:
        return len(self.rows)


def choose_reference(versions: Sequence[Track]) -> int:
    """Index of the version with the most bars; ties go to the earliest."""
    if not versions:
        raise ValueError("need at least one version")
    counts = [len(track.bars) for track in versions]
    return counts.index(max(counts))


def align_pair(
    ref: Sequence[T],
    other: Sequence[T],
    params: AlignParams,
    distance: Callable[[T, T], float],
) -> PairAlignment:
    """Optimal global alignment of two bar sequences.

    Minimizes the summed distance over substitution columns plus
    ``params.gap_cost`` per gap. Ties are broken during the forward pass with
    the fixed preference substitute > gap-in-other > gap-in-ref, which makes
    the backtrace deterministic.
    """
    n, m = len(ref), len(other)
    if n == 0 or m == 0:
        raise ValueError("align_pair requires two non-empty sequences")
    gap = params.gap_cost

    cost = [[0.0] * (m + 1) for _ in range(n + 1)]
    move = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        cost[i][0] = i * gap
        move[i][0] = _UP
    for j in range(1, m + 1):
        cost[0][j] = j * gap
        move[0][j] = _LEFT
    for i in range(1, n + 1):
        row = cost[i]
        prev = cost[i - 1]
        for j in range(1, m + 1):
            best = prev[j - 1] + distance(ref[i - 1], other[j - 1])
            mv = _DIAG
            up = prev[j] + gap
            if up < best:
                best, mv = up, _UP
            left = row[j - 1] + gap
            if left < best:
                best, mv = left, _LEFT
            row[j] = best
            move[i][j] = mv

    columns: list[tuple[int | None, int | None]] = []
    i, j = n, m
    while i > 0 or j > 0:
        mv = move[i][j]
        if mv == _DIAG:
            i -= 1
            j -= 1
            columns.append((i, j))
        elif mv == _UP:
            i -= 1
            columns.append((i, None))
        else:
            j -= 1
            columns.append((None, j))
    columns.reverse()
    return PairAlignment(columns=tuple(columns), total_cost=cost[n][m])


def _check_pair(pair: PairAlignment, ref_len: int, which: int) -> int:
    """Validate one pairwise alignment against the shared reference; returns
    the other sequence's length."""
    ref_side = [r for r, o in pair.columns if r is not None]
    other_side = [o for r, o in pair.columns if o is not None]
    if any(r is None and o is None for r, o in pair.columns):
        raise ValueError(f"alignment {which}: column with gaps on both sides")
    if ref_side != list(range(ref_len)):
        raise ValueError(f"alignment {which}: reference side does not cover 0..{ref_len - 1}")
    if other_side != list(range(len(other_side))):
        raise ValueError(f"alignment {which}: version side is not 0..n-1 in order")
    return len(other_side)


def merge_alignments(
    ref_len: int, pairs: Sequence[PairAlignment], reference: int = 0
) -> AlignmentGrid:
    """Merge pairwise alignments (each against the same reference) into a grid.

    ``pairs`` holds one alignment per non-reference version, in version order;
    the reference sits at index ``reference`` of the resulting rows.
    """
    num_versions = len(pairs) + 1
    if not 0 <= reference < num_versions:
        raise ValueError(f"reference index {reference} out of range")
    others = [v for v in range(num_versions) if v != reference]

    # Substitution map per version, and insertion runs keyed by the reference
    # bar they follow (-1 for a run before the first reference bar).
    substitutions: dict[int, dict[int, int]] = {v: {} for v in others}
    inserts: dict[tuple[int, int], list[int]] = {}
    for version, pair in zip(others, pairs):
        _check_pair(pair, ref_len, version)
        last_ref = -1
        for r, o in pair.columns:
            if r is not None and o is not None:
                substitutions[version][r] = o
                last_ref = r
            elif r is not None:
                last_ref = r
            else:
                inserts.setdefault((last_ref, version), []).append(o)

    columns: list[list[int | None]] = []

    def emit(entries: list[int | None]) -> None:
        columns.append(entries)

    for r in range(-1, ref_len):
        if r >= 0:
            col: list[int | None] = [None] * num_versions
            col[reference] = r
            for v in others:
                col[v] = substitutions[v].get(r)
            emit(col)
        for v in others:
            for bar_idx in inserts.get((r, v), ()):
                col = [None] * num_versions
                col[v] = bar_idx
                emit(col)

    rows = tuple(tuple(col[v] for col in columns) for v in range(num_versions))
    return AlignmentGrid(reference=reference, rows=rows)
