import random
from fractions import Fraction

from hypothesis import given, settings

from tabcompare.alignment import PairAlignment, merge_alignments
from tabcompare.diffing import (
    BeatState,
    ColumnStatus,
    EditKind,
    NoteEdit,
    NoteState,
    bar_diff,
    bar_equal,
    column_statuses,
)
from tabcompare.model import Bar, Technique, Track, Tuning
from tabcompare.tabtext import parse_tabtext

from helpers import apply_edits, bars_strategy, random_bar



def bar_from(body: str) -> Bar:
    return parse_tabtext(f'\\track "G"\n{body}').tracks[0].bars[0]


class TestBarEqual:
    def test_bar_vs_itself(self):
        bar = bar_from("3.3.4 5.3.4 r.2")
        assert bar_equal(bar, bar)

    def test_fret_change_detected(self):
        assert not bar_equal(bar_from("5.2.1"), bar_from("7.2.1"))

    def test_same_pitch_different_string_is_different(self):
        # fret 5 string 6 and fret 0 string 5 sound identical but are
        # different hand positions, hence different bars
        assert not bar_equal(bar_from("5.6.1"), bar_from("0.5.1"))

    def test_index_is_ignored(self):
        a = bar_from("3.3.1")
        b = Bar(index=7, time_signature=a.time_signature, beats=a.beats)
        assert bar_equal(a, b)


class TestBarDiff:
    def test_identical_bars_empty_diff(self):
        bar = bar_from("3.3.4 5.3.4 (2.4 2.5).2")
        assert bar_diff(bar, bar) == []

    def test_single_fret_modification(self):
        edits = bar_diff(bar_from("5.2.1"), bar_from("7.2.1"))
        assert edits == [
            NoteEdit(
                EditKind.MODIFIED,
                Fraction(0),
                2,
                before=NoteState(5, frozenset(), False),
                after=NoteState(7, frozenset(), False),
            )
        ]

    def test_chord_gains_a_note(self):
        edits = bar_diff(bar_from("(5.2 5.3).1"), bar_from("(5.2 5.3 5.4).1"))
        assert edits == [
            NoteEdit(EditKind.ADDED, Fraction(0), 4, after=NoteState(5, frozenset(), False))
        ]

    def test_technique_and_tie_changes_are_modifications(self):
        edits = bar_diff(bar_from("5.2.1"), bar_from("5.2.1{b}~"))
        (edit,) = edits
        assert edit.kind is EditKind.MODIFIED
        assert edit.after == NoteState(5, frozenset({Technique.BEND}), True)

    def test_beat_duration_change_is_a_beat_edit(self):
        edits = bar_diff(bar_from("5.2.2 r.2"), bar_from("5.2.2. r.4"))
        beat_edits = [e for e in edits if e.is_beat_edit]
        assert any(
            e.kind is EditKind.MODIFIED
            and e.onset == 0
            and e.before == BeatState(Fraction(1, 2))
            and e.after == BeatState(Fraction(3, 4))
            for e in beat_edits
        )

    def test_rest_layout_difference_is_visible(self):
        a = bar_from("3.3.4 r.4 r.2")
        b = bar_from("3.3.4 r.2 r.4")
        edits = bar_diff(a, b)
        assert edits != []
        assert all(e.is_beat_edit for e in edits)
        assert bar_equal(apply_edits(a, edits), b)

    def test_sorted_by_onset_then_string(self):
        a = bar_from("(5.2 5.3).2 7.1.2")
        b = bar_from("(6.2 5.4).2 7.1.2{v}")
        edits = bar_diff(a, b)
        keys = [(e.onset, e.string, e.kind.value) for e in edits]
        assert keys == sorted(keys)

    def test_time_signature_mismatch_replaces_everything(self):
        a = parse_tabtext('\\ts 3 4\n\\track "G"\n0.6.4 0.6.4 0.6.4').tracks[0].bars[0]
        b = bar_from("0.6.1")
        edits = bar_diff(a, b)
        removed = [e for e in edits if e.kind is EditKind.REMOVED]
        added = [e for e in edits if e.kind is EditKind.ADDED]
        assert len(removed) == 6  # 3 beats + 3 notes
        assert len(added) == 2  # 1 beat + 1 note
        assert bar_diff(a, a) == []

    def test_role_swap_symmetry(self):
        rng = random.Random(6)
        for _ in range(50):
            a, b = random_bar(rng), random_bar(rng)
            forward = bar_diff(a, b)
            backward = bar_diff(b, a)
            swapped = [
                NoteEdit(
                    kind={
                        EditKind.ADDED: EditKind.REMOVED,
                        EditKind.REMOVED: EditKind.ADDED,
                        EditKind.MODIFIED: EditKind.MODIFIED,
                    }[e.kind],
                    onset=e.onset,
                    string=e.string,
                    before=e.after,
                    after=e.before,
                )
                for e in forward
            ]
            assert sorted(
                swapped, key=lambda e: (e.onset, e.string, e.kind.value)
            ) == backward

    def test_patch_property_on_random_pairs(self):
        rng = random.Random(8)
        for _ in range(300):
            a, b = random_bar(rng), random_bar(rng)
            edits = bar_diff(a, b)
            assert bar_equal(apply_edits(a, edits), b)
            assert (edits == []) == bar_equal(a, b)

    def test_diff_of_bar_with_itself_is_empty(self):
        rng = random.Random(9)
        for _ in range(50):
            bar = random_bar(rng)
            assert bar_diff(bar, bar) == []


def make_track(bars) -> Track:
    rebuilt = tuple(
        Bar(index=i, time_signature=b.time_signature, beats=b.beats) for i, b in enumerate(bars)
    )
    return Track(name="G", tuning=Tuning(), bars=rebuilt)


class TestColumnStatuses:
    def test_identical_versions_all_same(self):
        rng = random.Random(10)
        bars = [random_bar(rng, index=i) for i in range(4)]
        track = make_track(bars)
        pair = PairAlignment(tuple((i, i) for i in range(4)), 0.0)
        grid = merge_alignments(4, [pair], reference=0)
        statuses = column_statuses(grid, [track, track])
        assert all(cell.status is ColumnStatus.SAME for row in statuses for cell in row)
        assert all(cell.edits == () for row in statuses for cell in row)

    def test_missing_bar_in_version(self):
        rng = random.Random(11)
        bars = [random_bar(rng, index=i) for i in range(6)]
        ref = make_track(bars)
        other = make_track(bars[:5] + bars[6:])  # drop bar 5
        pair = PairAlignment(
            tuple((i, i) for i in range(5)) + ((5, None),), 0.75
        )
        grid = merge_alignments(6, [pair], reference=0)
        statuses = column_statuses(grid, [ref, other])
        assert statuses[1][5].status is ColumnStatus.MISSING_IN_VERSION
        assert all(statuses[1][c].status is ColumnStatus.SAME for c in (0, 1, 2, 3, 4))

    def test_insertion_column_statuses(self):
        rng = random.Random(12)
        ref_bars = [random_bar(rng, index=i) for i in range(3)]
        extra = random_bar(rng)
        ref = make_track(ref_bars)
        v1 = make_track(ref_bars)  # identical to reference
        v2 = make_track(ref_bars[:1] + [extra] + ref_bars[1:])  # insert after bar 0
        pair1 = PairAlignment(tuple((i, i) for i in range(3)), 0.0)
        pair2 = PairAlignment(((0, 0), (None, 1), (1, 2), (2, 3)), 0.75)
        grid = merge_alignments(3, [pair1, pair2], reference=0)
        statuses = column_statuses(grid, [ref, v1, v2])
        insert_col = 1
        assert statuses[2][insert_col].status is ColumnStatus.EXTRA_IN_VERSION
        assert statuses[0][insert_col].status is ColumnStatus.MISSING_IN_VERSION
        assert statuses[1][insert_col].status is ColumnStatus.MISSING_IN_VERSION

    def test_changed_cell_carries_edits(self):
        base = bar_from("5.2.1")
        changed = bar_from("7.2.1")
        ref = make_track([base])
        other = make_track([changed])
        pair = PairAlignment(((0, 0),), 0.1)
        grid = merge_alignments(1, [pair], reference=0)
        statuses = column_statuses(grid, [ref, other])
        cell = statuses[1][0]
        assert cell.status is ColumnStatus.CHANGED
        assert len(cell.edits) == 1
        assert cell.edits[0].kind is EditKind.MODIFIED

    def test_reference_row_same_where_present(self):
        rng = random.Random(14)
        ref_bars = [random_bar(rng, index=i) for i in range(2)]
        other_bars = [random_bar(rng, index=i) for i in range(3)]
        ref = make_track(ref_bars)
        other = make_track(other_bars)
        pair = PairAlignment(((0, 0), (None, 1), (1, 2)), 1.0)
        grid = merge_alignments(2, [pair], reference=0)
        statuses = column_statuses(grid, [ref, other])
        for c in range(grid.num_columns):
            if grid.rows[0][c] is not None:
                assert statuses[0][c].status is ColumnStatus.SAME
            else:
                assert statuses[0][c].status is ColumnStatus.MISSING_IN_VERSION


class TestPatchPropertyHypothesis:
    @settings(max_examples=120, deadline=None)
    @given(bars_strategy(), bars_strategy())
    def test_patch_reaches_target(self, a, b):
        edits = bar_diff(a, b)
        assert bar_equal(apply_edits(a, edits), b)
        assert (edits == []) == bar_equal(a, b)
