import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

from tabcompare.model import (
    Bar,
    Beat,
    CanonicalError,
    Note,
    Score,
    Technique,
    TimeSignature,
    Track,
    Tuning,
    pitch_of,
    read_canonical,
    validate_score,
    write_canonical,
)

from helpers import bars_strategy, random_score

STD = Tuning()


def quarter_bar(index=0, notes_per_beat=1):
    beats = tuple(
        Beat(onset=Fraction(i, 4), duration=Fraction(1, 4),
             notes=tuple(Note(string=s + 1, fret=3) for s in range(notes_per_beat)))
        for i in range(4)
    )
    return Bar(index=index, time_signature=TimeSignature(4, 4), beats=beats)


class TestPitchOf:
    def test_open_string_one_is_tuning_pitch(self):
        assert pitch_of(Note(string=1, fret=0), STD) == 64

    def test_open_string_six(self):
        assert pitch_of(Note(string=6, fret=0), STD) == 40

    def test_fretted_low_string(self):
        # 40 + 5 = 45; cross-check: fret 5 on string 6 sounds like open string 5.
        assert pitch_of(Note(string=6, fret=5), STD) == 45
        assert pitch_of(Note(string=6, fret=5), STD) == pitch_of(Note(string=5, fret=0), STD)

    def test_string_out_of_range(self):
        with pytest.raises(ValueError, match="out of tuning range"):
            pitch_of(Note(string=7, fret=0), STD)

    def test_strictly_increasing_in_fret(self):
        pitches = [pitch_of(Note(string=3, fret=f), STD) for f in range(0, 31)]
        assert all(a < b for a, b in zip(pitches, pitches[1:]))


class TestValidateScore:
    def test_well_formed(self):
        score = Score("t", (Track("g", STD, (quarter_bar(0), quarter_bar(1))),))
        assert validate_score(score) == []

    def test_overfull_beat_names_the_beat(self):
        bar = Bar(0, TimeSignature(4, 4), (
            Beat(Fraction(0), Fraction(3, 4)),
            Beat(Fraction(3, 4), Fraction(1, 2)),
        ))
        violations = validate_score(Score("t", (Track("g", STD, (bar,)),)))
        assert any("beats[1]" in v.path and "beyond capacity" in v.rule for v in violations)

    def test_duplicate_string_in_beat(self):
        bar = Bar(0, TimeSignature(4, 4), (
            Beat(Fraction(0), Fraction(1), notes=(Note(3, 5), Note(3, 7))),
        ))
        violations = validate_score(Score("t", (Track("g", STD, (bar,)),)))
        assert len(violations) == 1
        assert "ascending by string" in violations[0].rule

    def test_underfull_bar(self):
        bar = Bar(0, TimeSignature(4, 4), (Beat(Fraction(0), Fraction(1, 2)),))
        violations = validate_score(Score("t", (Track("g", STD, (bar,)),)))
        assert any("tile exactly" in v.rule for v in violations)

    def test_bad_bar_index(self):
        score = Score("t", (Track("g", STD, (quarter_bar(0), quarter_bar(5))),))
        assert any("bar index 5" in v.rule for v in validate_score(score))

    def test_onset_not_prefix_sum(self):
        bar = Bar(0, TimeSignature(4, 4), (
            Beat(Fraction(0), Fraction(1, 4)),
            Beat(Fraction(1, 2), Fraction(1, 2)),
        ))
        violations = validate_score(Score("t", (Track("g", STD, (bar,)),)))
        assert any("prefix sum" in v.rule for v in violations)

    def test_empty_score(self):
        assert validate_score(Score("t", ())) != []

    def test_fret_and_tuning_bounds(self):
        bar = Bar(0, TimeSignature(4, 4), (Beat(Fraction(0), Fraction(1), (Note(1, 31),)),))
        score = Score("t", (Track("g", Tuning((200,)), (bar,)),))
        rules = {v.rule for v in validate_score(score)}
        assert any("fret 31" in r for r in rules)
        assert any("pitch 200" in r for r in rules)


class TestCanonicalFormat:
    def test_minimal_round_trip_is_byte_stable(self):
        score = Score("X", (Track("Gtr", STD, (
            Bar(0, TimeSignature(4, 4), (Beat(Fraction(0), Fraction(1), (Note(3, 5),)),)),
        )),))
        text = write_canonical(score)
        assert read_canonical(text) == score
        assert write_canonical(read_canonical(text)) == text
        assert text.endswith("\n")

    def test_unknown_technique_names_token(self):
        score = Score("X", (Track("Gtr", STD, (
            Bar(0, TimeSignature(4, 4), (Beat(Fraction(0), Fraction(1), (Note(3, 5),)),)),
        )),))
        text = write_canonical(score).replace('"techniques": []', '"techniques": ["Flarp"]')
        with pytest.raises(CanonicalError, match="Flarp"):
            read_canonical(text)

    def test_triplet_duration_round_trips(self):
        text = (
            '{"title": "T", "tracks": [{"name": "g", "tuning": [64, 59, 55, 50, 45, 40],'
            ' "bars": [{"timeSignature": "4/4", "beats": ['
            '{"duration": "1/3", "notes": []},'
            '{"duration": "1/3", "notes": []},'
            '{"duration": "1/3", "notes": [{"string": 1, "fret": 2, "tied": false, "techniques": ["Bend"]}]}'
            "]}]}]}"
        )
        score = read_canonical(text)
        assert score.tracks[0].bars[0].beats[1].duration == Fraction(1, 3)
        rewritten = write_canonical(score)
        assert read_canonical(rewritten) == score
        assert write_canonical(read_canonical(rewritten)) == rewritten

    def test_malformed_json_reports_line(self):
        with pytest.raises(CanonicalError, match="line"):
            read_canonical('{"title": "x",\n  "tracks": [}')

    def test_invalid_structure_reports_path(self):
        text = (
            '{"title": "T", "tracks": [{"name": "g", "tuning": [64], "bars": ['
            '{"timeSignature": "4/4", "beats": [{"duration": "1/2", "notes": []}]}]}]}'
        )
        with pytest.raises(CanonicalError, match=r"tracks\[0\]"):
            read_canonical(text)

    def test_techniques_serialized_in_enum_order(self):
        note = Note(1, 5, techniques=frozenset({Technique.VIBRATO, Technique.BEND}))
        score = Score("X", (Track("g", STD, (
            Bar(0, TimeSignature(4, 4), (Beat(Fraction(0), Fraction(1), (note,)),)),
        )),))
        text = write_canonical(score)
        assert text.index('"Bend"') < text.index('"Vibrato"')

    def test_random_scores_round_trip(self):
        rng = random.Random(4711)
        for _ in range(25):
            score = random_score(rng, num_tracks=rng.randint(1, 3), num_bars=rng.randint(1, 6))
            assert validate_score(score) == []
            text = write_canonical(score)
            assert read_canonical(text) == score
            assert write_canonical(read_canonical(text)) == text


class TestRoundTripHypothesis:
    @settings(max_examples=60, deadline=None)
    @given(bars_strategy())
    def test_single_bar_score_round_trips(self, bar):
        score = Score("p", (Track("g", STD, (bar,)),))
        assert validate_score(score) == []
        text = write_canonical(score)
        assert read_canonical(text) == score
