"""Score data model, pitch arithmetic, validation, and the canonical format.

A Score holds Tracks, a Track holds Bars, a Bar holds Beats, and a Beat holds
Notes. All durations and onsets are exact rationals (``fractions.Fraction``,
measured in whole notes), so bar arithmetic never rounds. Beats tile their bar
exactly: silence is written as explicit rest beats (a beat with no notes), and
every beat's onset is the sum of the preceding beats' durations.

All types are plain immutable containers; construction does not validate.
``validate_score`` reports every invariant violation together with the path of
the offending element, which keeps parsing, testing and error reporting in one
place.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any

__all__ = [
    "MAX_FRET",
    "MAX_STRINGS",
    "STANDARD_TUNING",
    "VALID_DENOMINATORS",
    "Bar",
    "Beat",
    "CanonicalError",
    "Note",
    "Score",
    "Technique",
    "TimeSignature",
    "Track",
    "Tuning",
    "Violation",
    "pitch_of",
    "read_canonical",
    "validate_score",
    "write_canonical",
]

VALID_DENOMINATORS = (1, 2, 4, 8, 16, 32)
MAX_FRET = 30
MAX_STRINGS = 12

#: MIDI pitches of a standard-tuned six string guitar, string 1 (high E) first.
STANDARD_TUNING: tuple[int, ...] = (64, 59, 55, 50, 45, 40)


class Technique(Enum):
    """Closed vocabulary of per-note playing technique annotations."""

    BEND = "Bend"
    PALM_MUTE = "PalmMute"
    NATURAL_HARMONIC = "NaturalHarmonic"
    HAMMER_ON = "HammerOn"
    PULL_OFF = "PullOff"
    SLIDE = "Slide"
    VIBRATO = "Vibrato"
    LET_RING = "LetRing"
    STACCATO = "Staccato"
    TAP = "Tap"
    DEAD_NOTE = "DeadNote"


_TECHNIQUE_ORDER: dict[Technique, int] = {t: i for i, t in enumerate(Technique)}
_TECHNIQUE_BY_NAME: dict[str, Technique] = {t.value: t for t in Technique}


def technique_sort_key(technique: Technique) -> int:
    """Stable ordering used everywhere techniques are serialized or stacked."""
    return _TECHNIQUE_ORDER[technique]


@dataclass(frozen=True)
class TimeSignature:
    numerator: int
    denominator: int

    @property
    def capacity(self) -> Fraction:
        """Bar length as an exact fraction of a whole note."""
        return Fraction(self.numerator, self.denominator)

    def __str__(self) -> str:
        return f"{self.numerator}/{self.denominator}"


@dataclass(frozen=True)
class Note:
    """One fretted (or open) string position. String 1 is the highest pitched.

    ``tied`` marks the note as the continuation of the previous one: it keeps
    sounding but is not attacked again.
    """

    string: int
    fret: int
    techniques: frozenset[Technique] = frozenset()
    tied: bool = False


@dataclass(frozen=True)
class Beat:
    """Simultaneous notes at one onset. An empty note list is a rest."""

    onset: Fraction
    duration: Fraction
    notes: tuple[Note, ...] = ()


@dataclass(frozen=True)
class Bar:
    index: int
    time_signature: TimeSignature
    beats: tuple[Beat, ...]


@dataclass(frozen=True)
class Tuning:
    """Open-string MIDI pitches, string 1 first."""

    pitches: tuple[int, ...] = STANDARD_TUNING

    @property
    def num_strings(self) -> int:
        return len(self.pitches)


@dataclass(frozen=True)
class Track:
    name: str
    tuning: Tuning
    bars: tuple[Bar, ...]


@dataclass(frozen=True)
class Score:
    title: str
    tracks: tuple[Track, ...]


def pitch_of(note: Note, tuning: Tuning) -> int:
    """MIDI pitch of a note under a tuning: open-string pitch plus fret."""
    if not 1 <= note.string <= tuning.num_strings:
        raise ValueError(
            f"string {note.string} out of tuning range (1..{tuning.num_strings})"
        )
    return tuning.pitches[note.string - 1] + note.fret


@dataclass(frozen=True)
class Violation:
    """One broken invariant: where (path into the score) and which rule."""

    path: str
    rule: str

    def __str__(self) -> str:
        return f"{self.path}: {self.rule}"


def _validate_bar(bar: Bar, num_strings: int, path: str, out: list[Violation]) -> None:
    ts = bar.time_signature
    ts_ok = True
    if ts.numerator < 1:
        out.append(Violation(path, f"time signature numerator {ts.numerator} must be positive"))
        ts_ok = False
    if ts.denominator not in VALID_DENOMINATORS:
        out.append(
            Violation(path, f"time signature denominator {ts.denominator} not in {VALID_DENOMINATORS}")
        )
        ts_ok = False

    capacity = ts.capacity if ts_ok else None
    expected_onset = Fraction(0)
    for b, beat in enumerate(bar.beats):
        bpath = f"{path}.beats[{b}]"
        if beat.duration <= 0:
            out.append(Violation(bpath, f"duration {beat.duration} must be positive"))
        if beat.onset < 0:
            out.append(Violation(bpath, f"onset {beat.onset} must be non-negative"))
        elif beat.onset != expected_onset:
            out.append(
                Violation(bpath, f"onset {beat.onset} is not the prefix sum {expected_onset}")
            )
        expected_onset = beat.onset + beat.duration
        if capacity is not None and expected_onset > capacity:
            out.append(Violation(bpath, f"beat ends at {expected_onset}, beyond capacity {capacity}"))

        last_string = 0
        for n, note in enumerate(beat.notes):
            npath = f"{bpath}.notes[{n}]"
            if not 1 <= note.string <= num_strings:
                out.append(Violation(npath, f"string {note.string} outside 1..{num_strings}"))
            if note.string <= last_string:
                out.append(
                    Violation(npath, f"notes not strictly ascending by string at string {note.string}")
                )
            last_string = note.string
            if not 0 <= note.fret <= MAX_FRET:
                out.append(Violation(npath, f"fret {note.fret} outside 0..{MAX_FRET}"))

    if capacity is not None and expected_onset != capacity:
        out.append(
            Violation(path, f"beats fill {expected_onset} of {capacity}; bars must tile exactly")
        )


def validate_score(score: Score) -> list[Violation]:
    """Check every model invariant; returns one Violation per broken rule.

    An empty result means the score is valid. Violations are reported, never
    raised, so callers can collect and present all problems at once.
    """
    out: list[Violation] = []
    if not score.tracks:
        out.append(Violation("tracks", "score must have at least one track"))
    for t, track in enumerate(score.tracks):
        tpath = f"tracks[{t}]"
        if not 1 <= track.tuning.num_strings <= MAX_STRINGS:
            out.append(
                Violation(f"{tpath}.tuning", f"{track.tuning.num_strings} strings outside 1..{MAX_STRINGS}")
            )
        for p, pitch in enumerate(track.tuning.pitches):
            if not 0 <= pitch <= 127:
                out.append(Violation(f"{tpath}.tuning[{p}]", f"pitch {pitch} outside 0..127"))
        for i, bar in enumerate(track.bars):
            bpath = f"{tpath}.bars[{i}]"
            if bar.index != i:
                out.append(Violation(bpath, f"bar index {bar.index} should be {i}"))
            _validate_bar(bar, track.tuning.num_strings, bpath, out)
    return out


class CanonicalError(Exception):
    """Malformed canonical document; carries the path (and line, for JSON errors)."""

    def __init__(self, message: str, path: str = "$", line: int | None = None):
        self.message = message
        self.path = path
        self.line = line
        where = f"line {line}" if line is not None else path
        super().__init__(f"{where}: {message}")


def _format_fraction(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def _score_to_jsonable(score: Score) -> dict[str, Any]:
    return {
        "title": score.title,
        "tracks": [
            {
                "name": track.name,
                "tuning": list(track.tuning.pitches),
                "bars": [bar_to_jsonable(bar) for bar in track.bars],
            }
            for track in score.tracks
        ],
    }


def bar_to_jsonable(bar: Bar) -> dict[str, Any]:
    """Bar as canonical-format plain data (onsets implicit, keys ordered)."""
    return {
        "timeSignature": str(bar.time_signature),
        "beats": [
            {
                "duration": _format_fraction(beat.duration),
                "notes": [
                    {
                        "string": note.string,
                        "fret": note.fret,
                        "tied": note.tied,
                        "techniques": [
                            t.value for t in sorted(note.techniques, key=technique_sort_key)
                        ],
                    }
                    for note in beat.notes
                ],
            }
            for beat in bar.beats
        ],
    }


def write_canonical(score: Score) -> str:
    """Serialize a score to the canonical interchange text.

    Deterministic: fixed key order, rationals as "n/d", techniques in
    enumeration order, 2-space indentation, trailing newline.
    """
    return json.dumps(_score_to_jsonable(score), indent=2, ensure_ascii=False) + "\n"


def _expect(value: Any, kind: type, what: str, path: str) -> Any:
    if kind is int and isinstance(value, bool):
        raise CanonicalError(f"expected {what}, got {value!r}", path)
    if not isinstance(value, kind):
        raise CanonicalError(f"expected {what}, got {type(value).__name__}", path)
    return value


def _get(obj: dict, key: str, kind: type, what: str, path: str) -> Any:
    if key not in obj:
        raise CanonicalError(f"missing key '{key}'", path)
    return _expect(obj[key], kind, what, f"{path}.{key}")


def _parse_fraction(text: str, path: str) -> Fraction:
    num, sep, den = text.partition("/")
    if not sep or not num.isdigit() or not den.isdigit() or int(den) == 0:
        raise CanonicalError(f"expected rational 'n/d', got {text!r}", path)
    return Fraction(int(num), int(den))


def bar_from_jsonable(obj: Any, index: int, path: str) -> Bar:
    """Inverse of :func:`bar_to_jsonable`; raises CanonicalError with path context."""
    _expect(obj, dict, "object", path)
    ts_text = _get(obj, "timeSignature", str, "string", path)
    num, sep, den = ts_text.partition("/")
    if not sep or not num.isdigit() or not den.isdigit():
        raise CanonicalError(f"expected time signature 'n/d', got {ts_text!r}", f"{path}.timeSignature")
    ts = TimeSignature(int(num), int(den))

    beats: list[Beat] = []
    onset = Fraction(0)
    for b, beat_obj in enumerate(_get(obj, "beats", list, "array", path)):
        bpath = f"{path}.beats[{b}]"
        _expect(beat_obj, dict, "object", bpath)
        duration = _parse_fraction(_get(beat_obj, "duration", str, "string", bpath), f"{bpath}.duration")
        notes: list[Note] = []
        for n, note_obj in enumerate(_get(beat_obj, "notes", list, "array", bpath)):
            npath = f"{bpath}.notes[{n}]"
            _expect(note_obj, dict, "object", npath)
            techniques = set()
            for token in _get(note_obj, "techniques", list, "array", npath):
                _expect(token, str, "string", f"{npath}.techniques")
                technique = _TECHNIQUE_BY_NAME.get(token)
                if technique is None:
                    raise CanonicalError(f"unknown technique {token!r}", f"{npath}.techniques")
                techniques.add(technique)
            notes.append(
                Note(
                    string=_get(note_obj, "string", int, "integer", npath),
                    fret=_get(note_obj, "fret", int, "integer", npath),
                    techniques=frozenset(techniques),
                    tied=_get(note_obj, "tied", bool, "boolean", npath),
                )
            )
        beats.append(Beat(onset=onset, duration=duration, notes=tuple(notes)))
        onset += duration
    return Bar(index=index, time_signature=ts, beats=tuple(beats))


def read_canonical(data: str | bytes) -> Score:
    """Parse the canonical interchange text back into a Score.

    The result is fully validated; any malformed structure, unknown technique
    token, or invariant violation raises CanonicalError.
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise CanonicalError(f"not valid UTF-8: {exc.reason}") from exc
    try:
        root = json.loads(data)
    except json.JSONDecodeError as exc:
        raise CanonicalError(exc.msg, line=exc.lineno) from exc

    _expect(root, dict, "object", "$")
    title = _get(root, "title", str, "string", "$")
    tracks: list[Track] = []
    tracks_obj = _get(root, "tracks", list, "array", "$")
    for t, track_obj in enumerate(tracks_obj):
        tpath = f"$.tracks[{t}]"
        _expect(track_obj, dict, "object", tpath)
        name = _get(track_obj, "name", str, "string", tpath)
        pitches = []
        for p, pitch in enumerate(_get(track_obj, "tuning", list, "array", tpath)):
            pitches.append(_expect(pitch, int, "integer", f"{tpath}.tuning[{p}]"))
        bars = [
            bar_from_jsonable(bar_obj, i, f"{tpath}.bars[{i}]")
            for i, bar_obj in enumerate(_get(track_obj, "bars", list, "array", tpath))
        ]
        tracks.append(Track(name=name, tuning=Tuning(tuple(pitches)), bars=tuple(bars)))

    score = Score(title=title, tracks=tuple(tracks))
    violations = validate_score(score)
    if violations:
        first = violations[0]
        raise CanonicalError(first.rule, path=f"$.{first.path}")
    return score
