"""Parser for the ``.tabtxt`` plain-text tablature format.

The format is line-structure free: tokens separated by whitespace, ``//``
comments running to end of line. Constructs:

    \\title "..."             score title
    \\ts N D                  time signature for the following bars
                              (D one of 1,2,4,8,16,32; default 4/4)
    \\track "NAME"            starts a new track
    \\tuning p1 p2 ...        open-string MIDI pitches, string 1 first, all on
                              the directive's line; allowed between \\track
                              and its first bar
    fret.string.dur           note (dur one of 1,2,4,8,16,32)
    r.dur                     rest
    (f.s f.s ...).dur         chord
    ...dur.                   a trailing dot after dur lengthens it 1.5x
    {t1 t2 ...}               technique suffix after a note or chord
    ~                         tie suffix: the note(s) continue the previous
                              attack instead of being struck again
    |                         bar line; the one before \\track or EOF may be
                              omitted

Technique tokens: b=Bend pm=PalmMute nh=NaturalHarmonic h=HammerOn p=PullOff
sl=Slide v=Vibrato lr=LetRing st=Staccato tp=Tap x=DeadNote.

Every bar must exactly fill its time signature; silence is spelled with
explicit rests. Parsing is total: any input either yields a Score that passes
``validate_score`` or raises exactly one ParseError (the first one).
"""

from __future__ import annotations

from fractions import Fraction

from .model import (
    MAX_FRET,
    STANDARD_TUNING,
    VALID_DENOMINATORS,
    Bar,
    Beat,
    Note,
    Score,
    Technique,
    TimeSignature,
    Track,
    Tuning,
)

__all__ = ["ParseError", "TECHNIQUE_TOKENS", "list_tracks", "parse_tabtext", "score_tracks"]

TECHNIQUE_TOKENS: dict[str, Technique] = {
    "b": Technique.BEND,
    "pm": Technique.PALM_MUTE,
    "nh": Technique.NATURAL_HARMONIC,
    "h": Technique.HAMMER_ON,
    "p": Technique.PULL_OFF,
    "sl": Technique.SLIDE,
    "v": Technique.VIBRATO,
    "lr": Technique.LET_RING,
    "st": Technique.STACCATO,
    "tp": Technique.TAP,
    "x": Technique.DEAD_NOTE,
}

_DIRECTIVES = ("title", "ts", "track", "tuning")


class ParseError(Exception):
    """First syntax or structure error in a .tabtxt source."""

    def __init__(self, line: int, column: int, message: str, snippet: str):
        self.line = line
        self.column = column
        self.message = message
        self.snippet = snippet
        super().__init__(f"line {line}, column {column}: {message}")


class _TrackState:
    __slots__ = ("name", "tuning", "bars", "beats", "onset", "locked")

    def __init__(self, name: str):
        self.name = name
        self.tuning: tuple[int, ...] = STANDARD_TUNING
        self.bars: list[Bar] = []
        self.beats: list[Beat] = []
        self.onset = Fraction(0)
        self.locked = False  # True once bar content exists; forbids \tuning


class _Parser:
    def __init__(self, source: str):
        self.src = source
        self.pos = 0
        self.n = len(source)
        self.title = ""
        self.ts = TimeSignature(4, 4)
        self.tracks: list[_TrackState] = []
        self.track: _TrackState | None = None

    # -- error reporting ----------------------------------------------------

    def error(self, message: str, at: int | None = None) -> ParseError:
        pos = self.pos if at is None else at
        pos = min(pos, self.n)
        line_start = self.src.rfind("\n", 0, pos) + 1
        line_end = self.src.find("\n", pos)
        if line_end < 0:
            line_end = self.n
        line = self.src.count("\n", 0, pos) + 1
        return ParseError(line, pos - line_start + 1, message, self.src[line_start:line_end])

    # -- low-level scanning -------------------------------------------------

    def peek(self) -> str:
        return self.src[self.pos] if self.pos < self.n else ""

    def skip_space(self) -> None:
        while self.pos < self.n:
            c = self.src[self.pos]
            if c in " \t\r\n":
                self.pos += 1
            elif c == "/" and self.src.startswith("//", self.pos):
                nl = self.src.find("\n", self.pos)
                self.pos = self.n if nl < 0 else nl + 1
            else:
                return

    def expect(self, char: str, what: str) -> None:
        if self.peek() != char:
            raise self.error(f"expected '{char}' {what}")
        self.pos += 1

    def read_int(self, what: str) -> int:
        start = self.pos
        while self.pos < self.n and self.src[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise self.error(f"expected {what}")
        return int(self.src[start : self.pos])

    def read_word(self) -> str:
        start = self.pos
        while self.pos < self.n and (self.src[self.pos].isalpha() or self.src[self.pos].isdigit()):
            self.pos += 1
        return self.src[start : self.pos]

    def read_quoted(self, what: str) -> str:
        self.skip_space()
        if self.peek() != '"':
            raise self.error(f'expected quoted {what}')
        self.pos += 1
        start = self.pos
        while self.pos < self.n and self.src[self.pos] not in '"\n':
            self.pos += 1
        if self.peek() != '"':
            raise self.error(f"unterminated {what} string", at=start - 1)
        text = self.src[start : self.pos]
        self.pos += 1
        return text

    # -- structure ----------------------------------------------------------

    def in_open_bar(self) -> bool:
        return self.track is not None and bool(self.track.beats)

    def close_bar(self, at: int) -> None:
        track = self.track
        assert track is not None and track.beats
        capacity = self.ts.capacity
        if track.onset != capacity:
            raise self.error(
                f"bar is underfull: beats fill {track.onset} of {capacity}", at=at
            )
        track.bars.append(
            Bar(index=len(track.bars), time_signature=self.ts, beats=tuple(track.beats))
        )
        track.beats = []
        track.onset = Fraction(0)

    def parse_directive(self) -> None:
        at = self.pos
        self.pos += 1  # backslash
        name = self.read_word()
        if name not in _DIRECTIVES:
            raise self.error(f"unknown directive '\\{name}'", at=at)
        if self.in_open_bar() and name != "track":
            raise self.error(f"\\{name} is not allowed inside a bar", at=at)

        if name == "title":
            self.title = self.read_quoted("title")
        elif name == "ts":
            self.skip_space()
            numerator = self.read_int("time signature numerator")
            if numerator < 1:
                raise self.error("time signature numerator must be positive")
            self.skip_space()
            at_den = self.pos
            denominator = self.read_int("time signature denominator")
            if denominator not in VALID_DENOMINATORS:
                raise self.error(
                    f"time signature denominator {denominator} not one of "
                    + ",".join(str(d) for d in VALID_DENOMINATORS),
                    at=at_den,
                )
            self.ts = TimeSignature(numerator, denominator)
        elif name == "track":
            if self.in_open_bar():
                self.close_bar(at)
            self.track = _TrackState(self.read_quoted("track name"))
            self.tracks.append(self.track)
        elif name == "tuning":
            if self.track is None:
                raise self.error("\\tuning requires a \\track", at=at)
            if self.track.locked or self.track.bars:
                raise self.error("\\tuning must come before the track's first bar", at=at)
            pitches: list[int] = []
            while True:
                # Pitches live on the directive's own line; a newline ends the
                # list so a following bar's fret numbers are never swallowed.
                while self.peek() in " \t":
                    self.pos += 1
                if not self.peek().isdigit():
                    break
                at_pitch = self.pos
                pitch = self.read_int("tuning pitch")
                if not 0 <= pitch <= 127:
                    raise self.error(f"tuning pitch {pitch} outside 0..127", at=at_pitch)
                pitches.append(pitch)
            if not pitches:
                raise self.error("expected at least one tuning pitch")
            if len(pitches) > 12:
                raise self.error(f"tuning has {len(pitches)} strings, maximum is 12", at=at)
            self.track.tuning = tuple(pitches)

    def read_duration(self) -> Fraction:
        at = self.pos
        base = self.read_int("duration")
        if base not in VALID_DENOMINATORS:
            raise self.error(
                f"invalid duration {base}, expected one of "
                + ",".join(str(d) for d in VALID_DENOMINATORS),
                at=at,
            )
        duration = Fraction(1, base)
        if self.peek() == ".":
            self.pos += 1
            duration *= Fraction(3, 2)
        return duration

    def read_fret_string(self, num_strings: int) -> tuple[int, int]:
        at = self.pos
        fret = self.read_int("fret number")
        if fret > MAX_FRET:
            raise self.error(f"fret {fret} exceeds {MAX_FRET}", at=at)
        self.expect(".", "after fret")
        at_string = self.pos
        string = self.read_int("string number")
        if string < 1:
            raise self.error("string numbers start at 1", at=at_string)
        if string > num_strings:
            raise self.error(f"string {string} exceeds tuning ({num_strings} strings)", at=at_string)
        return fret, string

    def parse_beat(self) -> None:
        at = self.pos
        if self.track is None:
            raise self.error("expected \\track before bar content")
        track = self.track
        num_strings = len(track.tuning)

        positions: list[tuple[int, int]] = []
        is_rest = False
        if self.peek() == "(":
            self.pos += 1
            while True:
                self.skip_space()
                if self.peek() == ")":
                    self.pos += 1
                    break
                if not self.peek().isdigit():
                    raise self.error("expected fret.string or ')' in chord")
                at_pair = self.pos
                fret, string = self.read_fret_string(num_strings)
                if any(s == string for _, s in positions):
                    raise self.error(f"duplicate string {string} in chord", at=at_pair)
                positions.append((fret, string))
            if not positions:
                raise self.error("empty chord", at=at)
            self.expect(".", "after chord")
        elif self.peek() == "r":
            self.pos += 1
            is_rest = True
            self.expect(".", "after rest")
        else:
            positions.append(self.read_fret_string(num_strings))
            self.expect(".", "after string")
        duration = self.read_duration()

        techniques: frozenset[Technique] = frozenset()
        if self.peek() == "{":
            if is_rest:
                raise self.error("techniques require a note")
            self.pos += 1
            found: set[Technique] = set()
            while True:
                self.skip_space()
                if self.peek() == "}":
                    self.pos += 1
                    break
                at_tok = self.pos
                token = self.read_word()
                if not token:
                    raise self.error("expected technique token or '}'")
                technique = TECHNIQUE_TOKENS.get(token)
                if technique is None:
                    raise self.error(f"unknown technique '{token}'", at=at_tok)
                found.add(technique)
            if not found:
                raise self.error("empty technique list", at=at)
            techniques = frozenset(found)

        tied = False
        if self.peek() == "~":
            if is_rest:
                raise self.error("tie requires a note")
            self.pos += 1
            tied = True

        capacity = self.ts.capacity
        end = track.onset + duration
        if end > capacity:
            raise self.error(
                f"beat ends at {end}, beyond the {self.ts} bar capacity {capacity}", at=at
            )
        notes = tuple(
            Note(string=s, fret=f, techniques=techniques, tied=tied)
            for f, s in sorted(positions, key=lambda p: p[1])
        )
        track.beats.append(Beat(onset=track.onset, duration=duration, notes=notes))
        track.onset = end
        track.locked = True

    def parse(self) -> Score:
        while True:
            self.skip_space()
            c = self.peek()
            if not c:
                break
            if c == "\\":
                self.parse_directive()
            elif c == "|":
                if not self.in_open_bar():
                    raise self.error("empty bar: expected notes before '|'")
                self.close_bar(self.pos)
                self.pos += 1
            elif c == "(" or c == "r" or c.isdigit():
                self.parse_beat()
            else:
                raise self.error(f"unexpected character {c!r}")
        if self.in_open_bar():
            self.close_bar(self.n)
        if not self.tracks:
            raise self.error("expected \\track")
        return Score(
            title=self.title,
            tracks=tuple(
                Track(name=t.name, tuning=Tuning(t.tuning), bars=tuple(t.bars))
                for t in self.tracks
            ),
        )


def parse_tabtext(source: str) -> Score:
    """Parse .tabtxt source into a Score, raising ParseError on the first problem."""
    return _Parser(source).parse()


def score_tracks(score: Score) -> list[tuple[int, str, int, int]]:
    """Per track: (index, name, number of strings, number of bars)."""
    return [
        (i, track.name, track.tuning.num_strings, len(track.bars))
        for i, track in enumerate(score.tracks)
    ]


def list_tracks(source: str) -> list[tuple[int, str, int, int]]:
    """Track menu for a .tabtxt source; propagates ParseError."""
    return score_tracks(parse_tabtext(source))
