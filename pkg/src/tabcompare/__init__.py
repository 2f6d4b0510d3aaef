"""tabcompare: compare guitar tablature versions of the same piece.

Parses text tablature, aligns the bars of all versions into one column grid,
computes per-bar metrics (note density, fret span, techniques), colors bars by
similarity, diffs every version against a reference, and bundles everything
into a self-contained comparison document served to a browser UI.
"""

from .alignment import AlignParams, AlignmentGrid, PairAlignment, align_pair, choose_reference, merge_alignments
from .coloring import DEFAULT_COLORMAP, ColorMap, ColorStop, color_of, distance_matrix, mds_1d
from .diffing import ColumnStatus, EditKind, NoteEdit, bar_diff, bar_equal, column_statuses
from .document import (
    ComparisonDocument,
    ConfigError,
    RunOptions,
    VersionSelect,
    build_document,
    read_document,
    write_document,
)
from .features import BarFeature, bar_distance, bar_feature, chroma_vector, onset_vector
from .metrics import BarMetrics, bar_metrics, fret_position_mm, fret_span, note_density, techniques_in_bar
from .model import (
    Bar,
    Beat,
    CanonicalError,
    Note,
    Score,
    Technique,
    TimeSignature,
    Track,
    Tuning,
    Violation,
    pitch_of,
    read_canonical,
    validate_score,
    write_canonical,
)
from .tabtext import ParseError, list_tracks, parse_tabtext

__version__ = "0.1.0"
