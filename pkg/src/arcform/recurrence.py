"""Melodic recurrence detection and deviation scoring.

Melodies are compared through transposition-invariant interval profiles
(semitone steps + duration ratios) under a weighted, normalized edit
distance, so the same tune is recognized in any key and at any uniform
tempo scaling.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .errors import AnalysisError
from .score import Part, Piece, skyline

__all__ = [
    "IntervalProfile",
    "RecurrenceMatch",
    "RecurrenceSeries",
    "interval_profile",
    "similarity",
    "find_recurrences",
    "chromaticism_index",
    "estimate_key",
    "classify_cadence",
    "diatonic_set",
]

MAJOR_SET = frozenset({0, 2, 4, 5, 7, 9, 11})
# natural minor plus the raised 7th (leading tone) admitted as diatonic
MINOR_SET = frozenset({0, 2, 3, 5, 7, 8, 10, 11})

DEFAULT_SIMILARITY_WEIGHTS = (0.7, 0.3)
DEFAULT_THRESHOLD = 0.6


@dataclass(frozen=True)
class IntervalProfile:
    """Transposition- and tempo-invariant melodic fingerprint."""

    steps: Tuple[int, ...]
    ratios: Tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.steps) != len(self.ratios):
            raise ValueError("steps/ratios length mismatch")

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class RecurrenceMatch:
    occurrence_index: int
    part: int
    start: Fraction
    end: Fraction
    similarity: float

    @property
    def deviation(self) -> float:
        return 1.0 - self.similarity


@dataclass(frozen=True)
class RecurrenceSeries:
    query: IntervalProfile
    matches: Tuple[RecurrenceMatch, ...]
    outlier_index: Optional[int]


def interval_profile(melody: Part) -> IntervalProfile:
    """Semitone steps and duration ratios between consecutive notes."""
    if not melody.events:
        raise AnalysisError("empty melody")
    if not melody.is_monophonic():
        raise AnalysisError("polyphonic input")
    ev = melody.events
    steps = tuple(b.pitch - a.pitch for a, b in zip(ev, ev[1:]))
    ratios = tuple(b.duration / a.duration for a, b in zip(ev, ev[1:]))
    return IntervalProfile(steps, ratios)


def _edit_distance(a: Sequence, b: Sequence) -> int:
    """Unit-cost Levenshtein distance."""
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, x in enumerate(a, start=1):
        cur = [i]
        for j, y in enumerate(b, start=1):
            cur.append(min(prev[j] + 1,
                           cur[j - 1] + 1,
                           prev[j - 1] + (x != y)))
        prev = cur
    return prev[-1]


def _check_weights(weights: Tuple[float, float]) -> None:
    w1, w2 = weights
    if w1 < 0 or w2 < 0 or abs(w1 + w2 - 1.0) > 1e-9:
        raise AnalysisError("weights must be nonnegative and sum to 1")


def similarity(a: IntervalProfile, b: IntervalProfile,
               weights: Tuple[float, float] = DEFAULT_SIMILARITY_WEIGHTS) -> float:
    """1 minus the weighted normalized edit distance of the two profiles."""
    _check_weights(weights)
    if len(a) == 0 and len(b) == 0:
        return 1.0
    # exact rational arithmetic so the score is reproducible bit-for-bit
    denom = max(len(a), len(b))
    d_steps = Fraction(_edit_distance(a.steps, b.steps), denom)
    d_ratios = Fraction(_edit_distance(a.ratios, b.ratios), denom)
    w_pitch, w_rhythm = (Fraction(w) for w in weights)
    score = 1 - (w_pitch * d_steps + w_rhythm * d_ratios)
    return float(min(Fraction(1), max(Fraction(0), score)))


def find_recurrences(piece: Piece, query: Part,
                     threshold: float = DEFAULT_THRESHOLD,
                     weights: Tuple[float, float] = DEFAULT_SIMILARITY_WEIGHTS,
                     ) -> RecurrenceSeries:
    """Find every non-overlapping statement of the query melody.

    Slides windows of 0.5x to 1.5x the query note count over the skyline of
    each part; candidates at or above the similarity threshold are resolved
    greedily by descending similarity.
    """
    if len(query.events) < 2:
        raise AnalysisError("query shorter than 2 notes")
    if not 0 < threshold <= 1:
        raise AnalysisError("threshold must be in (0, 1]")
    _check_weights(weights)
    qprof = interval_profile(query)
    n = len(query.events)
    lo = max(2, n // 2)
    hi = -(-3 * n // 2)  # ceil(1.5 n)

    candidates = []
    for part in piece.parts:
        if not part.events:
            continue
        line = skyline(Piece(parts=(part,)))
        notes = line.events
        for length in range(lo, min(hi, len(notes)) + 1):
            for start in range(len(notes) - length + 1):
                window = notes[start:start + length]
                prof = interval_profile(Part(voice=part.voice, events=window))
                sim = similarity(qprof, prof, weights)
                if sim >= threshold:
                    candidates.append(
                        (sim, part.voice, window[0].onset, window[-1].end))

    candidates.sort(key=lambda c: (-c[0], c[1], c[2], c[3]))
    chosen: list[Tuple[float, int, Fraction, Fraction]] = []
    for cand in candidates:
        _, voice, start, end = cand
        if any(v == voice and start < e and s < end
               for _, v, s, e in chosen):
            continue
        chosen.append(cand)
    chosen.sort(key=lambda c: (c[2], c[1]))

    matches = tuple(RecurrenceMatch(i, voice, start, end, sim)
                    for i, (sim, voice, start, end) in enumerate(chosen))
    outlier: Optional[int] = None
    if matches:
        max_dev = max(m.deviation for m in matches)
        at_max = [m.occurrence_index for m in matches
                  if m.deviation == max_dev]
        if len(at_max) == 1 and len(matches) > 1:
            outlier = at_max[0]
    return RecurrenceSeries(qprof, matches, outlier)


def diatonic_set(key: Tuple[int, str]) -> frozenset:
    tonic, mode = key
    base = MAJOR_SET if mode == "major" else MINOR_SET
    return frozenset((pc + tonic) % 12 for pc in base)


def chromaticism_index(segment: Part, key: Optional[Tuple[int, str]]) -> Fraction:
    """Fraction of notes whose pitch class falls outside the key."""
    if key is None:
        raise AnalysisError(
            "no key available: supply one or run estimate_key")
    if not segment.events:
        raise AnalysisError("empty segment")
    scale = diatonic_set(key)
    outside = sum(1 for e in segment.events if e.pitch % 12 not in scale)
    return Fraction(outside, len(segment.events))


NATURAL_MINOR_SET = frozenset({0, 2, 3, 5, 7, 8, 10})


def estimate_key(piece: Piece) -> Tuple[int, str]:
    """Best of 24 keys by duration-weighted pitch-class overlap.

    Minor candidates are scored on the natural-minor set (7 pitch
    classes, same size as major) so relative keys tie instead of minor
    always winning; ties prefer major over minor, then the lower tonic
    pitch class. Mode outranks tonic so the result is transposition
    covariant.
    """
    events = piece.all_events()
    if not events:
        raise AnalysisError("empty piece")
    mass = [Fraction(0)] * 12
    for e in events:
        mass[e.pitch % 12] += e.duration
    best = None
    for tonic in range(12):
        for mode in ("major", "minor"):
            base = MAJOR_SET if mode == "major" else NATURAL_MINOR_SET
            scale = frozenset((pc + tonic) % 12 for pc in base)
            score = sum((mass[pc] for pc in scale), Fraction(0))
            rank = (-score, 0 if mode == "major" else 1, tonic)
            if best is None or rank < best[0]:
                best = (rank, (tonic, mode))
    return best[1]


def classify_cadence(piece: Piece,
                     key: Optional[Tuple[int, str]] = None) -> str:
    """Label the final cadence by bass motion: authentic/plagal/half/other."""
    key = key if key is not None else piece.key
    if key is None:
        raise AnalysisError(
            "no key available: supply one or run estimate_key")
    events = piece.all_events()
    onsets: dict[Fraction, list] = {}
    for e in events:
        onsets.setdefault(e.onset, []).append(e)
    if len(onsets) < 2:
        raise AnalysisError("cadence undecidable")
    penult_onset, final_onset = sorted(onsets)[-2:]
    penult, final = onsets[penult_onset], onsets[final_onset]
    if len({e.pitch for e in penult}) < 2 or len({e.pitch for e in final}) < 2:
        raise AnalysisError("cadence undecidable")
    tonic, _ = key
    penult_degree = (min(e.pitch for e in penult) - tonic) % 12
    final_degree = (min(e.pitch for e in final) - tonic) % 12
    if penult_degree == 7 and final_degree == 0:
        return "authentic"
    if penult_degree == 5 and final_degree == 0:
        return "plagal"
    if final_degree == 7:
        return "half"
    return "other"
