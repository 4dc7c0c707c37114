"""Salience curve, climax location, and temporal asymmetry statistics.

The salience of a window is a convex combination of normalized pitch
height, onset density, and velocity; the climax is the earliest maximum
of the curve, so any measured delay is conservative.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

from .errors import AnalysisError
from .score import Piece

__all__ = [
    "ClimaxProfile",
    "salience_curve",
    "locate_climax",
    "climax_profile",
    "DEFAULT_SALIENCE_WEIGHTS",
    "DEFAULT_WINDOW",
]

DEFAULT_SALIENCE_WEIGHTS = (0.4, 0.3, 0.3)
DEFAULT_WINDOW = Fraction(4)

Curve = Tuple[Tuple[Fraction, float], ...]


@dataclass(frozen=True)
class ClimaxProfile:
    curve: Curve
    peak_time: Fraction
    normalized_position: float
    asymmetry_index: float
    pre_mass_fraction: float


def _check_weights(weights: Tuple[float, float, float]) -> None:
    if len(weights) != 3 or any(w < 0 for w in weights):
        raise AnalysisError("salience weights must be three nonnegative values")
    if abs(sum(weights) - 1.0) > 1e-9:
        raise AnalysisError("salience weights must sum to 1")


def salience_curve(piece: Piece,
                   weights: Tuple[float, float, float] = DEFAULT_SALIENCE_WEIGHTS,
                   window: Fraction = DEFAULT_WINDOW) -> Curve:
    """Sample salience on a grid of half-window steps over [0, beats_total].

    Windows are centered on the grid points and clipped to the piece.
    """
    _check_weights(weights)
    window = Fraction(window)
    if window <= 0:
        raise AnalysisError("window must be positive")
    events = piece.all_events()
    if not events:
        raise AnalysisError("empty piece")
    total = piece.beats_total
    if total <= 0:
        raise AnalysisError("zero-duration piece")

    # evenly spaced grid including both endpoints, spacing <= window/2;
    # mirror-symmetric so time reversal maps grid points to grid points
    step = window / 2
    n_steps = max(1, -(-total // step))  # ceil
    times = [total * k / n_steps for k in range(int(n_steps) + 1)]

    pmin = min(e.pitch for e in events)
    pmax = max(e.pitch for e in events)
    half = window / 2

    pitch_comp: list[float] = []
    vel_comp: list[float] = []
    counts: list[int] = []
    for t in times:
        lo = max(Fraction(0), t - half)
        hi = min(total, t + half)
        pitch_mass = Fraction(0)
        vel_mass = Fraction(0)
        overlap_total = Fraction(0)
        count = 0
        for e in events:
            overlap = min(e.end, hi) - max(e.onset, lo)
            if overlap > 0:
                pitch_mass += e.pitch * overlap
                vel_mass += e.velocity * overlap
                overlap_total += overlap
            if lo <= e.onset < hi:
                count += 1
        if overlap_total > 0:
            mean_pitch = pitch_mass / overlap_total
            if pmax > pmin:
                pitch_comp.append(float((mean_pitch - pmin) / (pmax - pmin)))
            else:
                pitch_comp.append(0.5)
            vel_comp.append(float(vel_mass / overlap_total) / 127.0)
        else:
            pitch_comp.append(0.0)
            vel_comp.append(0.0)
        counts.append(count)

    max_count = max(counts) if max(counts) > 0 else 1
    w_pitch, w_density, w_velocity = weights
    curve = tuple(
        (t, w_pitch * pc + w_density * (c / max_count) + w_velocity * vc)
        for t, pc, vc, c in zip(times, pitch_comp, vel_comp, counts))
    return curve


def locate_climax(curve: Curve) -> ClimaxProfile:
    """Earliest-maximum peak plus derived asymmetry statistics."""
    if not curve:
        raise AnalysisError("empty curve")
    total_mass = sum(s for _, s in curve)
    if total_mass <= 0:
        raise AnalysisError("no salience content")
    peak_salience = max(s for _, s in curve)
    peak_time = next(t for t, s in curve if s == peak_salience)
    span = curve[-1][0]
    if span <= 0:
        raise AnalysisError("curve spans zero time")
    normalized = float(Fraction(peak_time) / span)
    pre_mass = sum(s for t, s in curve if t < peak_time)
    return ClimaxProfile(
        curve=curve,
        peak_time=peak_time,
        normalized_position=normalized,
        asymmetry_index=2.0 * normalized - 1.0,
        pre_mass_fraction=pre_mass / total_mass,
    )


def climax_profile(piece: Piece,
                   weights: Tuple[float, float, float] = DEFAULT_SALIENCE_WEIGHTS,
                   window: Fraction = DEFAULT_WINDOW) -> ClimaxProfile:
    return locate_climax(salience_curve(piece, weights, window))
