"""Reading a dimension estimate off a spread curve.

Two readings are produced from one curve. The growth curve g_dim always has
a well-defined peak (it starts at 0 and decays back to 0), and a sustained
plateau near that peak is a stronger signal than a narrow spike, so both are
reported. The f_dim curve falls from infinity just above t = 1 and flattens
near the dimension; its bend is located by the chord method: the grid point
of maximum perpendicular distance from the straight line joining the first
and last (ln t, f_dim) points. There is no canonical definition of such a
bend, and the result depends on the grid, so the method is named in the
output metadata rather than treated as exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ValidationError
from .engine import SpreadCurve

DEFAULT_PLATEAU_DELTA = 0.1

# a knee needs enough curve to bend; fewer points than this and it is omitted
_MIN_KNEE_POINTS = 4

METHOD_METADATA = {
    "peak": "argmax of g_dim over the grid, first index on ties",
    "plateau": "longest contiguous run with g_dim within delta of the peak, measured in ln(t)",
    "knee": "max perpendicular distance from the chord of the (ln t, f_dim) sequence",
    "grid_dependent": True,
}


@dataclass(frozen=True)
class Plateau:
    t_lo: float
    t_hi: float
    mean_g: float


@dataclass(frozen=True)
class DimensionEstimate:
    """Summary read off one spread curve; ``rounded_dimension`` is the headline."""

    peak_g: float
    peak_t: float
    rounded_dimension: int
    plateau: Optional[Plateau]
    knee_t: Optional[float]
    knee_f: Optional[float]
    plateau_delta: float

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "peak_g": self.peak_g,
            "peak_t": self.peak_t,
            "rounded_dimension": self.rounded_dimension,
            "plateau": None
            if self.plateau is None
            else {
                "t_lo": self.plateau.t_lo,
                "t_hi": self.plateau.t_hi,
                "mean_g": self.plateau.mean_g,
            },
            "knee": None
            if self.knee_t is None
            else {"t": self.knee_t, "f": self.knee_f},
            "plateau_delta": self.plateau_delta,
            "method_metadata": METHOD_METADATA,
        }


def estimate(curve: SpreadCurve, plateau_delta: float = DEFAULT_PLATEAU_DELTA) -> DimensionEstimate:
    """Estimate a dimension from a curve by peak, plateau and knee readings."""
    if len(curve) == 0:
        raise ValidationError("cannot estimate from an empty curve")
    if plateau_delta < 0.0:
        raise ValidationError(f"plateau_delta must be >= 0, got {plateau_delta!r}")

    peak_idx = int(np.argmax(curve.g_dim))
    peak_g = float(curve.g_dim[peak_idx])
    peak_t = float(curve.t[peak_idx])

    plateau = _find_plateau(curve, peak_g, plateau_delta)
    knee_t, knee_f = _find_knee(curve)

    return DimensionEstimate(
        peak_g=peak_g,
        peak_t=peak_t,
        rounded_dimension=round(peak_g),
        plateau=plateau,
        knee_t=knee_t,
        knee_f=knee_f,
        plateau_delta=plateau_delta,
    )


def _find_plateau(curve: SpreadCurve, peak_g: float, delta: float) -> Optional[Plateau]:
    """Longest contiguous in-band run, ranked by its length in ln(t).

    Only positive scales participate (length in ln(t) is undefined at 0);
    runs of a single grid point are not reported as a plateau.
    """
    in_band = (curve.g_dim >= peak_g - delta) & (curve.t > 0.0)
    best: Optional[tuple[float, int, int]] = None
    start = None
    for i, flag in enumerate(np.append(in_band, False)):
        if flag and start is None:
            start = i
        elif not flag and start is not None:
            stop = i - 1
            if stop > start:
                length = math.log(curve.t[stop]) - math.log(curve.t[start])
                if best is None or length > best[0]:
                    best = (length, start, stop)
            start = None
    if best is None:
        return None
    _, lo, hi = best
    return Plateau(
        t_lo=float(curve.t[lo]),
        t_hi=float(curve.t[hi]),
        mean_g=float(curve.g_dim[lo : hi + 1].mean()),
    )


def _find_knee(curve: SpreadCurve) -> tuple[Optional[float], Optional[float]]:
    mask = (curve.t > 1.0) & np.isfinite(curve.f_dim)
    if mask.sum() < _MIN_KNEE_POINTS:
        return None, None
    t = curve.t[mask]
    f = curve.f_dim[mask]
    x = np.log(t)
    dx = x[-1] - x[0]
    df = f[-1] - f[0]
    norm = math.hypot(dx, df)
    if norm == 0.0:
        return None, None
    dist = np.abs(df * (x - x[0]) - dx * (f - f[0])) / norm
    idx = int(np.argmax(dist))
    return float(t[idx]), float(f[idx])


__all__ = ["DimensionEstimate", "Plateau", "estimate", "DEFAULT_PLATEAU_DELTA"]
