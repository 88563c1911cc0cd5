"""The Rauzy gasket: generators, cylinder covers, sampling, box counting.

The three integer generators fix the closed positive cone, so the
projective simplex chart x + y + z = 1 (barycentric coordinates) is a
bi-Lipschitz window on the attractor and box counting can run on a
plain square grid over the first two coordinates.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import EnumerationOverflow, ValidationError
from .randwalk import AtomicMeasure, StationarySample, sample_stationary

RAUZY_INT = (
    ((1, 1, 1), (0, 1, 0), (0, 0, 1)),
    ((1, 0, 0), (1, 1, 1), (0, 0, 1)),
    ((1, 0, 0), (0, 1, 0), (1, 1, 1)),
)


def rauzy_generators() -> np.ndarray:
    """The three unipotent integer generators, as float matrices."""
    return np.asarray(RAUZY_INT, dtype=np.float64)


def rauzy_measure(weights=None) -> AtomicMeasure:
    return AtomicMeasure.from_matrices(rauzy_generators(), weights,
                                       label="rauzy")


def to_barycentric(points: np.ndarray) -> np.ndarray:
    """Map cone representatives (N,3) to the simplex x + y + z = 1."""
    pts = np.asarray(points, dtype=np.float64)
    s = pts.sum(axis=-1, keepdims=True)
    if (np.abs(s) < 1e-300).any():
        raise ValidationError("a representative lies on the x+y+z=0 plane")
    return pts / s


# ---------------------------------------------------------------------------
# cylinder cover
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CylinderTriangle:
    word: tuple
    vertices: np.ndarray   # (3, 3) rows are barycentric vertices A_w e_i


def cylinder_cover(depth: int, budget: int = 10 ** 6):
    """All depth-n cylinder triangles A_w Delta, exact integer products.

    Vertices of A_w Delta are the projectivised columns of A_w; depth 0
    returns the simplex itself.
    """
    if depth < 0:
        raise ValidationError("depth must be nonnegative")
    if 3 ** depth > budget:
        raise EnumerationOverflow(f"3^{depth} cylinders exceed {budget}")
    out = []
    for word in itertools.product(range(3), repeat=depth):
        prod = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
        for letter in word:
            a = RAUZY_INT[letter]
            prod = tuple(
                tuple(sum(prod[i][k] * a[k][j] for k in range(3))
                      for j in range(3))
                for i in range(3))
        cols = np.asarray(prod, dtype=np.float64).T
        out.append(CylinderTriangle(word=word,
                                    vertices=to_barycentric(cols)))
    return out


def triangle_contains(vertices: np.ndarray, pts: np.ndarray,
                      slack: float = 1e-12) -> np.ndarray:
    """Barycentric membership test of (N,2)/(N,3) chart points."""
    v = vertices[:, :2]
    p = np.atleast_2d(pts)[:, :2]
    t = np.stack([v[1] - v[0], v[2] - v[0]], axis=1)
    try:
        tinv = np.linalg.inv(t.T)
    except np.linalg.LinAlgError:
        return np.zeros(len(p), dtype=bool)
    loc = (p - v[0]) @ tinv.T
    return ((loc >= -slack).all(axis=1)
            & (loc.sum(axis=1) <= 1.0 + slack))


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GasketSample:
    sample: StationarySample
    chart: np.ndarray      # (N, 3) barycentric


def sample_gasket(count: int, burn_in: int = 200, seed: int = 0,
                  weights=None) -> GasketSample:
    """Stationary-measure sample of the uniform (or weighted) Rauzy walk,
    with simplex chart coordinates attached."""
    nu = rauzy_measure(weights)
    s = sample_stationary(nu, count, burn_in=burn_in, seed=seed)
    return GasketSample(sample=s, chart=to_barycentric(s.points))


# ---------------------------------------------------------------------------
# box counting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoxCountReport:
    levels: list        # grid level k (2^k boxes per side)
    occupied: list
    slope: float
    fit_window: tuple

    def to_rows(self):
        return [{"level": k, "occupied": n}
                for k, n in zip(self.levels, self.occupied)]


def box_counting_dimension(chart_points: np.ndarray, grid_levels,
                           fit_window=None) -> BoxCountReport:
    """Occupied-cell counts on 2^k-per-side grids and the LS dimension slope.

    ``chart_points`` are (N,>=2) coordinates in [0, 1]^2; the slope fits
    log N_k against k log 2 over ``fit_window`` (defaults to all levels).
    Finite samples bias the slope downward at deep levels.
    """
    pts = np.atleast_2d(np.asarray(chart_points, dtype=np.float64))[:, :2]
    if len(pts) == 0:
        raise ValidationError("no points to count")
    levels = sorted(int(k) for k in grid_levels)
    occupied = []
    for k in levels:
        g = 1 << k
        ij = np.clip((pts * g).astype(np.int64), 0, g - 1)
        cells = ij[:, 0] * g + ij[:, 1]
        occupied.append(int(len(np.unique(cells))))
    if fit_window is None:
        fit_window = (levels[0], levels[-1])
    sel = [(k, n) for k, n in zip(levels, occupied)
           if fit_window[0] <= k <= fit_window[1]]
    if len(sel) >= 2:
        xs = np.array([k * math.log(2.0) for k, _ in sel])
        ys = np.array([math.log(n) for _, n in sel])
        slope = float(np.polyfit(xs, ys, 1)[0])
    else:
        slope = math.nan
    return BoxCountReport(levels=levels, occupied=occupied, slope=slope,
                          fit_window=tuple(fit_window))
