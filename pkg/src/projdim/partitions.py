"""q-adic partitions of the circle, entropy, and component diagnostics.

Projected samples live on the circle P(V-perp), identified with [0, 1)
by the angle coordinate theta/pi after a fixed frame choice: the frame
sends the projected third axis to the zero coordinate and inherits its
orientation from the rotation carrying V to the first axis.  Directions
orthogonal to the first axis are rejected (the frame is ill-defined on
that circle).

Cells are half-open [k/q^n, (k+1)/q^n); entropies are reported in nats,
and dimension-like ratios divide by n log q, which makes them base-free.
"""

import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOLS
from .errors import (BadCircle, EmptyHistogram, UnderResolved,
                     ValidationError)
from .linalg import as_point
from .randwalk import StationarySample


# ---------------------------------------------------------------------------
# circle coordinates
# ---------------------------------------------------------------------------

def circle_frame(V) -> np.ndarray:
    """Rows (v, w1, w2): w1 spans the projected third axis, w2 = v x w1."""
    v = as_point(V).rep
    if abs(v[0]) <= DEFAULT_TOLS.bad_circle:
        raise BadCircle("direction is orthogonal to the first axis")
    if v[0] < 0:
        v = -v
    w1 = np.array([0.0, 0.0, 1.0]) - v[2] * v
    n = np.linalg.norm(w1)
    w1 = w1 / n
    w2 = np.cross(v, w1)
    return np.stack([v, w1, w2])


@dataclass(frozen=True)
class ProjectedCoords:
    coords: np.ndarray     # values in [0, 1)
    dropped: int           # points at the projection kernel
    frame: np.ndarray


def project_sample(sample, V) -> ProjectedCoords:
    """Circle coordinates of a point sample projected away from V.

    Accepts a StationarySample or an (N,3) array of representatives.
    Points within tolerance of V are dropped and counted.
    """
    pts = sample.points if isinstance(sample, StationarySample) else \
        np.atleast_2d(np.asarray(sample, dtype=np.float64))
    frame = circle_frame(V)
    v = frame[0]
    dist_to_v = np.linalg.norm(np.cross(pts, v), axis=1) \
        / np.linalg.norm(pts, axis=1)
    keep = dist_to_v >= DEFAULT_TOLS.drop_point
    near_v = ~keep
    y = pts[keep] @ frame[1:].T       # components along (w1, w2)
    theta = np.arctan2(y[:, 1], y[:, 0])
    coords = np.mod(theta / math.pi, 1.0)
    coords[coords >= 1.0] = 0.0
    return ProjectedCoords(coords=coords, dropped=int(near_v.sum()),
                           frame=frame)


# ---------------------------------------------------------------------------
# histograms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QadicHistogram:
    q: int
    level: int
    counts: np.ndarray   # length q^level, nonnegative ints
    total: int

    @classmethod
    def from_coords(cls, coords, q: int, level: int) -> "QadicHistogram":
        if q < 2:
            raise ValidationError("base q must be at least 2")
        if level < 0:
            raise ValidationError("level must be nonnegative")
        c = np.asarray(coords, dtype=np.float64)
        if ((c < 0) | (c >= 1)).any():
            raise ValidationError("coordinates must lie in [0, 1)")
        cells = q ** level
        idx = np.minimum((c * cells).astype(np.int64), cells - 1)
        counts = np.bincount(idx, minlength=cells).astype(np.int64)
        return cls(q=q, level=level, counts=counts, total=int(len(c)))

    @classmethod
    def from_counts(cls, counts, q: int, level: int) -> "QadicHistogram":
        arr = np.asarray(counts, dtype=np.int64)
        if len(arr) != q ** level or (arr < 0).any():
            raise ValidationError("counts must be q^level nonnegative ints")
        return cls(q=q, level=level, counts=arr, total=int(arr.sum()))

    def coarsen(self, level: int) -> "QadicHistogram":
        """Counts regrouped at a shallower level."""
        if level > self.level or level < 0:
            raise ValidationError("can only coarsen to a shallower level")
        c = self.counts.reshape(self.q ** level, -1).sum(axis=1)
        return QadicHistogram(q=self.q, level=level, counts=c,
                              total=self.total)


def shannon(probs: np.ndarray) -> float:
    p = probs[probs > 0]
    return float(-(p * np.log(p)).sum())


def entropy(hist: QadicHistogram) -> float:
    """Shannon entropy of the cell distribution, in nats."""
    if hist.total <= 0:
        raise EmptyHistogram("histogram holds no mass")
    return shannon(hist.counts / hist.total)


def entropy_dimension_curve(coords, q: int, n_range) -> list:
    """Rows (n, H_n nats, H_n/(n log q), undersampled flag).

    The flag trips when the occupied cells exceed a tenth of the sample,
    the heuristic threshold past which empirical entropy dips.
    """
    c = np.asarray(coords, dtype=np.float64)
    rows = []
    for n in sorted(int(n) for n in n_range):
        h = QadicHistogram.from_coords(c, q, n)
        occ = int((h.counts > 0).sum())
        hn = entropy(h)
        dim = hn / (n * math.log(q)) if n > 0 else 0.0
        rows.append({"n": n, "entropy": hn, "dim_estimate": dim,
                     "occupied": occ,
                     "undersampled": occ > len(c) / 10})
    return rows


# ---------------------------------------------------------------------------
# component measures and entropy porosity
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ComponentMeasure:
    parent_level: int
    cell: int
    sub: QadicHistogram    # depth-m refinement of the cell, renormalised lazily

    @property
    def mass(self) -> int:
        return self.sub.total


def components(hist: QadicHistogram, level: int, m: int):
    """Level-`level` components refined m levels deeper.

    Requires hist.level >= level + m; yields one ComponentMeasure per
    occupied cell.
    """
    if level + m > hist.level:
        raise UnderResolved(
            f"histogram level {hist.level} cannot resolve {level}+{m}")
    q = hist.q
    per_cell = hist.counts.reshape(q ** level, -1)
    sub_cells = q ** m
    tail = per_cell.shape[1] // sub_cells
    for cell in range(per_cell.shape[0]):
        row = per_cell[cell]
        if row.sum() == 0:
            continue
        sub = row.reshape(sub_cells, tail).sum(axis=1)
        yield ComponentMeasure(
            parent_level=level, cell=cell,
            sub=QadicHistogram(q=q, level=m, counts=sub,
                               total=int(sub.sum())))


@dataclass(frozen=True)
class PorosityReport:
    fraction: float        # mass-weighted share of low-entropy components
    threshold: float       # alpha + eps, in base-q units
    m: int
    i1: int
    i2: int
    draws: int


def porosity_check(hist: QadicHistogram, alpha: float, eps: float,
                   m: int, i1: int, i2: int) -> PorosityReport:
    """Share of (scale, component) draws with small normalised entropy.

    A draw picks a scale j uniformly in [i1, i2] and a level-j cell with
    probability its mass; the event is
    (1/m) H(component, depth m) < alpha + eps with H in base-q units.
    """
    if i1 > i2 or i1 < 0:
        raise ValidationError("need 0 <= i1 <= i2")
    if m < 1:
        raise ValidationError("component depth m must be positive")
    if hist.total <= 0:
        raise EmptyHistogram("histogram holds no mass")
    logq = math.log(hist.q)
    hit = 0.0
    draws = 0
    for j in range(i1, i2 + 1):
        for comp in components(hist, j, m):
            val = entropy(comp.sub) / (m * logq)
            draws += 1
            if val < alpha + eps:
                hit += comp.mass / hist.total
    return PorosityReport(fraction=hit / (i2 - i1 + 1),
                          threshold=alpha + eps, m=m, i1=i1, i2=i2,
                          draws=draws)


def binary_entropy(delta: float) -> float:
    """H(delta) in nats; the concavity sandwich overhead term."""
    if delta <= 0.0 or delta >= 1.0:
        return 0.0
    return -delta * math.log(delta) - (1 - delta) * math.log(1 - delta)
