"""UL factorisation of SL_3(R) relative to a direction V.

Relative to the standard direction E1, the factor groups are

    U = [[l^2, x, y], [0, 0; l^-1 Id2]]          (solvable part)
    L = [[det h, 0], [n, h]],  h in SL2-pm, n in R^2

and a matrix g with g^{-1}E1 outside E1-perp splits uniquely as g = u l.
For a general direction the factorisation is conjugated by an orthogonal
frame k with kV = E1.  The L part drives the projected action: the
composition "project to V-perp after acting by g" restricted to V-perp
is the 2x2 matrix h in frame coordinates.

The attracting linear form f on R^3 built from (h, n) cuts out the
region where the projected action of l contracts at rate 2*C1*C2^2/|h|^2.
"""

import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOLS, Tolerances
from .errors import (AtKernel, DegenerateH, ReducibleDirection,
                     ValidationError)
from .linalg import (ProjPoint, act, as_matrix, as_point, proj_dist,
                     proj_dist2, sl2_svd)


def ul_frame(V) -> np.ndarray:
    """Deterministic k in SO(3) with k V = E1 (identity when V = E1).

    Rows are (v, w1, w2) where w1 completes v against the axis of
    smallest overlap and w2 = v x w1.
    """
    v = as_point(V).rep
    a = int(np.argmin(np.abs(v)))
    e = np.zeros(3)
    e[a] = 1.0
    w1 = e - v[a] * v
    w1 /= np.linalg.norm(w1)
    w2 = np.cross(v, w1)
    return np.stack([v, w1, w2])


@dataclass(frozen=True)
class ULFactors:
    """g = frame^T . u(lam,x,y) . l(n,h) . frame with |det h| = 1."""

    lam: float
    x: float
    y: float
    n: np.ndarray        # 2-vector
    h: np.ndarray        # 2x2, det +/-1
    sign_h: int
    frame: np.ndarray    # 3x3 orthogonal, frame @ V = E1

    def u_matrix(self) -> np.ndarray:
        u = np.zeros((3, 3))
        u[0, 0] = self.lam ** 2
        u[0, 1] = self.x
        u[0, 2] = self.y
        u[1, 1] = 1.0 / self.lam
        u[2, 2] = 1.0 / self.lam
        return u

    def l_matrix(self) -> np.ndarray:
        el = np.zeros((3, 3))
        el[0, 0] = float(self.sign_h)
        el[1:, 0] = self.n
        el[1:, 1:] = self.h
        return el

    def reconstruct(self) -> np.ndarray:
        k = self.frame
        return k.T @ self.u_matrix() @ self.l_matrix() @ k


def direction_margin(g, V) -> float:
    """d(g^{-1}V, V-perp); zero exactly when the UL factorisation fails."""
    m = as_matrix(g)
    v = as_point(V).rep
    w = np.linalg.solve(m, v)
    return abs(float(w @ v)) / float(np.linalg.norm(w))


def ul_decompose(g, V, tols: Tolerances = DEFAULT_TOLS) -> ULFactors:
    """Split g into its U and L parts relative to the direction V."""
    m = as_matrix(g)
    v = as_point(V).rep
    margin = direction_margin(m, v)
    if margin <= tols.reducible_direction:
        raise ReducibleDirection(
            f"d(g^-1 V, V-perp) = {margin:.3e} <= {tols.reducible_direction}")
    k = ul_frame(V)
    gt = k @ m @ k.T
    B = gt[1:, 1:]
    det_b = float(B[0, 0] * B[1, 1] - B[0, 1] * B[1, 0])
    lam = 1.0 / math.sqrt(abs(det_b))
    h = lam * B
    sign_h = 1 if det_b > 0 else -1
    n = lam * gt[1:, 0]
    # top-right row: (x, y) h = gt[0, 1:]
    hinv = np.array([[h[1, 1], -h[0, 1]], [-h[1, 0], h[0, 0]]]) / float(sign_h)
    xy = gt[0, 1:] @ hinv
    return ULFactors(lam=lam, x=float(xy[0]), y=float(xy[1]),
                     n=n, h=h, sign_h=sign_h, frame=k)


def h_of(g, V, tols: Tolerances = DEFAULT_TOLS) -> np.ndarray:
    """The induced 2x2 map on P(V-perp), det-normalised to +/-1."""
    return ul_decompose(g, V, tols).h


# ---------------------------------------------------------------------------
# projections
# ---------------------------------------------------------------------------

def project_orth(V, x, tols: Tolerances = DEFAULT_TOLS) -> ProjPoint:
    """Orthogonal projection of x along V onto V-perp, as a point of P(R^3)."""
    v = as_point(V).rep
    p = as_point(x).rep
    w = p - float(p @ v) * v
    if float(np.linalg.norm(w)) < tols.at_kernel:
        raise AtKernel("x coincides with the projection direction")
    return ProjPoint(w)


def project_along(x, kernel, plane_normal) -> np.ndarray:
    """Linear projection of x with kernel R(kernel) onto the plane
    {y : <y, plane_normal> = 0}; returns an un-normalised representative."""
    xv = np.asarray(x, dtype=np.float64)
    kv = np.asarray(kernel, dtype=np.float64)
    nv = np.asarray(plane_normal, dtype=np.float64)
    denom = float(kv @ nv)
    if abs(denom) < DEFAULT_TOLS.at_kernel:
        raise AtKernel("projection direction lies in the target plane")
    return xv - (float(xv @ nv) / denom) * kv


def apply_h(h: np.ndarray, frame: np.ndarray, x) -> ProjPoint:
    """Act by a 2x2 matrix on a point of P(V-perp) through the frame."""
    p = as_point(x).rep
    y = frame @ p
    bc = h @ y[1:]
    out = frame.T @ np.concatenate(([0.0], bc))
    return ProjPoint(out)


def decomposition_identity_gap(g, V, x,
                               factors: ULFactors | None = None) -> float:
    """Distance between the two evaluation routes of the projected action.

    Route one projects g.x orthogonally along V; route two projects x
    along g^{-1}V onto V-perp first and then applies the induced 2x2 map.
    """
    m = as_matrix(g)
    v = as_point(V).rep
    if factors is None:
        factors = ul_decompose(m, v)
    lhs = project_orth(V, act(m, x))
    ginv_v = np.linalg.solve(m, v)
    mid = project_along(as_point(x).rep, ginv_v, v)
    rhs = apply_h(factors.h, factors.frame, ProjPoint(mid))
    return proj_dist(lhs, rhs)


# ---------------------------------------------------------------------------
# the attracting linear form
# ---------------------------------------------------------------------------

def _canon2(v: np.ndarray) -> np.ndarray:
    for i in range(2):
        if v[i] != 0.0:
            return -v if v[i] < 0.0 else v
    return v


@dataclass(frozen=True)
class LinearFormF:
    """Linear form on R^3 whose kernel is span(l^{-1}E1, H_h^-)."""

    coeffs: np.ndarray
    norm: float

    def __call__(self, v) -> float:
        return float(self.coeffs @ np.asarray(v, dtype=np.float64))


def f_form(factors: ULFactors, tols: Tolerances = DEFAULT_TOLS) -> LinearFormF:
    """The attracting form of the L part (standard-frame coordinates)."""
    h = factors.h
    s1, s2, _, v1 = sl2_svd(h)
    if s1 / s2 - 1.0 < tols.degenerate_gap:
        raise DegenerateH("h has equal singular values; no repelling direction")
    fh = _canon2(v1)
    hinv_n = np.linalg.solve(h, factors.n)
    coeffs = np.array([float(fh @ hinv_n), fh[0], fh[1]])
    return LinearFormF(coeffs=coeffs, norm=float(np.linalg.norm(coeffs)))


def in_attracting_region(form: LinearFormF, v, eps: float) -> bool:
    """Membership in b(f, eps) = {Rv : |f(v)| >= eps |f| |v|}."""
    vv = np.asarray(v, dtype=np.float64)
    return abs(form(vv)) >= eps * form.norm * float(np.linalg.norm(vv))


@dataclass(frozen=True)
class ContractionProbe:
    max_ratio: float
    ratio_bound: float
    max_image_dist: float
    inclusion_bound: float
    pairs: int


def attracting_region_contraction_probe(
        factors: ULFactors, c1: float, c2: float, samples: int,
        seed: int = 0, tols: Tolerances = DEFAULT_TOLS) -> ContractionProbe:
    """Sample pairs in b(f, 1/c2) and measure the projected contraction.

    The observed ratio max d([l x],[l x']) / d(x,x') must stay below
    2*c1*c2^2/|h|^2, and every image must be within c1*c2/|h|^2 of the
    attracting direction of h.  Requires c1, c2 > 2 and
    d(l^{-1}E1, E1-perp) > 1/c1.
    """
    if c1 <= 2.0 or c2 <= 2.0:
        raise ValidationError("contraction bound needs c1, c2 > 2")
    form = f_form(factors, tols)
    h = factors.h
    hinv_n = np.linalg.solve(h, factors.n)
    d_inv_e1 = 1.0 / math.sqrt(1.0 + float(hinv_n @ hinv_n))
    if d_inv_e1 <= 1.0 / c1:
        raise ValidationError(
            f"d(l^-1 E1, E1-perp) = {d_inv_e1:.3e} not above 1/c1 = {1 / c1:.3e}")
    el = factors.l_matrix()
    s1, _, u1, _ = sl2_svd(h)
    norm_h_sq = s1 * s1
    ratio_bound = 2.0 * c1 * c2 * c2 / norm_h_sq
    inclusion_bound = c1 * c2 / norm_h_sq
    rng = np.random.default_rng(np.random.Philox(key=seed))
    eps = 1.0 / c2
    kept = []
    while len(kept) < 2 * samples:
        cand = rng.standard_normal((4 * samples + 16, 3))
        cand /= np.linalg.norm(cand, axis=1, keepdims=True)
        good = np.abs(cand @ form.coeffs) >= eps * form.norm
        kept.extend(cand[good])
    pts = np.asarray(kept[: 2 * samples])
    imgs = pts @ el.T
    proj2 = imgs[:, 1:]
    max_ratio = 0.0
    for i in range(samples):
        x = pts[2 * i]
        xp = pts[2 * i + 1]
        dx = proj_dist(ProjPoint(x), ProjPoint(xp))
        if dx < 1e-12:
            continue
        dimg = proj_dist2(proj2[2 * i], proj2[2 * i + 1])
        max_ratio = max(max_ratio, dimg / dx)
    dists_to_plus = np.array([proj_dist2(p, u1) for p in proj2])
    return ContractionProbe(
        max_ratio=max_ratio,
        ratio_bound=ratio_bound,
        max_image_dist=float(dists_to_plus.max()),
        inclusion_bound=inclusion_bound,
        pairs=samples,
    )
