"""Projective space P(R^3), the wedge metric, and 3x3 Cartan data.

The metric on P(R^n) is d(Rv, Rw) = |v ^ w| / (|v||w|), the sine of the
angle between lines.  Hyperplane pairs are compared through their
normals, which for planes in R^3 gives the same value as the Hausdorff
distance between the projective lines.

All operations are pure; points and Cartan records are immutable.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .config import DEFAULT_TOLS, Tolerances
from .errors import (BadDet, DegenerateTopSingular, KernelHit, SingularMatrix,
                     ValidationError)


def canonical_unit(vec) -> np.ndarray:
    """Unit representative with the first nonzero coordinate positive."""
    v = np.asarray(vec, dtype=np.float64)
    if v.shape != (3,):
        raise ValidationError(f"expected a 3-vector, got shape {v.shape}")
    if not np.isfinite(v).all():
        raise ValidationError("non-finite vector")
    n = math.sqrt(float(v @ v))
    if n == 0.0:
        raise ValidationError("zero vector has no projective class")
    v = v / n
    for i in range(3):
        if v[i] != 0.0:
            if v[i] < 0.0:
                v = -v
            break
    v = v + 0.0  # normalise -0.0 entries so representatives hash identically
    v.setflags(write=False)
    return v


class ProjPoint:
    """A point of P(R^3) held by its canonical unit representative."""

    __slots__ = ("rep",)

    def __init__(self, vec):
        self.rep = canonical_unit(vec)

    def __repr__(self):
        return f"ProjPoint({self.rep.tolist()})"

    def __eq__(self, other):
        return isinstance(other, ProjPoint) and np.array_equal(self.rep, other.rep)

    def __hash__(self):
        return hash(self.rep.tobytes())


class ProjHyperplane:
    """A projective plane in P(R^3), stored by its canonical unit normal."""

    __slots__ = ("normal",)

    def __init__(self, normal):
        self.normal = canonical_unit(normal)

    def __repr__(self):
        return f"ProjHyperplane(normal={self.normal.tolist()})"

    def __eq__(self, other):
        return (isinstance(other, ProjHyperplane)
                and np.array_equal(self.normal, other.normal))

    def __hash__(self):
        return hash(self.normal.tobytes())


E1 = ProjPoint([1.0, 0.0, 0.0])
E2 = ProjPoint([0.0, 1.0, 0.0])
E3 = ProjPoint([0.0, 0.0, 1.0])


def as_point(x) -> ProjPoint:
    return x if isinstance(x, ProjPoint) else ProjPoint(x)


def as_hyperplane(w) -> ProjHyperplane:
    return w if isinstance(w, ProjHyperplane) else ProjHyperplane(w)


def as_matrix(g) -> np.ndarray:
    if isinstance(g, Mat3):
        return g.entries
    m = np.asarray(g, dtype=np.float64)
    if m.shape != (3, 3):
        raise ValidationError(f"expected a 3x3 matrix, got shape {m.shape}")
    if not np.isfinite(m).all():
        raise ValidationError("non-finite matrix entries")
    return m


@dataclass(frozen=True)
class Mat3:
    """A 3x3 real matrix tagged with its determinant class (+1, -1, other)."""

    entries: np.ndarray
    det_class: str

    @classmethod
    def of(cls, entries, tols: Tolerances = DEFAULT_TOLS) -> "Mat3":
        m = np.asarray(entries, dtype=np.float64).copy()
        if m.shape != (3, 3):
            raise ValidationError(f"expected a 3x3 matrix, got shape {m.shape}")
        if not np.isfinite(m).all():
            raise ValidationError("non-finite matrix entries")
        d = float(np.linalg.det(m))
        if abs(d - 1.0) <= tols.det_class:
            cls_name = "+1"
        elif abs(d + 1.0) <= tols.det_class:
            cls_name = "-1"
        else:
            cls_name = "other"
        m.setflags(write=False)
        return cls(m, cls_name)

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.entries))


@dataclass(frozen=True)
class CartanData:
    """Singular values and frames of g = k_left diag(sigma) k_right."""

    sigma: tuple
    k_left: np.ndarray
    k_right: np.ndarray
    v_plus: ProjPoint
    h_minus: ProjHyperplane
    chi: tuple      # (log s1/s2, log s1/s3), nats
    kappa: tuple    # (log s1, log s2, log s3), nats
    degenerate: bool


# ---------------------------------------------------------------------------
# metric
# ---------------------------------------------------------------------------

def proj_dist(a, b) -> float:
    """Wedge distance between two points of P(R^3); lies in [0, 1]."""
    u = as_point(a).rep
    v = as_point(b).rep
    return min(1.0, float(np.linalg.norm(np.cross(u, v))))


def proj_dist_arr(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Vectorised wedge distance for (N,3) arrays of representatives."""
    c = np.cross(u, v)
    nu = np.linalg.norm(u, axis=-1)
    nv = np.linalg.norm(v, axis=-1)
    return np.minimum(1.0, np.linalg.norm(c, axis=-1) / (nu * nv))


def dist_point_hyperplane(x, w) -> float:
    """min over points of the plane of the wedge distance; |<x, normal>|."""
    p = as_point(x).rep
    n = as_hyperplane(w).normal
    return min(1.0, abs(float(p @ n)))


def dist_point_hyperplane_arr(pts: np.ndarray, normal: np.ndarray) -> np.ndarray:
    nrm = np.linalg.norm(pts, axis=-1)
    return np.minimum(1.0, np.abs(pts @ normal) / nrm)


def hyperplane_dist(w1, w2) -> float:
    """Hausdorff distance between two projective planes: the normal angle sine."""
    n1 = as_hyperplane(w1).normal
    n2 = as_hyperplane(w2).normal
    return min(1.0, float(np.linalg.norm(np.cross(n1, n2))))


# ---------------------------------------------------------------------------
# Cartan decomposition
# ---------------------------------------------------------------------------

def cartan(g, tols: Tolerances = DEFAULT_TOLS) -> CartanData:
    """Cartan (singular value) data of a nonsingular 3x3 matrix.

    The decomposition comes from Jacobi sweeps on the Gram matrix g^T g;
    see `kernels`.  When sigma1 and sigma2 coincide within tolerance the
    attracting data is still returned, in the eigensolver's deterministic
    order, but flagged degenerate.
    """
    m = as_matrix(g)
    det = float(np.linalg.det(m))
    if abs(det) < tols.singular_det:
        raise SingularMatrix(f"|det| = {abs(det):.3e} below {tols.singular_det}")
    sigma, k_left, k_right = kernels.cartan_batch(m)
    s1, s2, s3 = (float(sigma[0]), float(sigma[1]), float(sigma[2]))
    degenerate = s1 / s2 - 1.0 < tols.degenerate_gap
    return CartanData(
        sigma=(s1, s2, s3),
        k_left=k_left,
        k_right=k_right,
        v_plus=ProjPoint(k_left[:, 0]),
        h_minus=ProjHyperplane(k_right[0, :]),
        chi=(math.log(s1 / s2), math.log(s1 / s3)),
        kappa=(math.log(s1), math.log(s2), math.log(s3)),
        degenerate=degenerate,
    )


def cartan_sigma_batch(gs: np.ndarray) -> np.ndarray:
    """Singular values only, descending, for an (N,3,3) batch."""
    sigma, _, _ = kernels.cartan_batch(np.asarray(gs, dtype=np.float64))
    return sigma


def act(g, x) -> ProjPoint:
    """Projective action x -> R(g v)."""
    m = as_matrix(g)
    v = as_point(x).rep
    w = m @ v
    if float(np.linalg.norm(w)) < DEFAULT_TOLS.kernel_hit:
        raise KernelHit("representative maps into the kernel")
    return ProjPoint(w)


def act_arr(g, pts: np.ndarray) -> np.ndarray:
    """Apply g to an (N,3) array of representatives; rows renormalised."""
    w = pts @ as_matrix(g).T
    n = np.linalg.norm(w, axis=-1, keepdims=True)
    if (n < DEFAULT_TOLS.kernel_hit).any():
        raise KernelHit("a representative maps into the kernel")
    return w / n


def in_repelling_basin(g, x, eps: float,
                       cd: CartanData | None = None) -> bool:
    """Whether x lies in b(g^-, eps) = {d(., H_g^-) > eps}."""
    if cd is None:
        cd = cartan(g)
    if cd.degenerate:
        raise DegenerateTopSingular(
            "sigma1 = sigma2 within tolerance; repelling hyperplane not unique")
    return dist_point_hyperplane(x, cd.h_minus) > eps


# ---------------------------------------------------------------------------
# 2x2 helpers (closed-form SVD)
# ---------------------------------------------------------------------------

def sl2_singular_values(h) -> tuple:
    """(sigma1, sigma2) of a 2x2 matrix, closed form via the Gram matrix."""
    m = np.asarray(h, dtype=np.float64)
    a, b, c, d = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
    t = a * a + b * b + c * c + d * d
    det = a * d - b * c
    disc = max(t * t - 4.0 * det * det, 0.0)
    root = math.sqrt(disc)
    lam1 = (t + root) / 2.0
    lam2 = (t - root) / 2.0
    return math.sqrt(max(lam1, 0.0)), math.sqrt(max(lam2, 0.0))


def sl2_svd(h):
    """Closed-form 2x2 SVD: (sigma1, sigma2, u1, v1).

    u1 is the top left singular vector (attracting direction of the
    projective action), v1 the top right singular vector; H_h^- is the
    span of the vector orthogonal to v1.
    """
    m = np.asarray(h, dtype=np.float64)
    s1, s2 = sl2_singular_values(m)
    S = m.T @ m
    a, b, c = S[0, 0], S[0, 1], S[1, 1]
    lam1 = s1 * s1
    # (S - lam1 I) v = 0; take the better-conditioned row
    cand1 = np.array([b, lam1 - a])
    cand2 = np.array([lam1 - c, b])
    v1 = cand1 if cand1 @ cand1 >= cand2 @ cand2 else cand2
    n = np.linalg.norm(v1)
    if n < 1e-150:
        v1 = np.array([1.0, 0.0])  # degenerate spectrum: any direction works
    else:
        v1 = v1 / n
    u1 = m @ v1
    nu = np.linalg.norm(u1)
    u1 = u1 / nu if nu > 0 else np.array([1.0, 0.0])
    return s1, s2, u1, v1


def proj_dist2(u, v) -> float:
    """Wedge distance on P(R^2)."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    w = abs(u[0] * v[1] - u[1] * v[0])
    return min(1.0, w / (np.linalg.norm(u) * np.linalg.norm(v)))


def sl2_norm_identity_check(h, tols: Tolerances = DEFAULT_TOLS) -> tuple:
    """(sigma1/sigma2, |h|^2) for |det h| = 1; the two must agree."""
    m = np.asarray(h, dtype=np.float64)
    det = float(np.linalg.det(m))
    if abs(abs(det) - 1.0) > tols.det_class:
        raise BadDet(f"|det| = {abs(det)} is not 1 within {tols.det_class}")
    s1, s2 = sl2_singular_values(m)
    return s1 / s2, s1 * s1
