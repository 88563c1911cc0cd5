"""Schottky subgroups of SL_2(R), their critical exponent, the corner
embedding into SL_3(R), and the dimension-jump scan.

The embedding iota places a 2x2 unimodular matrix in the upper-left
corner; its image has singular values (m1, 1, m2), so the SL_2
Poincare series sum |g|^{-2t} and the SL_3 pressure series of the
embedded generators are the same series up to the reparameterisation
t = s/2 (s <= 1) or t = s - 1/2 (s > 1).  The scan compares the SL_3
solver on perturbed families against min(2 delta0, delta0 + 1/2).

Ping-pong certificates are checked with the basin contraction bound
sigma2/(eps^2 sigma1): an attracting ball of radius r per letter is
certified when every allowed successor ball sits eps-away from the
letter's repelling direction and the contracted image fits back inside
the letter's own ball.
"""

import math
from dataclasses import dataclass

import numpy as np

from .affinity import _bisect, _checked_root, critical_exponent
from .config import DEFAULT_TOLS
from .dimension import fuchsian_jump_prediction
from .errors import (BadDet, EnumerationOverflow, NoBracket, PingPongFail,
                     ValidationError)
from .linalg import canonical_unit, proj_dist2, sl2_svd
from .seeding import philox_stream

WORD_BUDGET = 10 ** 7


def embed_iota(h) -> np.ndarray:
    """Corner embedding of SL_2(R) into SL_3(R): block diag(h, 1)."""
    m = np.asarray(h, dtype=np.float64)
    if m.shape != (2, 2):
        raise ValidationError("iota embeds 2x2 matrices")
    det = float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])
    if abs(det - 1.0) > DEFAULT_TOLS.det_class:
        raise BadDet(f"det = {det} is not 1 within {DEFAULT_TOLS.det_class}")
    out = np.eye(3)
    out[:2, :2] = m
    return out


def rot2(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def schottky_pair(lam: float = 5.0, theta: float = math.pi / 4) -> "SchottkySL2":
    """Two hyperbolic generators with crossed axes: diag(lam, 1/lam) and
    its conjugate by a rotation."""
    if lam <= 1.0:
        raise ValidationError("need lam > 1 for a hyperbolic generator")
    a = np.diag([lam, 1.0 / lam])
    r = rot2(theta)
    b = r @ a @ r.T
    return SchottkySL2(generators=(a, b))


@dataclass(frozen=True)
class SchottkySL2:
    """Free SL_2(R) group data: generators plus a basin certificate."""

    generators: tuple
    radii: tuple | None = None    # per letter (gens then inverses)

    def letters(self) -> list:
        gens = [np.asarray(g, dtype=np.float64) for g in self.generators]
        for g in gens:
            det = float(np.linalg.det(g))
            if abs(det - 1.0) > DEFAULT_TOLS.det_class:
                raise BadDet(f"generator has det {det}")
        return gens + [np.linalg.inv(g) for g in gens]

    def inverse_of(self, i: int) -> int:
        k = len(self.generators)
        return (i + k) % (2 * k)

    def certify(self, radii=None) -> "SchottkySL2":
        """Establish (or verify) disjoint attracting balls with the
        contraction bound; raises PingPongFail when impossible."""
        letters = self.letters()
        data = [sl2_svd(g) for g in letters]   # (s1, s2, u1, v1)
        plus = [d[2] for d in data]
        minus = [np.array([-d[3][1], d[3][0]]) for d in data]  # ker of top form
        ratio = [d[1] / d[0] for d in data]
        n = len(letters)

        def ok(rvec) -> bool:
            for a in range(n):
                for b in range(a + 1, n):
                    if proj_dist2(plus[a], plus[b]) <= rvec[a] + rvec[b]:
                        return False
            for x in range(n):
                for y in range(n):
                    if y == self.inverse_of(x):
                        continue
                    eps = proj_dist2(plus[y], minus[x]) - rvec[y]
                    if eps <= 0:
                        return False
                    if ratio[x] / (eps * eps) > rvec[x]:
                        return False
            return True

        if radii is not None:
            rvec = tuple(float(r) for r in radii)
            if len(rvec) != n:
                raise ValidationError(f"need {n} radii, one per letter")
            if not ok(rvec):
                raise PingPongFail("provided radii violate the certificate")
            return SchottkySL2(self.generators, rvec)
        for r in np.geomspace(0.4, 1e-3, 80):
            rvec = (float(r),) * n
            if ok(rvec):
                return SchottkySL2(self.generators, rvec)
        raise PingPongFail(
            "no uniform basin radius certifies ping-pong for these generators")


# ---------------------------------------------------------------------------
# SL_2 critical exponent
# ---------------------------------------------------------------------------

def _sl2_lognorm(mats: np.ndarray) -> np.ndarray:
    """log operator norm of an (N,2,2) batch, closed form."""
    a = mats[:, 0, 0]
    b = mats[:, 0, 1]
    c = mats[:, 1, 0]
    d = mats[:, 1, 1]
    t = a * a + b * b + c * c + d * d
    det = a * d - b * c
    disc = np.maximum(t * t - 4.0 * det * det, 0.0)
    lam1 = 0.5 * (t + np.sqrt(disc))
    return 0.5 * np.log(np.maximum(lam1, 1e-300))


def _sl2_levels(letters, forbid, n_max: int, budget: int) -> list:
    """Per-length log norms of reduced words, breadth first."""
    mats = np.stack(letters)
    m = len(letters)
    count = m
    total = m
    for _ in range(2, n_max + 1):
        count = count * (m - 1 if forbid is not None else m)
        total += count
        if total > budget:
            raise EnumerationOverflow(
                f"reduced word tree exceeds the budget {budget}")
    prods = mats.copy()
    offs = np.zeros(m)
    last = np.arange(m)
    out = [_sl2_lognorm(prods)]
    for _ in range(2, n_max + 1):
        npar = len(prods)
        rep = np.repeat(np.arange(npar), m)
        let = np.tile(np.arange(m), npar)
        if forbid is not None:
            keep = let != forbid[last[rep]]
            rep = rep[keep]
            let = let[keep]
        prods = np.matmul(prods[rep], mats[let])
        offs = offs[rep]
        nf = np.sqrt((prods * prods).sum(axis=(1, 2)))
        prods /= nf[:, None, None]
        offs = offs + np.log(nf)
        last = let
        out.append(_sl2_lognorm(prods) + offs)
    return out


@dataclass(frozen=True)
class Sl2Exponent:
    status: str
    delta0: float
    bracket: tuple
    per_n_roots: list
    counts: list
    n_max: int
    tol: float


def sl2_critical_exponent(schottky: SchottkySL2, n_max: int,
                          tol: float = 1e-3, include_inverses: bool = True,
                          certify: bool = True,
                          budget: int = WORD_BUDGET) -> Sl2Exponent:
    """Critical exponent of sum |g_w|^{-2t} over reduced words.

    Bisection on the successive-difference pressure in t over (0, 1];
    the per-n root family of (1/n) log Z_n approaches from below.
    Returns a "no_bracket" sentinel when the word count does not grow
    (single-generator semigroups).
    """
    if n_max < 2:
        raise ValidationError("n_max must be at least 2")
    if include_inverses:
        if certify:
            schottky = schottky.certify(schottky.radii)
        letters = schottky.letters()
        forbid = np.array([schottky.inverse_of(i) for i in range(len(letters))])
    else:
        letters = [np.asarray(g, dtype=np.float64) for g in schottky.generators]
        forbid = None
    levels = _sl2_levels(letters, forbid, n_max, budget)
    counts = [len(v) for v in levels]

    def log_z(t: float, n: int) -> float:
        v = -2.0 * t * levels[n - 1]
        mx = float(v.max())
        return mx + math.log(float(np.exp(v - mx).sum()))

    def p_hat(t: float) -> float:
        return log_z(t, n_max) - log_z(t, n_max - 1)

    t_lo = 1e-9

    def roots() -> list:
        rr = []
        for n in range(1, n_max + 1):
            try:
                r, _ = _bisect(lambda t, n=n: log_z(t, n) / n, t_lo, 1.0,
                               tol * 0.1)
                rr.append(r)
            except NoBracket:
                rr.append(None)
        return rr

    growth = math.log(counts[-1] / counts[-2])
    if growth <= 0.0:
        return Sl2Exponent(status="no_bracket", delta0=math.nan,
                           bracket=(math.nan,) * 2, per_n_roots=roots(),
                           counts=counts, n_max=n_max, tol=tol)
    try:
        root, bracket = _checked_root(p_hat, t_lo, 1.0, tol)
    except NoBracket:
        return Sl2Exponent(status="no_bracket", delta0=math.nan,
                           bracket=(math.nan,) * 2, per_n_roots=roots(),
                           counts=counts, n_max=n_max, tol=tol)
    return Sl2Exponent(status="ok", delta0=root, bracket=bracket,
                       per_n_roots=roots(), counts=counts, n_max=n_max,
                       tol=tol)


# ---------------------------------------------------------------------------
# irreducibility probe
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IrreducibilityReport:
    irreducible: bool
    witness_line: np.ndarray | None
    witness_plane_normal: np.ndarray | None
    inconclusive: bool
    detail: str


def _real_eigenspaces(g: np.ndarray, tol: float) -> list:
    vals, vecs = np.linalg.eig(g)
    scale = max(1.0, float(np.abs(vals).max()))
    spaces = []
    used = []
    for i, lam in enumerate(vals):
        if abs(lam.imag) > tol * scale:
            continue
        if any(abs(lam.real - u) <= tol * scale for u in used):
            continue
        used.append(lam.real)
        shift = g - lam.real * np.eye(3)
        _, sv, vt = np.linalg.svd(shift)
        basis = vt[sv <= tol * max(1.0, sv[0])]
        if len(basis) == 0:
            basis = vt[-1:]
        spaces.append(basis.T)   # columns span the eigenspace
    return spaces


def _intersect(U: np.ndarray, W: np.ndarray, tol: float) -> np.ndarray:
    """Columns spanning span(U) cap span(W)."""
    proj = (np.eye(3) - W @ W.T) @ U
    _, sv, vt = np.linalg.svd(proj, full_matrices=True)
    keep = []
    for i in range(U.shape[1]):
        s = sv[i] if i < len(sv) else 0.0
        if s <= tol:
            keep.append(vt[i])
    if not keep:
        return np.zeros((3, 0))
    C = np.array(keep).T
    out = U @ C
    q, _ = np.linalg.qr(out)
    return q[:, : out.shape[1]]


def _common_eigenline(gens, tol: float):
    nontrivial = []
    for g in gens:
        s = np.trace(g) / 3.0
        if np.max(np.abs(g - s * np.eye(3))) > tol:
            nontrivial.append(g)
    if not nontrivial:
        return "scalar", None
    cands = _real_eigenspaces(nontrivial[0], tol)
    cands = [c / np.linalg.norm(c, axis=0, keepdims=True) for c in cands]
    for g in nontrivial[1:]:
        refined = []
        for c in cands:
            for e in _real_eigenspaces(g, tol):
                inter = _intersect(c, e, math.sqrt(tol))
                if inter.shape[1] > 0:
                    refined.append(inter)
        cands = refined
        if not cands:
            return None, None
    for c in cands:
        v = c[:, 0]
        if all(proj_dist_vec(g @ v, v) < 100 * tol for g in gens):
            return "line", canonical_unit(v)
    return None, None


def proj_dist_vec(u: np.ndarray, v: np.ndarray) -> float:
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(np.linalg.norm(np.cross(u, v)) / (nu * nv))


def irreducibility_probe(gens, trials: int = 8,
                         seed: int = 0) -> IrreducibilityReport:
    """Search for a common invariant line or plane.

    Lines are common eigenvectors of the generators; planes are found
    through common eigenvectors of the transposes (their normals).  A
    random orbit-span check from `trials` start vectors backstops the
    verdict; near-threshold rank gaps flag the report inconclusive.
    """
    mats = [np.asarray(g, dtype=np.float64) for g in gens]
    if not mats:
        raise ValidationError("no generators")
    tol = DEFAULT_TOLS.rank_gap
    kind, line = _common_eigenline(mats, tol)
    if kind == "scalar":
        return IrreducibilityReport(
            irreducible=False, witness_line=canonical_unit([1.0, 0.0, 0.0]),
            witness_plane_normal=canonical_unit([1.0, 0.0, 0.0]),
            inconclusive=False,
            detail="all generators are scalar; every subspace is invariant")
    kindT, normal = _common_eigenline([m.T for m in mats], tol)
    witness_plane = normal if kindT == "line" else None
    witness_line = line if kind == "line" else None
    if witness_line is not None or witness_plane is not None:
        return IrreducibilityReport(
            irreducible=False, witness_line=witness_line,
            witness_plane_normal=witness_plane, inconclusive=False,
            detail="common eigen-direction found")
    # orbit-span backstop from random starts
    rng = philox_stream(seed, 77)
    inconclusive = False
    for group in (mats, [m.T for m in mats]):
        for _ in range(max(1, trials)):
            v = rng.standard_normal(3)
            orbit = [v]
            for g in group:
                orbit.append(g @ v)
                for h in group:
                    orbit.append(g @ (h @ v))
            arr = np.array(orbit)
            sv = np.linalg.svd(arr, compute_uv=False)
            if sv[2] <= tol * sv[0]:
                basis = np.linalg.svd(arr)[2][:2]
                return IrreducibilityReport(
                    irreducible=False, witness_line=None,
                    witness_plane_normal=canonical_unit(
                        np.cross(basis[0], basis[1])),
                    inconclusive=False,
                    detail="random orbit stays in a proper subspace")
            if sv[2] <= 10 * tol * sv[0]:
                inconclusive = True
    return IrreducibilityReport(
        irreducible=True, witness_line=None, witness_plane_normal=None,
        inconclusive=inconclusive, detail="orbit spans reach full rank")


# ---------------------------------------------------------------------------
# dimension-jump scan
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class JumpRow:
    eps: float
    irreducible: bool
    s_a: float
    status: str


@dataclass(frozen=True)
class JumpScan:
    rows: list
    delta0: float
    prediction_at_zero: float
    sl2_status: str

    def to_rows(self):
        return [{"eps": r.eps, "irreducible": int(r.irreducible),
                 "sA": r.s_a,
                 "sA_prediction_at_zero": self.prediction_at_zero}
                for r in self.rows]


def renormalize_det(m: np.ndarray) -> np.ndarray:
    det = float(np.linalg.det(m))
    if det <= 0.0:
        raise ValidationError(
            "perturbation flipped the determinant; shrink eps")
    return m / det ** (1.0 / 3.0)


def scan_dimension_jump(base: SchottkySL2, direction, eps_grid, n_max: int,
                        tol: float = 1e-3, trials: int = 8, seed: int = 0,
                        budget: int = WORD_BUDGET) -> JumpScan:
    """s_A along a perturbation family of the corner-embedded group.

    At eps = 0 the SL_2 exponent delta0 and the prediction
    min(2 delta0, delta0 + 1/2) ride along for the cross-check; each
    eps != 0 row carries the irreducibility verdict and the SL_3 solver
    output for the perturbed generators (with exact inverses appended,
    immediate cancellations excluded).
    """
    eps_grid = [float(e) for e in eps_grid]
    if not any(e == 0.0 for e in eps_grid):
        raise ValidationError("the eps grid must include 0")
    certified = base.certify(base.radii)
    base3 = [embed_iota(g) for g in certified.generators]
    direction = [np.asarray(d, dtype=np.float64) for d in direction]
    if len(direction) != len(base3):
        raise ValidationError("one direction matrix per generator required")
    sl2 = sl2_critical_exponent(certified, n_max, tol)
    pred = (fuchsian_jump_prediction(sl2.delta0)
            if sl2.status == "ok" else math.nan)
    rows = []
    for eps in eps_grid:
        pert = [renormalize_det(b + eps * d)
                for b, d in zip(base3, direction)]
        letters = pert + [np.linalg.inv(p) for p in pert]
        probe = irreducibility_probe(pert, trials=trials, seed=seed)
        res = critical_exponent(np.stack(letters), n_max, tol,
                                reduced=True, budget=budget)
        rows.append(JumpRow(eps=eps, irreducible=probe.irreducible,
                            s_a=res.s_estimate, status=res.status))
    return JumpScan(rows=rows, delta0=sl2.delta0, prediction_at_zero=pred,
                    sl2_status=sl2.status)
