"""Finitely supported random walks on SL_3(R).

A walk is an atomic measure nu = sum p_i delta_{g_i}.  This module
estimates its Lyapunov spectrum (iterated products with periodic QR
renormalisation), samples the stationary measure on P(R^3) by applying
independent random words to a start point, computes the exact Shannon
entropy of the convolution powers nu^{*n} with exact-integer product
deduplication where available, and runs the separation and regularity
probes.

Entropies are in nats.  Frobenius distance stands in for the invariant
metric in the separation probe; on the bounded sets enumerated here the
two are bi-Lipschitz equivalent, which leaves the exponential scale of
the condition unchanged.
"""

import json
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .config import DEFAULT_TOLS, Tolerances
from .errors import (EnumerationOverflow, NonUnimodular, ValidationError)
from .linalg import act_arr, as_hyperplane
from .seeding import philox_stream, weighted_indices

_STATIONARY_CHUNK = 16384  # points per RNG stream; fixed so replay is exact


# ---------------------------------------------------------------------------
# the measure
# ---------------------------------------------------------------------------

def _int_matrix(m: np.ndarray):
    return tuple(tuple(int(round(x)) for x in row) for row in m)


def _is_integer_matrix(m: np.ndarray) -> bool:
    return bool(np.all(np.abs(m - np.round(m)) < 1e-12))


def _imatmul(a, b):
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3))
        for i in range(3)
    )


def _iinverse(a):
    """Exact inverse of an integer matrix with det +/-1 via the adjugate."""
    det = (a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
           - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
           + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]))
    if det not in (1, -1):
        raise ValidationError("exact inverse needs integer det +/-1")
    cof = [[0] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            sub = [[a[r][c] for c in range(3) if c != j]
                   for r in range(3) if r != i]
            minor = sub[0][0] * sub[1][1] - sub[0][1] * sub[1][0]
            cof[j][i] = ((-1) ** (i + j)) * minor * det
    return tuple(tuple(row) for row in cof)


@dataclass(frozen=True)
class AtomicMeasure:
    """nu = sum_i weights[i] delta_{mats[i]}."""

    mats: np.ndarray                # (m, 3, 3) float
    weights: np.ndarray             # (m,), positive, sums to 1
    exact: tuple | None = None      # integer matrices when available
    label: str = ""

    def __post_init__(self):
        if self.mats.ndim != 3 or self.mats.shape[1:] != (3, 3):
            raise ValidationError("atoms must be 3x3 matrices")
        if len(self.weights) != len(self.mats):
            raise ValidationError("one weight per atom required")
        if (self.weights <= 0).any():
            raise ValidationError("weights must be positive")
        if abs(float(self.weights.sum()) - 1.0) > DEFAULT_TOLS.weight_sum:
            raise ValidationError("weights must sum to 1")
        if self.exact is not None:
            for m, e in zip(self.mats, self.exact):
                if np.max(np.abs(m - np.asarray(e, dtype=np.float64))) > 1e-12:
                    raise ValidationError(
                        "exact integer forms disagree with float matrices")

    def __len__(self):
        return len(self.mats)

    @classmethod
    def from_matrices(cls, mats, weights=None, label="", exact="auto"):
        arr = np.asarray(mats, dtype=np.float64)
        if arr.ndim == 2:
            arr = arr[None]
        m = arr.shape[0]
        w = (np.full(m, 1.0 / m) if weights is None
             else np.asarray(weights, dtype=np.float64))
        ints = None
        if exact == "auto":
            if all(_is_integer_matrix(a) for a in arr):
                ints = tuple(_int_matrix(a) for a in arr)
        elif exact:
            ints = tuple(_int_matrix(a) for a in arr)
        arr = arr.copy()
        arr.setflags(write=False)
        w = w.copy()
        w.setflags(write=False)
        return cls(mats=arr, weights=w, exact=ints, label=label)

    def inverse(self) -> "AtomicMeasure":
        """The pushforward of nu under g -> g^{-1}."""
        inv = np.linalg.inv(self.mats)
        ints = None
        if self.exact is not None:
            try:
                ints = tuple(_iinverse(e) for e in self.exact)
            except ValidationError:
                ints = None
        return AtomicMeasure.from_matrices(
            inv, self.weights, label=self.label + "^-",
            exact=False if ints is None else "auto")

    def check_unimodular(self, tols: Tolerances = DEFAULT_TOLS):
        dets = np.abs(np.linalg.det(self.mats))
        bad = np.abs(dets - 1.0) > tols.det_class
        if bad.any():
            raise NonUnimodular(
                f"atom {int(np.argmax(bad))} has |det| = {dets[np.argmax(bad)]}")


def load_measure(path) -> AtomicMeasure:
    """Read an atomic measure from a JSON or TOML config file.

    Schema: ``{"schema": 1, "atoms": [{"matrix": [[..] x3], "weight": w},
    ...], "exact": true, "label": "name"}``.  Weights are optional and
    default to uniform.
    """
    text = open(path, "rb").read()
    name = str(path)
    if name.endswith(".toml"):
        try:
            import tomllib  # py311+
        except ImportError:
            try:
                import tomli as tomllib
            except ImportError as exc:
                raise ValidationError(
                    "TOML config given but no TOML parser available; "
                    "use JSON") from exc
        try:
            doc = tomllib.loads(text.decode())
        except Exception as exc:
            raise ValidationError(f"{name}: TOML parse error: {exc}") from exc
    else:
        try:
            doc = json.loads(text.decode())
        except Exception as exc:
            raise ValidationError(f"{name}: JSON parse error: {exc}") from exc
    return measure_from_dict(doc, where=name)


def measure_from_dict(doc: dict, where: str = "config") -> AtomicMeasure:
    if not isinstance(doc, dict) or "atoms" not in doc:
        raise ValidationError(f"{where}: missing 'atoms' list")
    atoms = doc["atoms"]
    if not isinstance(atoms, list) or not atoms:
        raise ValidationError(f"{where}: 'atoms' must be a non-empty list")
    mats = []
    weights = []
    explicit_w = any(isinstance(a, dict) and "weight" in a for a in atoms)
    for i, a in enumerate(atoms):
        if not isinstance(a, dict) or "matrix" not in a:
            raise ValidationError(f"{where}: atoms[{i}] needs a 'matrix'")
        m = np.asarray(a["matrix"], dtype=np.float64)
        if m.shape != (3, 3):
            raise ValidationError(
                f"{where}: atoms[{i}].matrix has shape {m.shape}, want (3, 3)")
        mats.append(m)
        if explicit_w:
            if "weight" not in a:
                raise ValidationError(
                    f"{where}: atoms[{i}] is missing its weight")
            weights.append(float(a["weight"]))
    exact = doc.get("exact", "auto")
    if exact not in ("auto", True, False):
        raise ValidationError(f"{where}: 'exact' must be boolean")
    return AtomicMeasure.from_matrices(
        np.stack(mats), np.asarray(weights) if explicit_w else None,
        label=str(doc.get("label", "")), exact=exact)


# ---------------------------------------------------------------------------
# Lyapunov spectrum
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LyapunovEstimate:
    lam: tuple            # (l1, l2, l3) nats per step
    chi: tuple            # (l1 - l2, l1 - l3)
    stderr: tuple         # per-component standard error over chains
    steps: int
    chains: int
    seed: int

    def to_dict(self):
        return {"lambda": list(self.lam), "chi": list(self.chi),
                "stderr": list(self.stderr), "steps": self.steps,
                "chains": self.chains, "seed": self.seed}


def lyapunov_spectrum(nu: AtomicMeasure, steps: int, chains: int = 8,
                      seed: int = 0, renorm: int = 20) -> LyapunovEstimate:
    """QR-renormalised estimate of the three Lyapunov exponents."""
    if steps < 1000:
        raise ValidationError("steps must be at least 1000")
    if chains < 1:
        raise ValidationError("need at least one chain")
    nu.check_unimodular()
    idx = np.empty((chains, steps), dtype=np.int64)
    for c in range(chains):
        rng = philox_stream(seed, c)
        idx[c] = weighted_indices(rng, nu.weights, steps)
    acc = kernels.lyapunov_chains(nu.mats, idx, renorm)
    per_chain = acc / steps
    lam = per_chain.mean(axis=0)
    if chains > 1:
        stderr = per_chain.std(axis=0, ddof=1) / math.sqrt(chains)
    else:
        stderr = np.zeros(3)
    return LyapunovEstimate(
        lam=tuple(float(x) for x in lam),
        chi=(float(lam[0] - lam[1]), float(lam[0] - lam[2])),
        stderr=tuple(float(x) for x in stderr),
        steps=steps, chains=chains, seed=seed)


# ---------------------------------------------------------------------------
# stationary sampling
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StationarySample:
    points: np.ndarray    # (count, 3) canonical unit representatives
    burn_in: int
    seed: int
    inverse: bool
    label: str = ""

    def __len__(self):
        return len(self.points)


def canonicalize_rows(arr: np.ndarray) -> np.ndarray:
    """Vectorised canonical representative: unit rows, first nonzero
    coordinate positive."""
    nrm = np.linalg.norm(arr, axis=1, keepdims=True)
    out = arr / nrm
    nz = out != 0.0
    first = np.argmax(nz, axis=1)
    lead = out[np.arange(len(out)), first]
    out *= np.where(lead < 0.0, -1.0, 1.0)[:, None]
    return out + 0.0


def sample_stationary(nu: AtomicMeasure, count: int, burn_in: int = 200,
                      seed: int = 0, inverse: bool = False,
                      start=None) -> StationarySample:
    """Draw `count` approximate samples of the stationary measure.

    Each point is the image of a fixed start direction under an
    independent random word of length `burn_in` (inverse=True walks with
    the inverted atoms and so targets the backward measure).
    """
    if count <= 0:
        raise ValidationError("count must be positive")
    if burn_in < 50:
        raise ValidationError("burn_in must be at least 50")
    mu = nu.inverse() if inverse else nu
    if start is None:
        start = np.ones(3) / math.sqrt(3.0)
    else:
        start = np.asarray(start, dtype=np.float64)
        start = start / np.linalg.norm(start)
    pts = np.empty((count, 3))
    for block, lo in enumerate(range(0, count, _STATIONARY_CHUNK)):
        hi = min(lo + _STATIONARY_CHUNK, count)
        rng = philox_stream(seed, 1_000_000 + block)
        idx = weighted_indices(rng, mu.weights, (hi - lo, burn_in))
        pts[lo:hi] = kernels.propagate_points(mu.mats, idx, start)
    return StationarySample(points=canonicalize_rows(pts), burn_in=burn_in,
                            seed=seed, inverse=inverse, label=mu.label)


# ---------------------------------------------------------------------------
# random-walk entropy
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EntropyCurve:
    per_n: list           # (n, H(nu^{*n}) nats, H/n, support size)
    h_rw: float           # H(nu^{*max_n}) / max_n
    exact: bool
    max_n: int

    def to_rows(self):
        return [{"n": n, "entropy": h, "entropy_rate": r, "support": s}
                for (n, h, r, s) in self.per_n]


def _dedup_key_float(m: np.ndarray, scale: float = 1e9):
    return tuple(int(round(x * scale)) for x in m.ravel())


def random_walk_entropy(nu: AtomicMeasure, max_n: int,
                        budget: int = 10 ** 7) -> EntropyCurve:
    """Shannon entropy of nu^{*n} for n = 1..max_n, with deduplication.

    Uses exact integer products when the atoms carry integer forms
    (collisions are then found exactly); otherwise products are hashed
    at 1e-9 resolution, which can merge distinct near-equal products.
    """
    m = len(nu)
    if m ** max_n > budget:
        raise EnumerationOverflow(
            f"|support|^max_n = {m ** max_n} exceeds budget {budget}")
    exact = nu.exact is not None
    if exact:
        current = {}
        for e, w in zip(nu.exact, nu.weights):
            prob, _ = current.get(e, (0.0, e))
            current[e] = (prob + float(w), e)
    else:
        current = {}
        for mat, w in zip(nu.mats, nu.weights):
            key = _dedup_key_float(mat)
            prob, _ = current.get(key, (0.0, mat))
            current[key] = (prob + w, mat)
    per_n = []
    for n in range(1, max_n + 1):
        if n > 1:
            nxt = {}
            if exact:
                for (p, mat) in current.values():
                    for e, w in zip(nu.exact, nu.weights):
                        prod = _imatmul(mat, e)
                        q, _ = nxt.get(prod, (0.0, prod))
                        nxt[prod] = (q + p * float(w), prod)
            else:
                for (p, mat) in current.values():
                    for a, w in zip(nu.mats, nu.weights):
                        prod = mat @ a
                        key = _dedup_key_float(prod)
                        q, _ = nxt.get(key, (0.0, prod))
                        nxt[key] = (q + p * float(w), prod)
            current = nxt
        probs = np.array([p for (p, _) in current.values()])
        probs = probs / probs.sum()
        h = float(-(probs * np.log(probs)).sum())
        per_n.append((n, h, h / n, len(current)))
    return EntropyCurve(per_n=per_n, h_rw=per_n[-1][1] / max_n,
                        exact=exact, max_n=max_n)


# ---------------------------------------------------------------------------
# exponential separation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SeparationReport:
    n: int
    min_dist: float               # Frobenius; inf when fewer than two words
    witness: tuple | None         # pair of words (tuples of atom indices)
    rate: float                   # log(min_dist) / n
    distinct: int
    total_words: int


def exponential_separation_probe(nu: AtomicMeasure, n: int,
                                 budget: int = 10 ** 7) -> SeparationReport:
    """Minimum pairwise Frobenius distance over distinct length-n words."""
    m = len(nu)
    total = m ** n
    if total > budget:
        raise EnumerationOverflow(
            f"{total} words exceed the budget {budget}")
    if total < 2:
        return SeparationReport(n=n, min_dist=math.inf, witness=None,
                                rate=math.inf, distinct=min(total, 1),
                                total_words=total)
    # products in word-lexicographic order: index digits give the word
    prods = nu.mats[np.arange(m)]
    for _ in range(n - 1):
        prods = np.einsum("pij,gjk->pgik", prods, nu.mats).reshape(-1, 3, 3)

    def word_of(i: int):
        digits = []
        for _ in range(n):
            digits.append(i % m)
            i //= m
        return tuple(reversed(digits))

    exact = nu.exact is not None
    seen = {}
    for i in range(total):
        key = (_int_matrix(prods[i]) if exact
               else _dedup_key_float(prods[i]))
        if key in seen:
            return SeparationReport(
                n=n, min_dist=0.0, witness=(word_of(seen[key]), word_of(i)),
                rate=-math.inf, distinct=len(seen), total_words=total)
        seen[key] = i
    d2, i, j = kernels.min_pairwise_sqdist(prods.reshape(total, 9))
    dist = math.sqrt(d2)
    return SeparationReport(
        n=n, min_dist=dist, witness=(word_of(i), word_of(j)),
        rate=math.log(dist) / n if dist > 0 else -math.inf,
        distinct=total, total_words=total)


# ---------------------------------------------------------------------------
# Guivarc'h regularity probe
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GuivarchReport:
    radii: list
    masses: list
    beta_hat: float
    resolved: int

    def to_rows(self):
        return [{"radius": r, "mass": p}
                for r, p in zip(self.radii, self.masses)]


def guivarch_probe(sample: StationarySample, w, radii) -> GuivarchReport:
    """Empirical mass of the r-neighbourhood of a hyperplane, per radius,
    with the least-squares slope of log mass against log radius."""
    if len(sample) == 0:
        raise ValidationError("empty sample")
    normal = as_hyperplane(w).normal
    d = np.abs(sample.points @ normal)
    radii = sorted(float(r) for r in radii)
    masses = [float((d <= r).mean()) for r in radii]
    logs = [(math.log(r), math.log(p)) for r, p in zip(radii, masses) if p > 0]
    if len(logs) >= 2:
        xs = np.array([a for a, _ in logs])
        ys = np.array([b for _, b in logs])
        beta = float(np.polyfit(xs, ys, 1)[0])
    else:
        beta = math.nan
    return GuivarchReport(radii=radii, masses=masses, beta_hat=beta,
                          resolved=len(logs))
