"""Affinity exponent of a matrix semigroup via subadditive pressure.

The weight of a word product g is

    phi_s(g) = (s2/s1)^s                  for 0 < s <= 1,
             = (s2/s1) (s3/s1)^(s-1)      for 1 < s <= 2,

equivalently exp(-psi_s(kappa(g))) with psi_s the piecewise-linear
functional s*a1 (s <= 1) and a1 + (s-1)(a1+a2) (s > 1) of the
log-singular gaps.  The partition sum Z_n(s) totals phi_s over all
admissible words of length n, the pressure is the growth rate of
log Z_n, and the affinity exponent is the root of the pressure in s.

Estimators: the headline estimate uses the successive difference
log Z_n - log Z_{n-1}; the per-n family (1/n) log Z_n is also rooted.
Because the operator norm is submultiplicative, phi_s is
SUPERmultiplicative along products, so the per-n roots approach the
exponent from below and, empirically, increase with n.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import (NoBracket, NotDecreasing, SOutOfRange, ValidationError)
from .linalg import as_matrix, cartan

WORD_BUDGET = 10 ** 7


def psi_value(chi1, chi2, s: float):
    """psi_s evaluated on log singular gaps (vectorised)."""
    if s <= 0 or s > 2:
        raise SOutOfRange(f"s = {s} outside (0, 2]")
    if s <= 1.0:
        return s * np.asarray(chi1)
    return np.asarray(chi1) + (s - 1.0) * np.asarray(chi2)


def phi_s(g, s: float) -> float:
    """The pressure summand of a single matrix."""
    if s <= 0 or s > 2:
        raise SOutOfRange(f"s = {s} outside (0, 2]")
    cd = cartan(as_matrix(g))
    return math.exp(-float(psi_value(cd.chi[0], cd.chi[1], s)))


def _logsumexp(a: np.ndarray) -> float:
    m = float(np.max(a))
    return m + math.log(float(np.exp(a - m).sum()))


# ---------------------------------------------------------------------------
# the word-tree table
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WordTreeTable:
    """Per-length log singular gaps of every admissible word."""

    levels: list          # [(chi1 array, chi2 array)] for n = 1..n_max
    counts: list
    min_chi1: np.ndarray
    min_words: np.ndarray
    n_max: int
    run_cap: int
    reduced: bool

    def log_z(self, s: float, n: int) -> float:
        chi1, chi2 = self.levels[n - 1]
        return _logsumexp(-psi_value(chi1, chi2, s))


def detect_inverse_pairs(gens: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """allowed[i, j] is False when gens[i] @ gens[j] is the identity."""
    m = len(gens)
    allowed = np.ones((m, m), dtype=bool)
    eye = np.eye(3)
    for i in range(m):
        for j in range(m):
            if np.max(np.abs(gens[i] @ gens[j] - eye)) < tol:
                allowed[i, j] = False
                allowed[j, i] = False
    return allowed


def build_table(gens, n_max: int, run_cap: int = 0, reduced: bool = False,
                budget: int = WORD_BUDGET) -> WordTreeTable:
    """Enumerate the word tree and record singular gaps per length.

    ``reduced=True`` drops immediate inverse cancellations (for groups
    listed as generators-plus-inverses); ``run_cap=R`` drops words with
    more than R equal consecutive letters (parabolic acceleration).
    """
    gens = np.asarray(gens, dtype=np.float64)
    if gens.ndim != 3 or gens.shape[1:] != (3, 3):
        raise ValidationError("generators must be a list of 3x3 matrices")
    if n_max < 1:
        raise ValidationError("n_max must be at least 1")
    allowed = detect_inverse_pairs(gens) if reduced else None
    levels, min_chi1, min_words, counts = kernels.enum_word_tree(
        gens, n_max, allowed=allowed, run_cap=run_cap, budget=budget)
    return WordTreeTable(levels=levels, counts=counts, min_chi1=min_chi1,
                         min_words=min_words, n_max=n_max,
                         run_cap=run_cap, reduced=reduced)


def partition_sum(gens, s: float, n: int, run_cap: int = 0,
                  reduced: bool = False,
                  table: WordTreeTable | None = None) -> float:
    """log Z_n(s), stabilised by per-level max subtraction."""
    if table is None:
        table = build_table(gens, n, run_cap=run_cap, reduced=reduced)
    return table.log_z(s, n)


# ---------------------------------------------------------------------------
# pressure curves
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PressureCurve:
    s: float
    per_n: list              # (n, log Z_n, word count)
    estimate_diff: float     # log Z_{n_max} - log Z_{n_max - 1}
    estimate_over_n: float   # log Z_{n_max} / n_max

    def slopes(self):
        rows = []
        prev = 0.0
        for (n, lz, cnt) in self.per_n:
            rows.append({"n": n, "log_z": lz, "words": cnt,
                         "slope_over_n": lz / n, "slope_diff": lz - prev})
            prev = lz
        return rows


def pressure(gens, s: float, n_max: int, run_cap: int = 0,
             reduced: bool = False,
             table: WordTreeTable | None = None) -> PressureCurve:
    if table is None:
        table = build_table(gens, n_max, run_cap=run_cap, reduced=reduced)
    per_n = [(n, table.log_z(s, n), table.counts[n - 1])
             for n in range(1, n_max + 1)]
    log_last = per_n[-1][1]
    log_prev = per_n[-2][1] if n_max >= 2 else 0.0
    return PressureCurve(s=s, per_n=per_n,
                         estimate_diff=log_last - log_prev,
                         estimate_over_n=log_last / n_max)


def supermultiplicativity_defect(table: WordTreeTable, s: float,
                                 m: int, n: int) -> float:
    """log Z_{m+n}(s) - log Z_m(s) - log Z_n(s).

    Positive values witness supermultiplicativity of the partition sum
    (the norm-ratio weights grow along products); the classical
    singular-value-function inequality would make this nonpositive.
    """
    return table.log_z(s, m + n) - table.log_z(s, m) - table.log_z(s, n)


# ---------------------------------------------------------------------------
# root finding
# ---------------------------------------------------------------------------

def _bisect(fn, lo: float, hi: float, tol: float) -> tuple:
    flo = fn(lo)
    fhi = fn(hi)
    if flo <= 0 or fhi >= 0:
        raise NoBracket(
            f"pressure has no sign change on [{lo:.3g}, {hi:.3g}] "
            f"(f(lo) = {flo:.3g}, f(hi) = {fhi:.3g})")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if fn(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi), (lo, hi)


def _checked_root(fn, s_lo: float, s_max: float, tol: float,
                  grid_size: int = 24):
    """Root of a pressure estimate with a bracketed monotonicity check.

    The estimate must decrease strictly until its first sign change and
    stay negative afterwards; violations inside the probed bracket raise
    NotDecreasing, and a missing sign change raises NoBracket.
    """
    grid = np.linspace(s_lo, s_max, grid_size)
    vals = np.array([fn(float(s)) for s in grid])
    neg = np.nonzero(vals < 0.0)[0]
    if vals[0] <= 0.0 or len(neg) == 0:
        raise NoBracket(
            f"pressure estimate has one sign on [{s_lo:.3g}, {s_max:.3g}]")
    first_neg = int(neg[0])
    head = vals[: first_neg + 1]
    if (np.diff(head) >= 1e-12).any():
        raise NotDecreasing(
            "pressure estimate is not decreasing across its sign change; "
            f"worst increase {float(np.diff(head).max()):.3e}")
    if (vals[first_neg:] >= 0.0).any():
        raise NotDecreasing(
            "pressure estimate returns to positive values past its root")
    return _bisect(fn, float(grid[first_neg - 1]), float(grid[first_neg]), tol)


@dataclass(frozen=True)
class CriticalExponentResult:
    status: str              # "ok" or "no_bracket"
    s_estimate: float        # root of the successive-difference pressure
    bracket: tuple           # final bisection bracket
    per_n_roots: list        # root of (1/n) log Z_n per n (None if no root)
    n_max: int
    tol: float
    run_cap: int
    reduced: bool
    counts: list


def critical_exponent(gens, n_max: int, tol: float = 1e-3,
                      run_cap: int = 0, reduced: bool = False,
                      s_max: float = 2.0,
                      table: WordTreeTable | None = None,
                      budget: int = WORD_BUDGET) -> CriticalExponentResult:
    """Bisect the pressure root in s.

    The reported estimate roots the successive-difference pressure at
    n_max.  The attached per-n root family uses (1/n) log Z_n; by
    supermultiplicativity these approach the critical exponent from
    below.  A sentinel result with status "no_bracket" is returned when
    the pressure has one sign on (0, s_max] (e.g. a single generator,
    where the word count does not grow).
    """
    if table is None:
        table = build_table(gens, n_max, run_cap=run_cap, reduced=reduced,
                            budget=budget)
    if n_max < 2:
        raise ValidationError("critical exponent needs n_max >= 2")

    def p_hat(s: float) -> float:
        return table.log_z(s, n_max) - table.log_z(s, n_max - 1)

    # successive-difference pressure at s -> 0+ is the word-count growth
    p_zero = math.log(table.counts[n_max - 1] / table.counts[n_max - 2])
    s_lo = 1e-9

    def sentinel() -> CriticalExponentResult:
        return CriticalExponentResult(
            status="no_bracket", s_estimate=math.nan, bracket=(math.nan,) * 2,
            per_n_roots=_per_n_roots(table, s_lo, s_max, tol),
            n_max=n_max, tol=tol, run_cap=run_cap, reduced=reduced,
            counts=list(table.counts))

    if p_zero <= 0.0:
        return sentinel()
    try:
        root, bracket = _checked_root(p_hat, s_lo, s_max, tol)
    except NoBracket:
        return sentinel()
    return CriticalExponentResult(
        status="ok", s_estimate=root, bracket=bracket,
        per_n_roots=_per_n_roots(table, s_lo, s_max, tol),
        n_max=n_max, tol=tol, run_cap=run_cap, reduced=reduced,
        counts=list(table.counts))


def _per_n_roots(table: WordTreeTable, s_lo: float, s_max: float,
                 tol: float) -> list:
    roots = []
    for n in range(1, table.n_max + 1):
        def f(s, n=n):
            return table.log_z(s, n) / n
        try:
            root, _ = _bisect(f, s_lo, s_max, tol * 0.1)
            roots.append(root)
        except NoBracket:
            roots.append(None)
    return roots


# ---------------------------------------------------------------------------
# Anosov gap scan
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GapScan:
    per_n: list   # (n, min chi1/n, mean chi1/n, witness word tuple)

    def min_rates(self):
        return [row[1] for row in self.per_n]


def anosov_gap_scan(gens, n_max: int, run_cap: int = 0,
                    reduced: bool = False,
                    table: WordTreeTable | None = None) -> GapScan:
    """Per-length minimum of chi1(g_w)/n; a positive floor certifies the
    singular-gap growth empirically, with the witnessing word attached."""
    if table is None:
        table = build_table(gens, n_max, run_cap=run_cap, reduced=reduced)
    rows = []
    for n in range(1, n_max + 1):
        chi1, _ = table.levels[n - 1]
        word = tuple(int(x) for x in table.min_words[n - 1][:n])
        rows.append((n, float(table.min_chi1[n - 1]) / n,
                     float(chi1.mean()) / n, word))
    return GapScan(per_n=rows)
