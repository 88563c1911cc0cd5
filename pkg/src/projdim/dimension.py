"""Dimension formulas for stationary measures and the Fuchsian jump.

Given an entropy h and the Lyapunov gaps 0 < chi1 < chi2, the Lyapunov
dimension is h/chi1 below the first threshold and 1 + (h - chi1)/chi2
above it; the projected measure saturates at min(1, h/chi1).  The split
(gamma1, gamma2) books the same quantities fibre-wise:
gamma1*chi1 + gamma2*chi2 = h and gamma1 + gamma2 = dim.

Entropy provenance matters: with a surrogate entropy (an upper bound
for the boundary entropy) the dimension figure is itself only an upper
bound, so every report carries the provenance tag.
"""

import json
import math
from dataclasses import dataclass

from .errors import BadSpectrum, ValidationError

H_PROVENANCE = ("h_RW exact", "h_RW surrogate")


def _check_spectrum(h: float, chi1: float, chi2: float):
    if not (0.0 < chi1 < chi2):
        raise BadSpectrum(f"need 0 < chi1 < chi2, got ({chi1}, {chi2})")
    if h < 0.0 or not math.isfinite(h):
        raise BadSpectrum(f"entropy must be finite and nonnegative, got {h}")


def lyapunov_dimension(h: float, chi1: float, chi2: float) -> float:
    """Two-branch Lyapunov dimension; branch boundary at h = chi1."""
    _check_spectrum(h, chi1, chi2)
    if h <= chi1:
        return h / chi1
    return 1.0 + (h - chi1) / chi2


def projection_prediction(h: float, chi1: float) -> float:
    """Predicted dimension of the projected measure: min(1, h/chi1)."""
    if chi1 <= 0:
        raise BadSpectrum("chi1 must be positive")
    return min(1.0, h / chi1)


def ly_split(h: float, chi1: float, chi2: float) -> tuple:
    """(gamma1, gamma2) with gamma1 = min(1, h/chi1) and the entropy balance
    gamma1*chi1 + gamma2*chi2 = h."""
    _check_spectrum(h, chi1, chi2)
    g1 = min(1.0, h / chi1)
    g2 = (h - g1 * chi1) / chi2
    return g1, g2


def fuchsian_jump_prediction(delta0: float) -> float:
    """Predicted affinity exponent after an irreducible perturbation of the
    reducible embedding, from the base critical exponent delta0 in [0, 1]."""
    if not (0.0 <= delta0 <= 1.0):
        raise ValidationError(f"delta0 = {delta0} outside [0, 1]")
    return min(2.0 * delta0, delta0 + 0.5)


@dataclass(frozen=True)
class DimReport:
    h: float
    h_provenance: str
    chi1: float
    chi2: float
    dim_ly: float
    proj_pred: float
    gamma1: float
    gamma2: float
    clipped: bool
    seeds: dict
    params: dict

    def to_dict(self):
        return {
            "h": self.h, "h_provenance": self.h_provenance,
            "chi1": self.chi1, "chi2": self.chi2,
            "dim_ly": self.dim_ly, "proj_pred": self.proj_pred,
            "gamma1": self.gamma1, "gamma2": self.gamma2,
            "clipped": self.clipped,
            "seeds": self.seeds, "params": self.params,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def make_report(h: float, chi1: float, chi2: float, provenance: str,
                seeds: dict | None = None,
                params: dict | None = None) -> DimReport:
    if provenance not in H_PROVENANCE:
        raise ValidationError(
            f"provenance must be one of {H_PROVENANCE}, got {provenance!r}")
    dim = lyapunov_dimension(h, chi1, chi2)
    g1, g2 = ly_split(h, chi1, chi2)
    return DimReport(
        h=h, h_provenance=provenance, chi1=chi1, chi2=chi2,
        dim_ly=dim, proj_pred=projection_prediction(h, chi1),
        gamma1=g1, gamma2=g2, clipped=dim > 2.0,
        seeds=seeds or {}, params=params or {},
    )
