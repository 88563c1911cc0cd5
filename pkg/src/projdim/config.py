"""Central tolerance record.

Every numerical threshold used by the library lives here so that tests
and callers agree on one set of defaults.  All logs are natural; output
rebasing is a presentation step in the CLI (`--log-base`).
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    # matrix / decomposition
    singular_det: float = 1e-12       # |det| below this is singular
    det_class: float = 1e-9           # |det -/+ 1| for unimodular classes
    jacobi_offdiag: float = 1e-14     # Jacobi sweep stop, relative
    cartan_recon: float = 1e-9        # relative Frobenius reconstruction
    degenerate_gap: float = 1e-9      # sigma1/sigma2 - 1 below this is flagged
    # projective points
    unit_norm: float = 1e-12
    kernel_hit: float = 1e-14
    at_kernel: float = 1e-12
    # UL decomposition
    reducible_direction: float = 1e-9  # d(g^{-1}V, V-perp) threshold
    ul_recon: float = 1e-10
    # charts
    bad_circle: float = 1e-9
    drop_point: float = 1e-9
    # probes / ranks
    rank_gap: float = 1e-8
    weight_sum: float = 1e-12


DEFAULT_TOLS = Tolerances()
