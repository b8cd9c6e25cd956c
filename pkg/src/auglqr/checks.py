"""Stabilizability screening run before the solvers.

Two gates: the staircase controllability matrix of the scaled (A_yy, B_y)
pair must have full rank n_y, and every eigenvalue of the forcing block A_zz
must lie strictly inside the circle of radius 1/sqrt(beta).  The second gate
is non-negotiable (explosive forcing makes the discounted loss unbounded);
the first may be overridden downstream by a --force flag since stabilizable
systems can fail the full-rank test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernel
from .model import ScaledModel


@dataclass(frozen=True, eq=False)
class CheckReport:
    controllable: bool
    controllability_rank: int
    required_rank: int
    forcing_stable: bool
    forcing_spectral_radius: float
    threshold: float
    eigenvalues_zz: np.ndarray

    @property
    def ok(self) -> bool:
        return self.controllable and self.forcing_stable

    def failures(self) -> list[str]:
        """Human-readable failure lines, empty when both gates pass."""
        out = []
        if not self.controllable:
            out.append(
                f"controllability rank {self.controllability_rank}"
                f" < {self.required_rank}"
            )
        if not self.forcing_stable:
            out.append(
                f"forcing block unstable: spectral radius"
                f" {self.forcing_spectral_radius:.6g} >= 1/sqrt(beta)"
                f" = {self.threshold:.6g}"
            )
        return out


def controllability_matrix(scaled: ScaledModel) -> np.ndarray:
    """Staircase blocks [B, A B, ..., A^(n_y-1) B] of the scaled pair.

    Equals [sqrt(b) B_y, b A_yy B_y, b^(3/2) A_yy^2 B_y, ...] in terms of the
    unscaled matrices with b = beta.
    """
    a, b = scaled.A_yy, scaled.B_y
    blocks = []
    block = b
    for _ in range(scaled.dims.n_y):
        blocks.append(block)
        block = a @ block
    return np.hstack(blocks)


def run_checks(scaled: ScaledModel) -> CheckReport:
    """Evaluate both stabilizability gates on a rescaled model."""
    n_y = scaled.dims.n_y
    ctrb_rank = kernel.rank(controllability_matrix(scaled))
    # the criterion is stated on the unscaled A_zz against 1/sqrt(beta);
    # testing the scaled matrix against 1 would be algebraically identical
    eig_zz = kernel.eigenvalues(scaled.spec.A_zz)
    radius = float(np.max(np.abs(eig_zz))) if eig_zz.size else 0.0
    threshold = 1.0 / math.sqrt(scaled.beta)
    return CheckReport(
        controllable=ctrb_rank == n_y,
        controllability_rank=ctrb_rank,
        required_rank=n_y,
        forcing_stable=radius < threshold,
        forcing_spectral_radius=radius,
        threshold=threshold,
        eigenvalues_zz=eig_zz,
    )
