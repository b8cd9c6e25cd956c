"""Feedback step: value matrix P_y and gain F_y of the discounted regulator.

The whole endogenous block y is treated as if it were a state (the
forward-looking part gets its date-0 value later, from the anchoring step)
and the fixed point of

    P = Q_yy + b A' P A - b^2 A' P B (R + b B' P B)^{-1} B' P A,   b = beta,

is found by iterating from P0 = Q_yy.  The gain is defined with the sign
convention F_y = -(R + b B' P B)^{-1} b B' P A, so the optimal rule reads
u_t = F_y y_t and A + B F_y is the stable closed loop that every later step
(Sylvester equation, simulation, change of basis) builds on.

Certainty equivalence holds: nothing here reads k0, z0 or any shock process,
so P_y and F_y are bit-identical across initial conditions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernel
from .errors import DivergenceError, InstabilityError
from .model import ModelSpec, symmetrize

DEFAULT_TOL = 1e-12
MAX_ITER = 1_000_000
#: iterate magnitude treated as divergence (explosive uncontrolled dynamics)
BLOWUP = 1e100
#: the closed loop must clear 1/sqrt(beta) by at least this margin
STABILITY_MARGIN = 1e-9


@dataclass(frozen=True, eq=False)
class RegulatorSolution:
    """Riccati fixed point P_y (symmetric PSD) and feedback gain F_y."""

    P_y: np.ndarray
    F_y: np.ndarray
    iterations: int
    residual: float


def riccati_rhs(P: np.ndarray, spec: ModelSpec) -> np.ndarray:
    """One application of the Riccati map at P; output exactly symmetric."""
    a, b, beta = spec.A_yy, spec.B_y, spec.beta
    q = symmetrize(spec.Q_yy)
    r = symmetrize(spec.R)
    w = beta * (b.T @ P @ a)  # b B' P A
    s = symmetrize(r + beta * (b.T @ P @ b))
    rhs = q + beta * (a.T @ P @ a) - w.T @ kernel.solve_linear(s, w)
    return symmetrize(rhs)


def _feedback_gain(spec: ModelSpec, p: np.ndarray) -> np.ndarray:
    s = symmetrize(spec.R + spec.beta * (spec.B_y.T @ p @ spec.B_y))
    return -kernel.solve_linear(s, spec.beta * (spec.B_y.T @ p @ spec.A_yy))


def solve_riccati(
    spec: ModelSpec,
    tol: float = DEFAULT_TOL,
    max_iter: int = MAX_ITER,
) -> RegulatorSolution:
    """Iterate the Riccati map from P0 = Q_yy until the fixed point.

    Stops when ||P_{n+1} - P_n||_inf <= tol * (1 + ||P_{n+1}||_inf).  Raises
    :class:`DivergenceError` (carrying the last step size) when the iteration
    explodes or exhausts ``max_iter``, and :class:`InstabilityError` when the
    converged gain fails the closed-loop spectral-radius margin.
    """
    p = symmetrize(spec.Q_yy)
    diff = math.inf
    for iteration in range(1, max_iter + 1):
        p_next = riccati_rhs(p, spec)
        diff = kernel.inf_norm(p_next - p)
        scale = kernel.inf_norm(p_next)
        if not math.isfinite(diff) or scale > BLOWUP:
            raise DivergenceError(
                f"Riccati iteration diverged at iteration {iteration}"
                f" (step {diff:.3e})",
                residual=diff,
            )
        p = p_next
        if iteration % 100 == 0:
            # the map preserves symmetry exactly and PSD up to roundoff;
            # losing either signals numerical breakdown, not slow convergence
            floor = -1e-10 * max(1.0, scale)
            if np.linalg.eigvalsh(p).min() < floor:
                raise DivergenceError(
                    f"Riccati iterate lost positive semidefiniteness"
                    f" at iteration {iteration}",
                    residual=diff,
                )
        if diff <= tol * (1.0 + scale):
            break
    else:
        raise DivergenceError(
            f"Riccati iteration did not converge within {max_iter} iterations"
            f" (last step {diff:.3e})",
            residual=diff,
        )

    f = _feedback_gain(spec, p)
    radius = kernel.spectral_radius(spec.A_yy + spec.B_y @ f)
    limit = 1.0 / math.sqrt(spec.beta) - STABILITY_MARGIN
    if radius >= limit:
        raise InstabilityError(
            f"closed loop not stabilizing: spectral radius {radius:.12g}"
            f" >= {limit:.12g}"
        )
    p_out = p.copy()
    p_out.flags.writeable = False
    f.flags.writeable = False
    return RegulatorSolution(P_y=p_out, F_y=f, iterations=iteration, residual=diff)
