"""Forcing step: cross value matrix P_z and feedforward gain F_z.

With the feedback loop Abar = A_yy + B_y F_y closed, P_z solves the linear
(Stein-type) equation

    P_z = Q_yz + b Abar' P_y A_yz + b Abar' P_z A_zz,   b = beta,

and completes the rule u_t = F_y y_t + F_z z_t through

    F_z = -(R + b B' P_y B)^{-1} b B' (P_y A_yz + P_z A_zz).

The default route vectorizes the equation (column-stacking convention) into

    (I - b kron(A_zz', Abar')) vec(P_z) = vec(Q_yz + b Abar' P_y A_yz)

and solves it exactly; stability of Abar and A_zz inside 1/sqrt(b) keeps the
operator nonsingular.  A fixed-point sweep from P_z = 0 is available both as
a cross-check and as a fallback for models too large to vectorize.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernel
from .errors import DivergenceError
from .model import ModelSpec, symmetrize
from .regulator import BLOWUP, MAX_ITER, RegulatorSolution

METHODS = ("vectorized", "fixed-point")


@dataclass(frozen=True, eq=False)
class AugmentedSolution:
    P_z: np.ndarray
    F_z: np.ndarray
    method: str
    residual: float


def _sylvester_residual(spec, reg, abar, p_z):
    target = (
        spec.Q_yz
        + spec.beta * (abar.T @ reg.P_y @ spec.A_yz)
        + spec.beta * (abar.T @ p_z @ spec.A_zz)
    )
    return kernel.inf_norm(p_z - target)


def solve_sylvester(
    spec: ModelSpec,
    reg: RegulatorSolution,
    method: str = "vectorized",
    tol: float = 1e-12,
    max_iter: int = MAX_ITER,
) -> AugmentedSolution:
    """Solve for P_z and the feedforward gain F_z.

    ``method`` selects the exact vectorized solve (default) or the fixed-point
    sweep; both must agree to solver precision.  With n_z = 0 the forcing
    terms vanish and empty matrices are returned.
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}, expected one of {METHODS}")
    dims = spec.dims
    if dims.n_z == 0:
        return AugmentedSolution(
            P_z=np.zeros((dims.n_y, 0)),
            F_z=np.zeros((dims.n_u, 0)),
            method=method,
            residual=0.0,
        )

    abar = spec.A_yy + spec.B_y @ reg.F_y
    constant = spec.Q_yz + spec.beta * (abar.T @ reg.P_y @ spec.A_yz)

    if method == "vectorized":
        n = dims.n_y * dims.n_z
        operator = np.eye(n) - spec.beta * kernel.kron(spec.A_zz.T, abar.T)
        p_z = kernel.unvec(
            kernel.solve_linear(operator, kernel.vec(constant)), dims.n_y, dims.n_z
        )
    else:
        p_z = np.zeros((dims.n_y, dims.n_z))
        diff = math.inf
        for iteration in range(1, max_iter + 1):
            p_next = constant + spec.beta * (abar.T @ p_z @ spec.A_zz)
            diff = kernel.inf_norm(p_next - p_z)
            scale = kernel.inf_norm(p_next)
            if not math.isfinite(diff) or scale > BLOWUP:
                raise DivergenceError(
                    f"Sylvester iteration diverged at iteration {iteration}",
                    residual=diff,
                )
            p_z = p_next
            if diff <= tol * (1.0 + scale):
                break
        else:
            raise DivergenceError(
                f"Sylvester iteration did not converge within {max_iter} iterations",
                residual=diff,
            )

    residual = _sylvester_residual(spec, reg, abar, p_z)
    f_z = feedforward_gain(spec, reg, p_z)
    p_z = p_z.copy()
    p_z.flags.writeable = False
    f_z.flags.writeable = False
    return AugmentedSolution(P_z=p_z, F_z=f_z, method=method, residual=residual)


def feedforward_gain(
    spec: ModelSpec, reg: RegulatorSolution, P_z: np.ndarray
) -> np.ndarray:
    """F_z = -(R + b B' P_y B)^{-1} b B' (P_y A_yz + P_z A_zz)."""
    if spec.dims.n_z == 0:
        return np.zeros((spec.dims.n_u, 0))
    b = spec.B_y
    s = symmetrize(spec.R + spec.beta * (b.T @ reg.P_y @ b))
    rhs = spec.beta * (b.T @ (reg.P_y @ spec.A_yz + P_z @ spec.A_zz))
    return -kernel.solve_linear(s, rhs)
