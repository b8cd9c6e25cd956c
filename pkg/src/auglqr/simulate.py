"""Closed-loop assembly, deterministic simulation, impulse responses, loss.

Substituting the optimal rule into the transmission mechanism yields the
closed-loop system

    [y_{t+1}]   [A_yy + B_y F_y   A_yz + B_y F_z] [y_t]   [0  ]
    [z_{t+1}] = [      0               A_zz     ] [z_t] + [I_z] e_t,

simulated forward from the anchored initial state.  Paths of u and of the
multipliers mu are recovered pointwise from the gains and value matrices, and
the discounted quadratic loss is accumulated alongside (reported as the
positive quantity L = (1/2) sum beta^t [...], so smaller is better).

Certainty equivalence makes the deterministic recursion sufficient: expected
paths after a shock coincide with the noiseless simulation, so impulse
responses are exact without drawing any randomness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import kernel
from .anchor import AnchoredState, anchor_x0
from .augmented import AugmentedSolution
from .errors import DivergenceError, InstabilityError
from .model import ModelSpec
from .regulator import RegulatorSolution


@dataclass(frozen=True, eq=False)
class ClosedLoopSystem:
    T_cl: np.ndarray
    impulse_loading: np.ndarray
    state0: np.ndarray


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Time-indexed paths for t = 0..horizon-1 plus the truncated loss.

    ``truncation_bound`` is a geometric estimate of the discarded tail of the
    discounted loss sum, so numbers are never silently passed off as exact.
    """

    horizon: int
    y: np.ndarray
    z: np.ndarray
    u: np.ndarray
    mu: np.ndarray
    loss: float
    truncation_bound: float


def build_closed_loop(
    spec: ModelSpec,
    reg: RegulatorSolution,
    aug: AugmentedSolution,
    anchored: AnchoredState,
) -> ClosedLoopSystem:
    """Stack the closed-loop transition, the impulse loading, and state0."""
    n_y, n_z = spec.dims.n_y, spec.dims.n_z
    a_cl = spec.A_yy + spec.B_y @ reg.F_y
    sqrt_beta = math.sqrt(spec.beta)
    radius_cl = kernel.spectral_radius(a_cl)
    if sqrt_beta * radius_cl >= 1.0:
        raise InstabilityError(
            f"closed feedback loop unstable: sqrt(beta) * {radius_cl:.6g} >= 1"
        )
    radius_zz = kernel.spectral_radius(spec.A_zz)
    if sqrt_beta * radius_zz >= 1.0:
        raise InstabilityError(
            f"forcing block unstable: sqrt(beta) * {radius_zz:.6g} >= 1"
        )

    t_cl = np.zeros((n_y + n_z, n_y + n_z))
    t_cl[:n_y, :n_y] = a_cl
    t_cl[:n_y, n_y:] = spec.A_yz + spec.B_y @ aug.F_z
    t_cl[n_y:, n_y:] = spec.A_zz  # lower-left stays exactly zero: z is exogenous
    loading = np.zeros((n_y + n_z, n_z))
    loading[n_y:, :] = np.eye(n_z)
    state0 = np.concatenate([anchored.y0, spec.z0])
    return ClosedLoopSystem(T_cl=t_cl, impulse_loading=loading, state0=state0)


def simulate_path(
    sys: ClosedLoopSystem,
    spec: ModelSpec,
    reg: RegulatorSolution,
    aug: AugmentedSolution,
    horizon: int,
    shocks: np.ndarray | None = None,
) -> Trajectory:
    """Roll the closed loop forward ``horizon`` periods.

    ``shocks`` is an optional horizon x n_z array of forcing innovations;
    shocks[t] enters the transition from t to t+1.  Omitted shocks mean the
    deterministic path.
    """
    if horizon < 1:
        raise ValueError(f"horizon must be at least 1, got {horizon}")
    n_y, n_z, n_u = spec.dims.n_y, spec.dims.n_z, spec.dims.n_u
    if shocks is not None:
        shocks = np.asarray(shocks, dtype=float)
        if shocks.shape != (horizon, n_z):
            raise ValueError(
                f"shocks must have shape {(horizon, n_z)}, got {shocks.shape}"
            )

    y = np.empty((horizon, n_y))
    z = np.empty((horizon, n_z))
    u = np.empty((horizon, n_u))
    mu = np.empty((horizon, n_y))

    state = sys.state0.astype(float).copy()
    loss = 0.0
    peak_quad = 0.0
    discount = 1.0
    # the isfinite guard below owns overflow handling
    with np.errstate(over="ignore", invalid="ignore"):
        for t in range(horizon):
            if not np.all(np.isfinite(state)):
                raise DivergenceError(f"simulated state overflowed at t = {t}")
            yt = state[:n_y]
            zt = state[n_y:]
            ut = reg.F_y @ yt + aug.F_z @ zt
            y[t] = yt
            z[t] = zt
            u[t] = ut
            mu[t] = reg.P_y @ yt + aug.P_z @ zt
            quad = float(
                yt @ spec.Q_yy @ yt + 2.0 * (yt @ spec.Q_yz @ zt) + ut @ spec.R @ ut
            )
            loss += 0.5 * discount * quad
            peak_quad = max(peak_quad, abs(quad))
            state = sys.T_cl @ state
            if shocks is not None:
                state = state + sys.impulse_loading @ shocks[t]
            discount *= spec.beta

    # discounted quadratic terms decay like (sqrt(beta) * rho)^(2t)
    rho = math.sqrt(spec.beta) * kernel.spectral_radius(sys.T_cl)
    ratio = rho * rho
    if ratio < 1.0:
        tail = 0.5 * peak_quad * ratio**horizon / (1.0 - ratio)
    else:
        tail = math.inf
    return Trajectory(
        horizon=horizon, y=y, z=z, u=u, mu=mu, loss=loss, truncation_bound=tail
    )


def irf(
    sys: ClosedLoopSystem,
    spec: ModelSpec,
    reg: RegulatorSolution,
    aug: AugmentedSolution,
    horizon: int,
    shock_index: int,
) -> Trajectory:
    """Response to a unit date-0 innovation in one forcing variable.

    The impulse replaces the model's initial conditions: k0 = 0, z0 = e_j,
    and x0 is re-anchored against that z0 (the date-0 information set includes
    the shock, so the forward-looking block reacts on impact).
    """
    n_z = spec.dims.n_z
    if not 0 <= shock_index < n_z:
        raise ValueError(
            f"shock index {shock_index} out of range for {n_z} forcing variables"
        )
    unit = np.zeros(n_z)
    unit[shock_index] = 1.0
    anchored = anchor_x0(spec, reg, aug, k0=np.zeros(spec.dims.n_k), z0=unit)
    start = np.concatenate([anchored.y0, unit])
    return simulate_path(replace(sys, state0=start), spec, reg, aug, horizon)
