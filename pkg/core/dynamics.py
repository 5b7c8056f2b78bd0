"""
MAPFlow Dynamics
Runs the discrete-time master equation and solves for its steady state
"""

import logging
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve

from .errors import DimensionError, SteadyStateError, ValidationError
from .topology import FlowSystem

logger = logging.getLogger(__name__)

# Pivots below this fraction of the largest |(I - M)| entry count as singular
SINGULAR_PIVOT = 1e-12
RESIDUAL_BOUND = 1e-9


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Agent states x_i(t), one row per time step t = 0..T"""
    states: np.ndarray
    system: FlowSystem

    @property
    def steps(self) -> int:
        return self.states.shape[0] - 1

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    def agent(self, i: int) -> np.ndarray:
        """Time series of agent i (1-based)"""
        return self.states[:, i - 1]

    def is_monotone(self, tol: float = 0.0) -> bool:
        """Every agent's state is non-decreasing in t (up to tol)"""
        if self.steps == 0:
            return True
        return bool(np.all(np.diff(self.states, axis=0) >= -tol))


@dataclass(frozen=True, eq=False)
class SteadyState:
    """Equilibrium states and the verified fixed-point residual"""
    x_eq: np.ndarray
    residual: float

    @property
    def n_agents(self) -> int:
        return self.x_eq.shape[0]


def step(system: FlowSystem, x: np.ndarray) -> np.ndarray:
    """One synchronous update: x' = s x + F x + source"""
    x = np.asarray(x, dtype=float)
    if x.shape != (system.n_agents,):
        raise DimensionError(f"state has shape {x.shape}, expected ({system.n_agents},)")
    return system.update_matrix @ x + system.source_vector


def simulate(system: FlowSystem, steps: int) -> Trajectory:
    """Run from the first injection (row 0 = source vector) for `steps` updates"""
    if steps < 0:
        raise ValidationError(f"steps must be >= 0, got {steps}", flag="--steps")
    states = np.empty((steps + 1, system.n_agents))
    states[0] = system.source_vector
    matrix = system.update_matrix
    for t in range(1, steps + 1):
        states[t] = matrix @ states[t - 1] + system.source_vector
    states.setflags(write=False)
    return Trajectory(states=states, system=system)


def equilibrium(system: FlowSystem) -> SteadyState:
    """Solve (I - M) x = source by LU elimination with partial pivoting"""
    n = system.n_agents
    a = np.eye(n) - system.update_matrix
    scale = np.abs(a).max()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(a)
    pivot = np.abs(np.diag(lu)).min()
    if scale == 0 or pivot < SINGULAR_PIVOT * scale:
        raise SteadyStateError(
            f"no steady state for {system.code}: I - M is singular "
            f"(e = {system.e:g}, smallest pivot {pivot:.3g})")

    x_eq = lu_solve((lu, piv), system.source_vector)
    residual = float(np.abs(step(system, x_eq) - x_eq).max())
    if residual > RESIDUAL_BOUND * max(float(np.abs(x_eq).max()), 1.0):
        raise SteadyStateError(
            f"steady state of {system.code} fails the fixed-point check (residual {residual:.3g})")
    logger.debug("steady state of %s: %s", system.code, np.array2string(x_eq, precision=4))
    x_eq.setflags(write=False)
    return SteadyState(x_eq=x_eq, residual=residual)
