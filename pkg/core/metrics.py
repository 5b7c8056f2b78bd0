"""
MAPFlow Metrics
Total work, state dispersion, transition time and the mass balance
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, NamedTuple, Optional

import numpy as np

from .dynamics import SteadyState, Trajectory
from .errors import HorizonError, ValidationError
from .topology import FlowSystem

logger = logging.getLogger(__name__)

DEFAULT_THRESHOLD = 0.8


@dataclass
class MetricsRecord:
    """Performance of one architecture under one parameter configuration"""
    arch: str
    s: float
    f: float
    e: float
    b: float
    w: float
    total_work: float
    per_agent_work: List[float]
    dispersion: float
    transition_time: int
    tau_rule: str = "lead"
    config: str = ""  # "A", "B" or empty for ad-hoc runs

    @property
    def n_agents(self) -> int:
        return len(self.per_agent_work)

    @property
    def label(self) -> str:
        return f"{self.arch}@{self.config}" if self.config else self.arch

    def to_dict(self) -> dict:
        return {
            'arch': self.arch,
            's': self.s,
            'f': self.f,
            'e': self.e,
            'b': self.b,
            'w': self.w,
            'total_work': self.total_work,
            'per_agent_work': list(self.per_agent_work),
            'dispersion': self.dispersion,
            'transition_time': self.transition_time,
            'tau_rule': self.tau_rule,
            'config': self.config,
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'MetricsRecord':
        return cls(**data)


class MassBalance(NamedTuple):
    work_rate: float
    waste_rate: float
    residual: float


def per_agent_work(x_eq: np.ndarray, system: FlowSystem) -> np.ndarray:
    """W_i = e w x_i / b at steady state"""
    return system.e * system.w * np.asarray(x_eq, dtype=float) / system.b


def total_work(x_eq: np.ndarray, system: FlowSystem) -> float:
    """W_T: steady-state work per step normalized by the supply rate"""
    return float(system.e * system.w * np.sum(x_eq) / system.b)


def dispersion(x_eq: np.ndarray) -> float:
    """Population standard deviation of the equilibrium states"""
    x_eq = np.asarray(x_eq, dtype=float)
    if x_eq.size < 2:
        raise ValidationError("dispersion needs at least two agents")
    return float(np.std(x_eq))


def _check_threshold(threshold: float):
    if not 0.0 < threshold <= 1.0:
        raise ValidationError(f"threshold must lie in (0, 1], got {threshold}", flag="--threshold")


def _crossings(trajectory: Trajectory, x_eq: np.ndarray, threshold: float) -> np.ndarray:
    _check_threshold(threshold)
    return trajectory.states >= threshold * np.asarray(x_eq, dtype=float)


def transition_time(trajectory: Trajectory, x_eq: np.ndarray,
                    threshold: float = DEFAULT_THRESHOLD) -> int:
    """First t at which every agent holds at least threshold * x_eq"""
    reached = np.nonzero(_crossings(trajectory, x_eq, threshold).all(axis=1))[0]
    if reached.size == 0:
        raise HorizonError(
            f"horizon too short: not all agents reach {threshold:g} of equilibrium "
            f"within {trajectory.steps} steps")
    return int(reached[0])


def lead_transition_time(trajectory: Trajectory, x_eq: np.ndarray,
                         threshold: float = DEFAULT_THRESHOLD) -> int:
    """First t at which some agent holds at least threshold * x_eq"""
    reached = np.nonzero(_crossings(trajectory, x_eq, threshold).any(axis=1))[0]
    if reached.size == 0:
        raise HorizonError(
            f"horizon too short: no agent reaches {threshold:g} of equilibrium "
            f"within {trajectory.steps} steps")
    return int(reached[0])


TAU_RULES: Dict[str, Callable[[Trajectory, np.ndarray, float], int]] = {
    "lead": lead_transition_time,
    "all": transition_time,
}


def mass_balance(x_eq: np.ndarray, system: FlowSystem) -> MassBalance:
    """Split the supply into transformed and wasted flow at equilibrium"""
    x_eq = np.asarray(x_eq, dtype=float)
    work_rate = float(system.e * x_eq.sum())
    waste_rate = float(system.f * x_eq[system.waste_mask].sum())
    return MassBalance(work_rate, waste_rate, abs(system.b - work_rate - waste_rate))


def cumulative_work(trajectory: Trajectory, w: Optional[float] = None) -> np.ndarray:
    """Raw per-agent work e w sum_t x_i(t) over the whole trajectory"""
    system = trajectory.system
    w = system.w if w is None else w
    return system.e * w * trajectory.states.sum(axis=0)


def peak_agent(record: MetricsRecord) -> int:
    """1-based index of the agent doing the most work"""
    return int(np.argmax(record.per_agent_work)) + 1


def evaluate(system: FlowSystem, trajectory: Trajectory, steady: SteadyState,
             threshold: float = DEFAULT_THRESHOLD, tau_rule: str = "lead",
             config: str = "") -> MetricsRecord:
    """Assemble every metric of one run"""
    if tau_rule not in TAU_RULES:
        raise ValidationError(f"unknown tau rule '{tau_rule}'", flag="--tau-rule")
    x_eq = steady.x_eq
    tau = TAU_RULES[tau_rule](trajectory, x_eq, threshold)
    work = per_agent_work(x_eq, system)
    record = MetricsRecord(
        arch=system.code,
        s=system.s,
        f=system.f,
        e=system.e,
        b=system.b,
        w=system.w,
        total_work=float(work.sum()),
        per_agent_work=[float(v) for v in work],
        dispersion=dispersion(x_eq / system.b),
        transition_time=tau,
        tau_rule=tau_rule,
        config=config,
    )
    logger.debug("%s: W_T=%.6f sigma=%.6f tau=%d", record.label,
                 record.total_work, record.dispersion, record.transition_time)
    return record
