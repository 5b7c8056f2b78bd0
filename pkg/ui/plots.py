"""
MAPFlow Plots
SVG figures of trajectories, per-agent work and the PCA projection
"""

import logging
from pathlib import Path
from typing import List, Optional, Sequence, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from core.analysis import PcaResult  # noqa: E402
from core.dynamics import Trajectory  # noqa: E402
from core.errors import EmptyInputError  # noqa: E402
from core.metrics import MetricsRecord  # noqa: E402
from ui.themes import DEFAULT_THEME, agent_color, config_style, get_theme  # noqa: E402

logger = logging.getLogger(__name__)

# viewBox 0 0 800 600 (matplotlib writes SVG in points)
FIGSIZE = (800 / 72, 600 / 72)

matplotlib.rcParams['svg.hashsalt'] = 'mapflow'
matplotlib.rcParams['svg.fonttype'] = 'none'


def agent_groups(states: np.ndarray, tol: float = 1e-9) -> List[List[int]]:
    """Agents (1-based) whose whole time series coincide within tol"""
    groups: List[List[int]] = []
    for j in range(states.shape[1]):
        for group in groups:
            if np.max(np.abs(states[:, group[0] - 1] - states[:, j])) <= tol:
                group.append(j + 1)
                break
        else:
            groups.append([j + 1])
    return groups


def _group_label(group: List[int]) -> str:
    if len(group) == 1:
        return f"agent {group[0]}"
    if group == list(range(group[0], group[-1] + 1)):
        return f"agents {group[0]}-{group[-1]}"
    return "agents " + ",".join(str(i) for i in group)


def _figure(theme: dict):
    fig, ax = plt.subplots(figsize=FIGSIZE, dpi=72)
    fig.patch.set_facecolor(theme["background"])
    ax.set_facecolor(theme["background"])
    ax.tick_params(colors=theme["foreground"])
    for spine in ax.spines.values():
        spine.set_color(theme["foreground"])
    ax.grid(True, color=theme["grid"], linewidth=0.5)
    return fig, ax


def _save(fig, path: Union[str, Path]) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(path, format='svg', metadata={'Date': None})
    finally:
        plt.close(fig)
    logger.debug("wrote %s", path)
    return path


def plot_trajectory(trajectory: Trajectory, record: Optional[MetricsRecord],
                    path: Union[str, Path], theme_id: str = DEFAULT_THEME) -> Path:
    """State-vs-time lines per agent, dashed line at the transition time"""
    states = trajectory.states
    if states.size == 0:
        raise EmptyInputError("cannot plot an empty trajectory")
    theme = get_theme(theme_id)
    fig, ax = _figure(theme)
    t = np.arange(states.shape[0])
    for group in agent_groups(states):
        for position, agent in enumerate(group):
            line, = ax.plot(t, states[:, agent - 1], color=agent_color(theme, group[0] - 1),
                            linewidth=1.5,
                            label=_group_label(group) if position == 0 else "_nolegend_")
            line.set_gid(f"agent-{agent}")
    if record is not None:
        tau_line = ax.axvline(record.transition_time, color=theme["tau"], linestyle="--",
                              linewidth=1.0, label=f"tau = {record.transition_time}")
        tau_line.set_gid("tau")
    ax.set_xlabel("t", color=theme["foreground"])
    ax.set_ylabel("x_i(t)", color=theme["foreground"])
    ax.set_title(f"{trajectory.system.code}  s={trajectory.system.s:g}  f={trajectory.system.f:g}",
                 color=theme["foreground"])
    ax.legend(loc="lower right")
    return _save(fig, path)


def plot_work(records: Sequence[MetricsRecord], path: Union[str, Path],
              theme_id: str = DEFAULT_THEME) -> Path:
    """Grouped bars of per-agent work W_i, one group per record"""
    if not records:
        raise EmptyInputError("no metrics to plot")
    theme = get_theme(theme_id)
    fig, ax = _figure(theme)
    n_agents = max(r.n_agents for r in records)
    width = 0.8 / n_agents
    positions = np.arange(len(records))
    for i in range(n_agents):
        heights = [r.per_agent_work[i] if i < r.n_agents else 0.0 for r in records]
        bars = ax.bar(positions + (i - (n_agents - 1) / 2) * width, heights, width,
                      color=agent_color(theme, i), label=f"W_{i + 1}")
        for record, bar in zip(records, bars):
            bar.set_gid(f"bar-{record.label}-{i + 1}")
    ax.set_xticks(positions)
    ax.set_xticklabels([r.label for r in records], rotation=45, ha="right")
    ax.set_ylabel("W_i", color=theme["foreground"])
    ax.legend(loc="upper right")
    fig.tight_layout()
    return _save(fig, path)


def plot_pca(result: PcaResult, path: Union[str, Path], theme_id: str = DEFAULT_THEME) -> Path:
    """Scatter of the first two principal components, one marker per configuration"""
    if result.projection.size == 0:
        raise EmptyInputError("no PCA scores to plot")
    theme = get_theme(theme_id)
    fig, ax = _figure(theme)
    for (arch, config), point in zip(result.row_labels, result.projection):
        color, marker = config_style(theme, config)
        dot = ax.scatter([point[0]], [point[1]], color=color, marker=marker, s=40)
        dot.set_gid(f"pc-{arch}-{config}")
        ax.annotate(arch, point, textcoords="offset points", xytext=(4, 4), fontsize=8,
                    color=theme["foreground"])
    ratio = result.explained_variance_ratio
    ax.set_xlabel(f"PC1 ({100 * ratio[0]:.2f}%)", color=theme["foreground"])
    ax.set_ylabel(f"PC2 ({100 * ratio[1]:.2f}%)", color=theme["foreground"])
    return _save(fig, path)


def emit_plot(subject, path: Union[str, Path], record: Optional[MetricsRecord] = None,
              theme_id: str = DEFAULT_THEME) -> Path:
    """Render a trajectory, metrics records or a PCA result as SVG"""
    if isinstance(subject, Trajectory):
        return plot_trajectory(subject, record, path, theme_id)
    if isinstance(subject, PcaResult):
        return plot_pca(subject, path, theme_id)
    if isinstance(subject, MetricsRecord):
        subject = [subject]
    if isinstance(subject, (list, tuple)) and all(isinstance(r, MetricsRecord) for r in subject):
        return plot_work(list(subject), path, theme_id)
    raise EmptyInputError(f"nothing to plot for {type(subject).__name__}")
