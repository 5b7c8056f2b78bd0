"""
MAPFlow Suite
Single runs and the 11 x 2 reproduction grid
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path
from typing import Dict, List, NamedTuple, Optional, Tuple

from . import export
from .analysis import PcaResult, metrics_table, pca
from .dynamics import SteadyState, Trajectory, equilibrium, simulate
from .errors import HorizonError, SteadyStateError, SuiteError, ValidationError
from .metrics import MetricsRecord, evaluate
from .settings import ALL_ARCHITECTURES, REFERENCE_CONFIGS, RunConfig
from .topology import (ArchitectureKind, ArchitectureSpec, FlowSystem, build_architecture,
                       parse_kind)

logger = logging.getLogger(__name__)


class RunResult(NamedTuple):
    trajectory: Trajectory
    steady: SteadyState
    record: MetricsRecord


class SuiteResult(NamedTuple):
    records: List[MetricsRecord]
    pca: PcaResult
    runs: Dict[Tuple[str, str], RunResult]


def config_label(s: float, f: float) -> str:
    """'A' or 'B' for the reference configurations, '' otherwise"""
    for label, (ks, kf) in REFERENCE_CONFIGS.items():
        if (s, f) == (ks, kf):
            return label
    return ""


def _build(config: RunConfig) -> FlowSystem:
    config.check()
    if config.arch.upper() == ALL_ARCHITECTURES:
        raise ValidationError("a single run needs one architecture", flag="--arch")
    spec = ArchitectureSpec(parse_kind(config.arch), config.n_agents)
    return build_architecture(spec, config.s, config.f, config.b, config.w)


def _write(trajectory: Trajectory, record: Optional[MetricsRecord], config: RunConfig):
    if config.format == "svg":
        from ui.plots import plot_trajectory
        plot_trajectory(trajectory, record, config.out)
    else:
        export.write_trajectory(trajectory, config.out)


def run_trajectory(config: RunConfig) -> Trajectory:
    """Build and simulate one architecture without scoring it; write config.out if set"""
    trajectory = simulate(_build(config), config.steps)
    if config.out:
        _write(trajectory, None, config)
    return trajectory


def run_single(config: RunConfig) -> RunResult:
    """Build, simulate, solve and score one architecture; write config.out if set"""
    system = _build(config)
    trajectory = simulate(system, config.steps)
    try:
        steady = equilibrium(system)
    except SteadyStateError as e:
        raise SteadyStateError(f"{e} (check --s and --f: e = 1 - s - f must leave a sink)") from e
    try:
        record = evaluate(system, trajectory, steady, config.threshold, config.tau_rule,
                          config=config_label(config.s, config.f))
    except HorizonError as e:
        raise HorizonError(f"{e} (increase --steps)") from e

    if config.out:
        _write(trajectory, record, config)
    return RunResult(trajectory, steady, record)


def run_all(config: RunConfig) -> List[RunResult]:
    """run_single for the requested architecture, or every one for ALL"""
    if config.arch.upper() != ALL_ARCHITECTURES:
        return [run_single(config)]
    return [run_single(replace(config, arch=kind.value, out=""))
            for kind in ArchitectureKind]


def _suite_pair(args: Tuple[ArchitectureKind, str, RunConfig]) -> RunResult:
    kind, label, base = args
    s, f = REFERENCE_CONFIGS[label]
    try:
        return run_single(replace(base, arch=kind.value, s=s, f=f, out=""))
    except Exception as e:
        raise SuiteError(kind.value, label, e) from e


def run_reference_suite(output_dir: Optional[str], base: Optional[RunConfig] = None,
                        workers: int = 4) -> SuiteResult:
    """Every (architecture, configuration) pair at N=5, b=1, then PCA of the table"""
    base = replace(base or RunConfig(), n_agents=5, b=1.0, arch=ALL_ARCHITECTURES)
    pairs = [(kind, label, base) for label in REFERENCE_CONFIGS for kind in ArchitectureKind]

    with ThreadPoolExecutor(max_workers=workers) as executor:
        results = list(executor.map(_suite_pair, pairs))

    records = [r.record for r in results]
    table, labels = metrics_table(records)
    result = pca(table, labels)
    runs = {(kind.value, label): run for (kind, label, _), run in zip(pairs, results)}
    logger.info("suite finished: %d runs, PC1+PC2 explain %.4f", len(runs), result.explained_2d)

    if output_dir:
        out = Path(output_dir)
        out.mkdir(parents=True, exist_ok=True)
        export.write_metrics(records, out / "metrics.csv")
        export.write_pca(result, out / "pca.csv")
        for (code, label), run in runs.items():
            export.write_trajectory(run.trajectory, out / f"traj_{code}_{label}.csv")
    return SuiteResult(records, result, runs)
