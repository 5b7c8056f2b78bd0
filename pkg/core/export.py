"""
MAPFlow Export
CSV writers and readers for trajectories, metrics tables and PCA scores
"""

import csv
import logging
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Sequence, Union

import numpy as np

from .analysis import PcaResult
from .dynamics import Trajectory
from .metrics import MetricsRecord

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def format_number(value) -> str:
    """Full double precision (17 significant digits); ints stay ints"""
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return format(float(value), '.17g')


def _open_for_write(path: PathLike):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return open(path, 'w', encoding='utf-8', newline='')


def _write_rows(path: PathLike, header: Sequence[str], rows: Iterable[Sequence[str]],
                trailer: Sequence[str] = ()):
    with _open_for_write(path) as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(header)
        writer.writerows(rows)
        for line in trailer:
            f.write(line + '\n')
    logger.debug("wrote %s", path)


def trajectory_header(n_agents: int) -> List[str]:
    return ['t'] + [f'x{i}' for i in range(1, n_agents + 1)]


def trajectory_rows(trajectory: Trajectory) -> Iterator[List[str]]:
    for t, row in enumerate(trajectory.states):
        yield [str(t)] + [format_number(v) for v in row]


def write_trajectory(trajectory: Trajectory, path: PathLike):
    """Write `t,x1,...,xN`, one row per time step"""
    _write_rows(path, trajectory_header(trajectory.states.shape[1]), trajectory_rows(trajectory))


def read_trajectory(path: PathLike) -> np.ndarray:
    """States matrix of a trajectory CSV (the t column dropped)"""
    with open(path, 'r', encoding='utf-8', newline='') as f:
        reader = csv.reader(f)
        next(reader)
        return np.array([[float(v) for v in row[1:]] for row in reader if row])


def metrics_header(n_agents: int) -> List[str]:
    return (['arch', 's', 'f', 'e', 'b', 'W_T', 'sigma_x', 'tau']
            + [f'W_{i}' for i in range(1, n_agents + 1)])


def metrics_row(record: MetricsRecord) -> List[str]:
    values = [record.s, record.f, record.e, record.b, record.total_work,
              record.dispersion, record.transition_time] + list(record.per_agent_work)
    return [record.arch] + [format_number(v) for v in values]


def write_metrics(records: Sequence[MetricsRecord], path: PathLike):
    """Write `arch,s,f,e,b,W_T,sigma_x,tau,W_1,...,W_N`"""
    n_agents = max(r.n_agents for r in records) if records else 0
    _write_rows(path, metrics_header(n_agents), (metrics_row(r) for r in records))


def read_metrics(path: PathLike) -> List[Dict[str, Union[str, float, int]]]:
    """Rows of a metrics CSV with numeric fields parsed"""
    parsed = []
    with open(path, 'r', encoding='utf-8', newline='') as f:
        for row in csv.DictReader(f):
            entry: Dict[str, Union[str, float, int]] = {'arch': row.pop('arch')}
            entry['tau'] = int(row.pop('tau'))
            entry.update({k: float(v) for k, v in row.items()})
            parsed.append(entry)
    return parsed


def write_pca(result: PcaResult, path: PathLike):
    """Write `arch,config,pc1,pc2` plus a `# explained:` trailer"""
    rows = ([arch, config, format_number(p[0]), format_number(p[1])]
            for (arch, config), p in zip(result.row_labels, result.projection))
    explained = ','.join(format_number(r) for r in result.explained_variance_ratio)
    _write_rows(path, ['arch', 'config', 'pc1', 'pc2'], rows,
                trailer=[f'# explained: {explained}'])


def read_pca_explained(path: PathLike) -> List[float]:
    """Explained-variance ratios from a PCA CSV trailer"""
    with open(path, 'r', encoding='utf-8') as f:
        for line in f:
            if line.startswith('# explained:'):
                return [float(v) for v in line.split(':', 1)[1].split(',')]
    return []
