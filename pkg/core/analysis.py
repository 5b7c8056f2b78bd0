"""
MAPFlow Analysis
Principal component comparison of the architectures' performance metrics
"""

import logging
import warnings
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from sklearn.decomposition import PCA
from sklearn.preprocessing import StandardScaler

from .errors import EmptyInputError, ValidationError
from .metrics import MetricsRecord
from .topology import ArchitectureKind

logger = logging.getLogger(__name__)

METRIC_COLUMNS = ("total_work", "dispersion", "transition_time")

Label = Tuple[str, str]


class DegenerateColumnWarning(UserWarning):
    """A table column has zero variance and was only centered"""


@dataclass(frozen=True, eq=False)
class PcaResult:
    """Components, explained variance and 2-D scores of a metrics table"""
    loadings: np.ndarray                  # rows = components, descending eigenvalue
    explained_variance_ratio: np.ndarray
    projection: np.ndarray                # m x 2 scores on the first two components
    row_labels: List[Label]
    standardized: np.ndarray

    @property
    def explained_2d(self) -> float:
        return float(self.explained_variance_ratio[:2].sum())

    def point(self, arch: str, config: str) -> np.ndarray:
        """Projected scores of one (arch, config) row"""
        return self.projection[self.row_labels.index((arch, config))]


def standardize(table: np.ndarray) -> np.ndarray:
    """Center every column and scale it to unit population standard deviation"""
    table = np.asarray(table, dtype=float)
    if table.ndim != 2 or table.shape[0] == 0:
        raise EmptyInputError("standardize needs a non-empty 2-D table")
    scaler = StandardScaler().fit(table)
    z = scaler.transform(table)
    std = np.sqrt(scaler.var_)
    for k in range(table.shape[1]):
        if std[k] <= np.finfo(float).eps * max(abs(scaler.mean_[k]), 1.0):
            message = f"column {k + 1} has zero variance; left centered but unscaled"
            logger.warning(message)
            warnings.warn(message, DegenerateColumnWarning, stacklevel=2)
            z[:, k] = 0.0
    return z


def pca(table: np.ndarray, labels: Optional[Sequence[Label]] = None) -> PcaResult:
    """PCA of the z-scored table"""
    table = np.asarray(table, dtype=float)
    if table.ndim != 2 or table.shape[0] < 3:
        raise ValidationError(f"pca needs at least 3 rows, got shape {table.shape}")
    if table.shape[1] < 2:
        raise ValidationError("pca needs at least 2 columns")
    if not np.all(np.isfinite(table)):
        raise ValidationError("pca input has non-finite entries")
    m, k = table.shape
    labels = list(labels) if labels is not None else [(str(i + 1), "") for i in range(m)]
    if len(labels) != m:
        raise ValidationError(f"{len(labels)} labels for {m} rows")

    z = standardize(table)
    if not np.any(z):
        raise ValidationError("table has no variance to analyse")
    model = PCA(n_components=min(m, k), svd_solver="full").fit(z)
    loadings = model.components_.copy()

    # largest-magnitude loading of each component is positive
    for row in loadings:
        if row[np.argmax(np.abs(row))] < 0:
            row *= -1.0

    ratio = np.clip(model.explained_variance_ratio_, 0.0, None)
    projection = z @ loadings[:2].T
    logger.debug("explained variance: %s", np.array2string(ratio, precision=4))
    return PcaResult(loadings=loadings, explained_variance_ratio=ratio,
                     projection=projection, row_labels=labels, standardized=z)


def metrics_table(records: Sequence[MetricsRecord]) -> Tuple[np.ndarray, List[Label]]:
    """Rows of [W_T, sigma_x, tau] with their (arch, config) labels"""
    if not records:
        raise EmptyInputError("no metrics records")
    table = np.array([[getattr(r, column) for column in METRIC_COLUMNS] for r in records],
                     dtype=float)
    return table, [(r.arch, r.config) for r in records]


def _catalog_position(record: MetricsRecord) -> int:
    codes = [kind.value for kind in ArchitectureKind]
    return codes.index(record.arch) if record.arch in codes else len(codes)


def rank(records: Sequence[MetricsRecord], metric: str,
         ascending: bool = True) -> List[MetricsRecord]:
    """Sort records by one metric, ties in catalog order"""
    if metric not in METRIC_COLUMNS:
        raise ValidationError(f"unknown metric '{metric}', expected one of {METRIC_COLUMNS}")
    sign = 1.0 if ascending else -1.0
    return sorted(records, key=lambda r: (sign * getattr(r, metric), _catalog_position(r)))


def _dominates(a: MetricsRecord, b: MetricsRecord, tol: float) -> bool:
    no_worse = (a.total_work >= b.total_work - tol
                and a.dispersion <= b.dispersion + tol
                and a.transition_time <= b.transition_time)
    better = (a.total_work > b.total_work + tol
              or a.dispersion < b.dispersion - tol
              or a.transition_time < b.transition_time)
    return no_worse and better


def pareto_front(records: Sequence[MetricsRecord], tol: float = 1e-9) -> List[MetricsRecord]:
    """Records no other record beats on every metric (max W_T, min sigma_x, min tau)"""
    return [r for r in records if not any(_dominates(o, r, tol) for o in records if o is not r)]
