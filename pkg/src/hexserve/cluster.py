"""Complete-linkage agglomerative clustering of cells by tag-count vectors."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .analytics import TTestResult, t_test_pooled


class ClusterError(ValueError):
    """Invalid clustering input (zero vectors, bad k, ...)."""


@dataclass(frozen=True)
class ClusterAssignment:
    cells: tuple                 # CellId per row
    labels: tuple[int, ...]      # cluster index in [0, k) per row
    k: int


@dataclass(frozen=True)
class ClusterSummary:
    label: int
    size: int
    medoid_cell: object
    n_stops: int
    median_service_time_s: float
    mean_service_time_s: float


@dataclass(frozen=True)
class ClusterReport:
    per_cluster: tuple[ClusterSummary, ...]
    test: TTestResult | None  # pooled t on log per-stop times, only when k == 2


def cosine_distance(u, v) -> float:
    """1 - cos(u, v); undefined (error) for zero vectors."""
    uv = np.asarray(u, dtype=np.float64)
    vv = np.asarray(v, dtype=np.float64)
    if uv.shape != vv.shape:
        raise ClusterError("vectors must have equal length")
    nu = math.sqrt(float(uv @ uv))
    nv = math.sqrt(float(vv @ vv))
    if nu == 0.0 or nv == 0.0:
        raise ClusterError("cosine distance undefined for zero vectors")
    return 1.0 - float(uv @ vv) / (nu * nv)


def select_significant_features(importance, top_k: int) -> list[str]:
    """Top-k feature names from a ranked (name, weight) importance list."""
    if top_k < 1:
        raise ClusterError(f"top_k must be >= 1, got {top_k}")
    if top_k > len(importance):
        warnings.warn(
            f"requested top {top_k} features but only {len(importance)} are ranked; truncating",
            stacklevel=2,
        )
    return [name for name, _ in importance[:top_k]]


def _pairwise_cosine(vectors: np.ndarray) -> np.ndarray:
    norms = np.sqrt((vectors * vectors).sum(axis=1))
    if np.any(norms == 0.0):
        bad = int(np.nonzero(norms == 0.0)[0][0])
        raise ClusterError(f"cosine distance undefined for zero vector at row {bad}")
    unit = vectors / norms[:, None]
    d = 1.0 - unit @ unit.T
    np.fill_diagonal(d, 0.0)
    return d


def agglomerate(vectors, k: int, cells=None) -> ClusterAssignment:
    """Complete-linkage agglomerative clustering down to k clusters.

    Clusters are identified by their smallest original row index; merge ties
    are broken by the lexicographically smallest such (i, j) pair.
    """
    mat = np.asarray(vectors, dtype=np.float64)
    n = mat.shape[0]
    if not 1 <= k <= n:
        raise ClusterError(f"need 1 <= k <= n vectors, got k={k}, n={n}")
    if cells is None:
        cells = tuple(range(n))
    if len(cells) != n:
        raise ClusterError("cells and vectors must align")

    d = _pairwise_cosine(mat)
    members: dict[int, list[int]] = {i: [i] for i in range(n)}

    # slot index == smallest member index; merged slots keep the row-wise max
    # distance (complete linkage) and retired slots are wiped to +inf, so a
    # plain row-major argmin lands on the lexicographically smallest tie
    d[np.arange(n), np.arange(n)] = np.inf
    for _ in range(n - k):
        flat = int(np.argmin(d))
        i, j = divmod(flat, n)
        if i > j:
            i, j = j, i
        merged = np.maximum(d[i], d[j])
        d[i, :] = merged
        d[:, i] = merged
        d[i, i] = np.inf
        d[j, :] = np.inf
        d[:, j] = np.inf
        members[i].extend(members.pop(j))

    slots = sorted(members)
    labels = [0] * n
    for label, slot in enumerate(slots):
        for row in members[slot]:
            labels[row] = label
    return ClusterAssignment(tuple(cells), tuple(labels), k)


def medoid_row(rows: list[int], mat: np.ndarray, cells) -> int:
    """Cluster member minimizing summed cosine distance to its peers."""
    sub = mat[rows]
    norms = np.sqrt((sub * sub).sum(axis=1))
    unit = sub / norms[:, None]
    dist = 1.0 - unit @ unit.T
    sums = dist.sum(axis=1)
    best = min(range(len(rows)), key=lambda m: (sums[m], str(cells[rows[m]])))
    return rows[best]


def summarize_clusters(assignment: ClusterAssignment, per_stop_index, vectors) -> ClusterReport:
    """Per-cluster medoid and pooled per-stop service-time statistics.

    Statistics pool the individual stop times of all member cells, so the
    paired t-test (k == 2) runs at per-delivery granularity.
    """
    mat = np.asarray(vectors, dtype=np.float64)
    summaries = []
    pooled: list[np.ndarray] = []

    for label in range(assignment.k):
        rows = [i for i, lab in enumerate(assignment.labels) if lab == label]
        times: list[float] = []
        for i in rows:
            cell_times = per_stop_index.get(assignment.cells[i])
            if not cell_times:
                raise ClusterError(f"cell {assignment.cells[i]} has no recorded stops")
            times.extend(cell_times)
        arr = np.sort(np.asarray(times, dtype=np.float64))
        pooled.append(arr)
        med = medoid_row(rows, mat, assignment.cells)
        summaries.append(
            ClusterSummary(
                label=label,
                size=len(rows),
                medoid_cell=assignment.cells[med],
                n_stops=arr.size,
                median_service_time_s=float(np.median(arr)),
                mean_service_time_s=float(arr.mean()),
            )
        )

    test = None
    if assignment.k == 2:
        test = t_test_pooled(np.log(pooled[0]), np.log(pooled[1]))
    return ClusterReport(tuple(summaries), test)
