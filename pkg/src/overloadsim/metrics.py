"""Polarization and summary metrics.

Q is half the distance between the two centroids found by a deterministic
2-means pass: 0 when the population agrees, 1 for an antipodal half/half
split. No randomness is used anywhere, so metrics replay exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np


@dataclass
class StepTrace:
    t: int
    Q: float
    mean_extremity: float
    mean_coverage: float
    max_delta: float
    cluster_centroids: tuple


def principal_axis(positions: np.ndarray) -> np.ndarray:
    """Dominant eigenvector of the sample covariance (power iteration,
    tolerance 1e-10, at most 1000 iterations). Sign is fixed so the first
    nonzero component is positive; zero covariance returns the first axis.
    """
    x = np.asarray(positions, dtype=np.float64)
    n, k = x.shape
    if k == 1:
        return np.array([1.0])
    e1 = np.zeros(k)
    e1[0] = 1.0
    if n < 2:
        return e1
    centered = x - x.mean(axis=0)
    cov = centered.T @ centered / (n - 1)
    if not np.any(cov):
        return e1
    v = np.ones(k) / np.sqrt(k)
    for attempt in range(k + 1):
        converged = False
        for _ in range(1000):
            w = cov @ v
            nw = float(np.linalg.norm(w))
            if nw < 1e-300:
                break  # v is in the null space; try another start
            w = w / nw
            if float(np.linalg.norm(w - v)) < 1e-10:
                v = w
                converged = True
                break
            v = w
        if converged or attempt >= k:
            break
        v = np.zeros(k)
        v[attempt] = 1.0
    nv = float(np.linalg.norm(v))
    if nv == 0.0:
        return e1
    v = v / nv
    for d in range(k):
        if v[d] != 0.0:
            if v[d] < 0.0:
                v = -v
            break
    return v


def polarization_Q(positions: np.ndarray) -> tuple[float, tuple]:
    """Bifurcation depth of a point set in the unit ball.

    Projections onto the principal axis (about the mean, so the result is
    translation invariant) are scanned for the contiguous two-cluster
    split with minimal within-cluster scatter; that split seeds Lloyd
    iterations on the full points, run to an assignment fixpoint (ties
    keep their cluster; at most 1000 rounds). Q = |c_hi - c_lo| / 2 over
    the final centroids, returned (high-projection side, low side). A
    degenerate split (either cluster empty) reports Q = 0 with both
    centroids at the mean.
    """
    x = np.asarray(positions, dtype=np.float64)
    mean = x.mean(axis=0)
    axis = principal_axis(x)
    proj = (x - mean) @ axis

    def degenerate():
        return 0.0, (mean.copy(), mean.copy())

    n = x.shape[0]
    if n < 2:
        return degenerate()
    # Seed with the best contiguous split of the projection order (includes
    # the sign split among its candidates). In one dimension the optimal
    # two-cluster assignment is always such a split, so Lloyd starts at the
    # global optimum there; in higher dimensions it is a strong warm start.
    order = np.argsort(proj, kind="stable")
    xs = x[order]
    cum = np.cumsum(xs, axis=0)
    total = cum[-1]
    c1 = np.arange(1, n, dtype=np.float64)
    s1 = cum[:-1]
    s0 = total - s1
    between = (s1 * s1).sum(axis=1) / c1 + (s0 * s0).sum(axis=1) / (n - c1)
    split = int(np.argmax(between))
    assign = np.zeros(n, dtype=bool)
    assign[order[split + 1 :]] = True
    if assign.all() or (~assign).all():
        return degenerate()
    for _ in range(1000):
        mu1 = x[assign].mean(axis=0)
        mu0 = x[~assign].mean(axis=0)
        d1 = ((x - mu1) ** 2).sum(axis=1)
        d0 = ((x - mu0) ** 2).sum(axis=1)
        new_assign = np.where(d1 < d0, True, np.where(d0 < d1, False, assign))
        if (new_assign == assign).all():
            break
        assign = new_assign
        if assign.all() or (~assign).all():
            return degenerate()
    mu1 = x[assign].mean(axis=0)
    mu0 = x[~assign].mean(axis=0)
    if float((mu1 - mu0) @ axis) < 0.0:
        mu1, mu0 = mu0, mu1
    q = float(np.linalg.norm(mu1 - mu0)) / 2.0
    return q, (mu1, mu0)


def belief_histogram(
    positions: np.ndarray, axis: np.ndarray, bins: int
) -> list[int]:
    """Counts of positions projected onto axis, over `bins` equal intervals
    of [-1, 1]. Values on an interior edge count toward the right bin; the
    last bin is closed on the right. Projections beyond [-1, 1] by more
    than 1e-9 are an error (the unit-ball invariant is broken)."""
    if bins < 1:
        raise ValueError("bins must be >= 1")
    x = np.asarray(positions, dtype=np.float64)
    proj = x @ np.asarray(axis, dtype=np.float64)
    if proj.size and (proj.max() > 1.0 + 1e-9 or proj.min() < -1.0 - 1e-9):
        raise ValueError("projection outside [-1, 1]: unit-ball invariant violated")
    proj = np.clip(proj, -1.0, 1.0)
    idx = np.floor((proj + 1.0) / 2.0 * bins).astype(np.int64)
    idx = np.clip(idx, 0, bins - 1)
    counts = np.bincount(idx, minlength=bins)
    return [int(c) for c in counts]


def has_converged(
    traces: Sequence[StepTrace], conv_tol: Optional[float], conv_window: int
) -> bool:
    """True iff the last conv_window traces all moved less than conv_tol."""
    if conv_tol is None:
        return False
    if len(traces) < conv_window:
        return False
    return all(tr.max_delta < conv_tol for tr in traces[-conv_window:])
