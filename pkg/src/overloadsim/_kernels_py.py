"""Pure-numpy step kernel.

The compiled kernel in _kernels.pyx mirrors this arithmetic exactly:
distances accumulate over dims in index order, selection orders by
(distance, document id), update sums run in ascending consumed-id order,
and uniform consumers draw with the same counter-based integers. Both
backends must produce bit-identical positions; see tests/test_backends.py.
"""
from __future__ import annotations

import numpy as np

from .core import KIND_UNIFORM
from .rng import child

BACKEND_NAME = "python"


def step_kernel(
    positions: np.ndarray,
    committed: np.ndarray,
    kinds: np.ndarray,
    docs: np.ndarray,
    radius: float,
    k: int,
    alpha: float,
    eps: float,
    cseeds: np.ndarray,
    out: np.ndarray,
    consumed: np.ndarray,
    curated: np.ndarray,
) -> None:
    n, dims = positions.shape
    pool = docs.shape[0]

    doc_w = np.zeros(pool, dtype=np.float64)
    for d in range(dims):
        doc_w += docs[:, d] * docs[:, d]
    doc_w = np.sqrt(doc_w) + eps

    dist = np.zeros((n, pool), dtype=np.float64)
    for d in range(dims):
        diff = positions[:, d : d + 1] - docs[None, :, d]
        dist += diff * diff
    dist = np.sqrt(dist)
    mask = dist <= radius

    am = 1.0 - alpha
    for i in range(n):
        if committed[i]:
            out[i] = positions[i]
            consumed[i] = 0
            curated[i] = 0
            continue
        cnt = int(mask[i].sum())
        take = min(k, cnt)
        curated[i] = cnt
        consumed[i] = take
        if take == 0:
            out[i] = positions[i]
            continue
        if kinds[i] == KIND_UNIFORM:
            ids = np.flatnonzero(mask[i])
            cseed = int(cseeds[i])
            for j in range(take):
                m = j + child(cseed, j) % (cnt - j)
                ids[j], ids[m] = ids[m], ids[j]
            sel = np.sort(ids[:take])
        elif cnt <= k:
            sel = np.flatnonzero(mask[i])
        else:
            key = np.where(mask[i], dist[i], np.inf)
            kth = np.partition(key, k - 1)[k - 1]
            less_ids = np.flatnonzero(key < kth)
            eq_ids = np.flatnonzero(key == kth)[: k - less_ids.size]
            sel = np.sort(np.concatenate([less_ids, eq_ids]))
        den = 0.0
        num = np.zeros(dims, dtype=np.float64)
        for j in range(take):
            w = doc_w[sel[j]]
            num += w * docs[sel[j]]
            den += w
        out[i] = alpha * positions[i] + am * (num / den)
