"""Embedding quality: global, k-nearest-neighbor and relative-density correlations.

All three scores are Pearson correlations between a quantity measured in the
original space and the same quantity measured in the embedding:

* ``rho_global``: all pairwise distances,
* ``rho_knn``: distances from each point to its ``k`` nearest neighbors,
  where neighbors are chosen in the original space,
* ``rho_r``: ratios ``r_i / r_j`` of k-th neighbor radii over ordered pairs.
"""

from __future__ import annotations

import math
import warnings

import numpy as np
from scipy.stats import rankdata

from .core import Dataset, DtsneError, Embedding, QualityReport
from .linalg import LengthMismatchError, pairwise_sq_dists, pearson

DEFAULT_K = 100


class KTooLargeError(DtsneError):
    pass


class ZeroRadiusError(DtsneError):
    pass


def _points(x):
    if isinstance(x, Dataset):
        return x.points
    if isinstance(x, Embedding):
        return x.coords
    x = np.asarray(x, dtype=np.float64)
    return x[:, None] if x.ndim == 1 else x


def _dists(X):
    return np.sqrt(pairwise_sq_dists(X))


def _check_pair(high, low):
    if high.shape[0] != low.shape[0]:
        raise LengthMismatchError(f"row counts differ: {high.shape[0]} vs {low.shape[0]}")


def _check_k(n, k):
    if not 1 <= k <= n - 1:
        raise KTooLargeError(f"k={k} must lie in [1, n-1={n - 1}]")


def _neighbor_order(D, k):
    """Indices of the ``k`` nearest other points per row; ties go to the smaller index."""
    D = D.copy()
    np.fill_diagonal(D, np.inf)
    return np.argsort(D, axis=1, kind="stable")[:, :k]


def _spearman(a, b):
    return pearson(rankdata(a), rankdata(b))


def _global_pairs(Dh, Dl):
    iu = np.triu_indices(Dh.shape[0], k=1)
    return Dh[iu], Dl[iu]


def _knn_pairs(Dh, Dl, k):
    idx = _neighbor_order(Dh, k)
    rows = np.arange(Dh.shape[0])[:, None]
    return Dh[rows, idx].ravel(), Dl[rows, idx].ravel()


def _radii(D, k):
    idx = _neighbor_order(D, k)[:, k - 1]
    return D[np.arange(D.shape[0]), idx]


def _ratio_pairs(Dh, Dl, k):
    rh, rl = _radii(Dh, k), _radii(Dl, k)
    if np.any(rh == 0) or np.any(rl == 0):
        raise ZeroRadiusError(f"a point has its {k}-th neighbor at distance zero")
    off = ~np.eye(rh.size, dtype=bool)
    return (rh[:, None] / rh[None, :])[off], (rl[:, None] / rl[None, :])[off]


def rho_global(high, low) -> float:
    """Pearson correlation over all unordered pairwise distances."""
    H, L = _points(high), _points(low)
    _check_pair(H, L)
    return pearson(*_global_pairs(_dists(H), _dists(L)))


def knn_radii(points, k) -> np.ndarray:
    """Distance from every point to its ``k``-th nearest other point."""
    X = _points(points)
    _check_k(X.shape[0], k)
    return _radii(_dists(X), k)


def rho_knn(high, low, k=DEFAULT_K) -> float:
    H, L = _points(high), _points(low)
    _check_pair(H, L)
    _check_k(H.shape[0], k)
    return pearson(*_knn_pairs(_dists(H), _dists(L), k))


def rho_r(high, low, k=DEFAULT_K) -> float:
    H, L = _points(high), _points(low)
    _check_pair(H, L)
    _check_k(H.shape[0], k)
    return pearson(*_ratio_pairs(_dists(H), _dists(L), k))


def evaluate(high, low, k=None, spearman=True) -> QualityReport:
    """All three scores for one embedding.

    ``k`` defaults to ``min(100, n - 1)``; an explicit ``k`` above ``n - 1``
    is clamped with a warning.
    """
    H, L = _points(high), _points(low)
    _check_pair(H, L)
    n = H.shape[0]
    if k is None:
        k = min(DEFAULT_K, n - 1)
    elif k > n - 1:
        warnings.warn(f"k={k} clamped to n-1={n - 1}", stacklevel=2)
        k = n - 1
    _check_k(n, k)
    Dh, Dl = _dists(H), _dists(L)
    pairs = {
        "rho": _global_pairs(Dh, Dl),
        "rho_knn": _knn_pairs(Dh, Dl, k),
        "rho_r": _ratio_pairs(Dh, Dl, k),
    }
    ranked = {}
    if spearman:
        ranked = {key: _spearman(*ab) for key, ab in pairs.items()}
    return QualityReport(
        rho_global=pearson(*pairs["rho"]),
        rho_knn=pearson(*pairs["rho_knn"]),
        rho_r=pearson(*pairs["rho_r"]),
        k_neighbors=k,
        spearman=ranked,
    )


def is_undefined(value) -> bool:
    return value is None or math.isnan(value)
