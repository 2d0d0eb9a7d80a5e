"""Dense numerical primitives."""

from __future__ import annotations

import math

import numpy as np

from .core import DtsneError


class DimensionTooLargeError(DtsneError):
    pass


class LengthMismatchError(DtsneError):
    pass


def pairwise_sq_dists(points) -> np.ndarray:
    """Squared Euclidean distance matrix.

    Accumulates ``(x_ic - x_jc)**2`` column by column instead of using the
    ``|x|^2 + |y|^2 - 2xy`` expansion, so the result is exactly symmetric,
    has an exactly zero diagonal and carries no cancellation error.
    """
    X = np.asarray(points, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    n, d = X.shape
    out = np.zeros((n, n))
    buf = np.empty((n, n))
    for c in range(d):
        col = X[:, c]
        np.subtract(col[:, None], col[None, :], out=buf)
        np.multiply(buf, buf, out=buf)
        out += buf
    return out


def pca(points, out_dims: int) -> np.ndarray:
    """Project centered data onto its leading principal directions.

    Components are ordered by decreasing variance. Each direction is
    sign-fixed so that its entry of largest magnitude is non-negative.

    Parameters
    ----------
    points : array of shape (n, d)
    out_dims : int
        Number of components, at most ``min(n, d)``.

    Returns
    -------
    scores : array of shape (n, out_dims)
    """
    X = np.asarray(points, dtype=np.float64)
    n, d = X.shape
    if not 1 <= out_dims <= min(n, d):
        raise DimensionTooLargeError(f"out_dims={out_dims} exceeds min(n, d)={min(n, d)}")
    Xc = X - X.mean(axis=0)
    if d <= n:
        evals, evecs = np.linalg.eigh(Xc.T @ Xc)
        order = np.argsort(evals, kind="stable")[::-1][:out_dims]
        directions = evecs[:, order]
    else:
        evals, evecs = np.linalg.eigh(Xc @ Xc.T)
        order = np.argsort(evals, kind="stable")[::-1][:out_dims]
        directions = Xc.T @ evecs[:, order]
        norms = np.linalg.norm(directions, axis=0)
        norms[norms == 0] = 1.0
        directions = directions / norms
    pivot = np.argmax(np.abs(directions), axis=0)
    signs = np.where(directions[pivot, np.arange(out_dims)] < 0, -1.0, 1.0)
    directions = directions * signs
    return Xc @ directions


def pearson(a, b) -> float:
    """Sample Pearson correlation; ``nan`` if either input has zero variance."""
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    if a.shape != b.shape:
        raise LengthMismatchError(f"lengths differ: {a.size} vs {b.size}")
    if a.size < 2:
        raise LengthMismatchError("need at least two observations")
    ac = a - a.mean()
    bc = b - b.mean()
    saa = float(ac @ ac)
    sbb = float(bc @ bc)
    if saa == 0.0 or sbb == 0.0:
        return math.nan
    r = float(ac @ bc) / math.sqrt(saa * sbb)
    return min(1.0, max(-1.0, r))
