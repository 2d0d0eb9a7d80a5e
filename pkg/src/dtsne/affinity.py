"""High-dimensional joint affinities for tSNE and dtSNE."""

from __future__ import annotations

import math
import warnings

import numpy as np

from .core import AffinityModel, Dataset, DtsneError
from .linalg import pairwise_sq_dists

LOG_SIGMA_BOUNDS = (-40.0, 40.0)
MAX_BISECTIONS = 64
LOG2_PERPLEXITY_TOL = 1e-5
PROB_FLOOR = 1e-300


class NotNormalizedError(DtsneError):
    pass


class DegenerateRowError(DtsneError):
    pass


class PerplexityWarning(UserWarning):
    """Bandwidth search stopped at a bound without reaching the target perplexity."""


def _entropy_bits(p):
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0, p * np.log2(np.where(p > 0, p, 1.0)), 0.0)
    return -terms.sum(axis=-1)


def perplexity_of(p_row) -> float:
    """``2 ** H`` of a probability vector, with ``H`` the entropy in bits."""
    p = np.asarray(p_row, dtype=np.float64)
    if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-10:
        raise NotNormalizedError("p_row must be non-negative and sum to 1")
    return float(2.0 ** _entropy_bits(p))


def _normalize_logits(logits):
    """Row-wise softmax with a hard floor; ``-inf`` logits give exact zeros."""
    shifted = logits - logits.max(axis=-1, keepdims=True)
    p = np.exp(shifted)
    p[p < PROB_FLOOR] = 0.0
    return p / p.sum(axis=-1, keepdims=True)


def _gaussian_rows(sq_dists, sigmas):
    return _normalize_logits(-sq_dists / (2.0 * sigmas[:, None] ** 2))


def _fit_sigmas(sq_dists, target):
    """Bisect ``log sigma`` independently for every row of ``sq_dists``.

    ``sq_dists`` holds, per row, the distances to all *other* points (no self
    entry). Rows stop individually once within tolerance, so the result for a
    row does not depend on which other rows are searched alongside it.
    """
    rows = sq_dists.shape[0]
    if np.any(sq_dists.max(axis=1) <= 0):
        bad = int(np.argmax(sq_dists.max(axis=1) <= 0))
        raise DegenerateRowError(f"row {bad}: all distances are zero")
    log2_target = math.log2(target)
    lo = np.full(rows, LOG_SIGMA_BOUNDS[0])
    hi = np.full(rows, LOG_SIGMA_BOUNDS[1])
    log_sigma = np.zeros(rows)
    active = np.ones(rows, dtype=bool)
    for _ in range(MAX_BISECTIONS):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        mid = 0.5 * (lo[idx] + hi[idx])
        log_sigma[idx] = mid
        h = _entropy_bits(_gaussian_rows(sq_dists[idx], np.exp(mid)))
        diff = h - log2_target
        done = np.abs(diff) < LOG2_PERPLEXITY_TOL
        too_wide = diff > 0
        hi[idx[too_wide]] = mid[too_wide]
        lo[idx[~too_wide]] = mid[~too_wide]
        active[idx[done]] = False
    if active.any():
        warnings.warn(
            f"{int(active.sum())} row(s) did not reach perplexity {target:g}; "
            "using the bandwidth at the search bound",
            PerplexityWarning,
            stacklevel=3,
        )
    return np.exp(log_sigma)


def fit_sigma(sq_dists_i, target_perplexity) -> float:
    """Gaussian bandwidth of one point matching ``target_perplexity``.

    ``sq_dists_i`` are the squared distances to the other ``n - 1`` points.
    """
    d = np.asarray(sq_dists_i, dtype=np.float64)[None, :]
    return float(_fit_sigmas(d, float(target_perplexity))[0])


def conditional_row(sq_dists_i, sigma) -> np.ndarray:
    """``p_{j|i}`` for one point given its bandwidth."""
    d = np.asarray(sq_dists_i, dtype=np.float64)[None, :]
    return _gaussian_rows(d, np.array([float(sigma)]))[0]


def _as_points(data):
    if isinstance(data, Dataset):
        return data.points
    return np.asarray(data, dtype=np.float64)


def _off_diagonal(D):
    n = D.shape[0]
    return D[~np.eye(n, dtype=bool)].reshape(n, n - 1)


def _symmetrize(cond):
    n = cond.shape[0]
    return (cond + cond.T) / (2.0 * n)


def _check_perplexity(n, perplexity):
    if n < 2:
        raise DtsneError("need at least two points")
    if not 0 < perplexity < n:
        raise DtsneError(f"perplexity {perplexity:g} must lie in (0, n={n})")


def _tsne_conditionals(D, perplexity):
    n = D.shape[0]
    sigmas = _fit_sigmas(_off_diagonal(D), float(perplexity))
    logits = -D / (2.0 * sigmas[:, None] ** 2)
    np.fill_diagonal(logits, -np.inf)
    return _normalize_logits(logits), sigmas


def build_affinities_tsne(data, perplexity=100.0) -> AffinityModel:
    """Symmetrized Gaussian affinities with per-point bandwidths."""
    X = _as_points(data)
    _check_perplexity(X.shape[0], perplexity)
    cond, sigmas = _tsne_conditionals(pairwise_sq_dists(X), perplexity)
    return AffinityModel(_symmetrize(cond), sigmas)


def compute_gammas(sigmas) -> np.ndarray:
    """Pairwise scale factors ``(s_i + s_j)^-2`` normalized by their largest off-diagonal value.

    The diagonal follows the same formula and may exceed one; it is never read.
    """
    s = np.asarray(sigmas, dtype=np.float64)
    raw = 1.0 / (s[:, None] + s[None, :]) ** 2
    n = s.size
    if n < 2:
        raise DtsneError("need at least two bandwidths")
    off = raw[~np.eye(n, dtype=bool)]
    return raw / off.max()


def build_affinities_dtsne(data, perplexity=100.0) -> AffinityModel:
    """dtSNE affinities.

    Bandwidths are first fit per point exactly as for tSNE. Conditionals are
    then recomputed with the pairwise bandwidth ``((s_i + s_j) / 2)^2`` in
    every numerator and denominator term, without refitting.
    """
    X = _as_points(data)
    _check_perplexity(X.shape[0], perplexity)
    D = pairwise_sq_dists(X)
    sigmas = _fit_sigmas(_off_diagonal(D), float(perplexity))
    pair_var = (0.5 * (sigmas[:, None] + sigmas[None, :])) ** 2
    logits = -D / (2.0 * pair_var)
    np.fill_diagonal(logits, -np.inf)
    cond = _normalize_logits(logits)
    return AffinityModel(_symmetrize(cond), sigmas, compute_gammas(sigmas))


def build_affinities(data, perplexity=100.0, method="tsne") -> AffinityModel:
    method = getattr(method, "value", method)
    if method == "tsne":
        return build_affinities_tsne(data, perplexity)
    if method == "dtsne":
        return build_affinities_dtsne(data, perplexity)
    raise DtsneError(f"unknown method {method!r}")
