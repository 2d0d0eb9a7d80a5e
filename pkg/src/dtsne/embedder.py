"""Low-dimensional kernel, KL objective, gradient and the momentum descent loop."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

import numpy as np

from .affinity import build_affinities
from .core import (
    AffinityModel,
    Dataset,
    Embedding,
    EmbeddingConfig,
    NonFiniteIterateError,
    config_fingerprint,
    validate_dataset,
)
from .linalg import pairwise_sq_dists, pca

logger = logging.getLogger(__name__)

Q_FLOOR = 1e-12
INIT_STD = 1e-4
KL_EVERY = 50


@dataclass
class OptimizerState:
    Y: np.ndarray
    Y_prev: np.ndarray
    iter: int = 0
    kl_trace: list = field(default_factory=list)
    kl_iters: list = field(default_factory=list)
    runtime_s: float = 0.0


def _student_t(Y, gammas):
    """Unnormalized kernel ``(1 + g_ij |y_i - y_j|^2)^-1`` with a zero diagonal."""
    T = pairwise_sq_dists(Y)
    if gammas is not None:
        T *= gammas
    T += 1.0
    np.reciprocal(T, out=T)
    np.fill_diagonal(T, 0.0)
    return T


def compute_q(Y, gammas=None):
    """Return ``(Q, Z_q)`` for embedding ``Y``; ``gammas=None`` is the plain tSNE kernel."""
    T = _student_t(np.asarray(Y, dtype=np.float64), gammas)
    Z = T.sum()
    return T / Z, float(Z)


def kl_divergence(P, Q) -> float:
    """``sum_{i != j} p_ij log(p_ij / q_ij)``; zero ``p`` terms vanish, ``q`` floored at 1e-12."""
    P = np.asarray(P, dtype=np.float64)
    Q = np.asarray(Q, dtype=np.float64)
    mask = P > 0
    np.fill_diagonal(mask, False)
    p = P[mask]
    q = np.maximum(Q[mask], Q_FLOOR)
    return float(np.sum(p * np.log(p / q)))


def _gradient(P, Y, gammas):
    T = _student_t(Y, gammas)
    W = T * (1.0 / T.sum())
    np.subtract(P, W, out=W)
    W *= T
    if gammas is not None:
        W *= gammas
    return 4.0 * (W.sum(axis=1)[:, None] * Y - W @ Y)


def kl_gradient(P, Y, gammas=None) -> np.ndarray:
    """Gradient of the KL objective with respect to every embedding coordinate.

    Row ``l`` is ``4 * sum_k (p_kl - q_kl) g_kl (y_l - y_k) / (1 + g_kl |y_l - y_k|^2)``.
    """
    return _gradient(np.asarray(P, dtype=np.float64), np.asarray(Y, dtype=np.float64), gammas)


def reduce_input(points, config: EmbeddingConfig):
    if points.shape[1] > config.pca_input_dims:
        return pca(points, min(config.pca_input_dims, points.shape[0]))
    return points


def initial_embedding(points, out_dim=2):
    """PCA initialization rescaled to a pooled standard deviation of 1e-4."""
    Y0 = pca(points, out_dim)
    sd = Y0.std()
    if sd > 0:
        Y0 = Y0 * (INIT_STD / sd)
    return Y0


def optimize(affinities: AffinityModel, Y0, config: EmbeddingConfig, callback=None) -> OptimizerState:
    """Run ``config.iterations`` steps of momentum gradient descent from ``Y0``.

    ``callback(t, Y)`` is invoked after every step, if given.
    """
    P = affinities.P
    gammas = affinities.gammas
    n = P.shape[0]
    lr = config.resolved_learning_rate(n)
    P_exag = P * config.exaggeration_factor if config.exaggeration_iters > 0 else P
    Y = np.array(Y0, dtype=np.float64)
    state = OptimizerState(Y=Y, Y_prev=Y.copy())
    Y_prev = state.Y_prev
    start = time.perf_counter()
    for t in range(1, config.iterations + 1):
        P_t = P_exag if t <= config.exaggeration_iters else P
        momentum = config.momentum_early if t <= config.momentum_switch_iter else config.momentum_late
        grad = _gradient(P_t, Y, gammas)
        Y_new = Y - lr * grad + momentum * (Y - Y_prev)
        if not np.all(np.isfinite(Y_new)):
            raise NonFiniteIterateError(t)
        Y_prev, Y = Y, Y_new
        if t % KL_EVERY == 0 or t == config.iterations:
            Q, _ = compute_q(Y, gammas)
            kl = kl_divergence(P, Q)
            state.kl_trace.append(kl)
            state.kl_iters.append(t)
            logger.debug("iter %d  KL %.6f", t, kl)
        if callback is not None:
            callback(t, Y)
    state.Y, state.Y_prev, state.iter = Y, Y_prev, config.iterations
    state.runtime_s = time.perf_counter() - start
    return state


def run_embedding(dataset: Dataset, config: EmbeddingConfig | None = None):
    """Embed ``dataset`` end to end and return ``(Embedding, OptimizerState)``.

    Input with more than ``config.pca_input_dims`` columns is first reduced by
    PCA; the reduced data feeds both the affinities and the initialization.
    """
    config = config or EmbeddingConfig()
    validate_dataset(dataset)
    config.check_against(dataset)
    X = reduce_input(dataset.points, config)
    affinities = build_affinities(X, config.perplexity, config.method)
    Y0 = initial_embedding(X, config.out_dim)
    state = optimize(affinities, Y0, config)
    return Embedding(state.Y, config_fingerprint(config, dataset)), state
