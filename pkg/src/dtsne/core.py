"""Domain types and errors shared across the package."""

from __future__ import annotations

import dataclasses
import enum
import hashlib
import json
import math
from dataclasses import dataclass, field

import numpy as np


class DtsneError(ValueError):
    """Base class for all package errors."""


class NonFiniteError(DtsneError):
    def __init__(self, row, col):
        super().__init__(f"non-finite value at row {row}, column {col}")
        self.row = row
        self.col = col


class TooFewSamplesError(DtsneError):
    pass


class LabelLengthMismatchError(DtsneError):
    pass


class ConfigError(DtsneError):
    pass


class NonFiniteIterateError(DtsneError, ArithmeticError):
    def __init__(self, iteration):
        super().__init__(f"embedding left the finite domain at iteration {iteration}")
        self.iteration = iteration


class Method(str, enum.Enum):
    TSNE = "tsne"
    DTSNE = "dtsne"


def _frozen(a, dtype=np.float64):
    a = np.array(a, dtype=dtype, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Dataset:
    """An ``n x m`` sample matrix with optional integer cluster labels."""

    points: np.ndarray
    labels: np.ndarray | None = None
    name: str = "dataset"

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim == 1:
            pts = pts[:, None]
        object.__setattr__(self, "points", _frozen(pts))
        if self.labels is not None:
            object.__setattr__(self, "labels", _frozen(self.labels, dtype=np.int64))

    @property
    def n(self):
        return self.points.shape[0]

    @property
    def m(self):
        return self.points.shape[1]

    def digest(self):
        h = hashlib.sha256()
        h.update(np.ascontiguousarray(self.points).tobytes())
        h.update(repr(self.points.shape).encode())
        return h.hexdigest()


def validate_dataset(d: Dataset) -> Dataset:
    """Check the dataset invariants and return ``d`` unchanged."""
    pts = d.points
    if pts.ndim != 2 or pts.shape[1] < 1:
        raise DtsneError(f"points must be a 2-d matrix with at least one column, got shape {pts.shape}")
    if pts.shape[0] < 2:
        raise TooFewSamplesError(f"need at least 2 samples, got {pts.shape[0]}")
    bad = np.argwhere(~np.isfinite(pts))
    if bad.size:
        raise NonFiniteError(int(bad[0, 0]), int(bad[0, 1]))
    if d.labels is not None and d.labels.shape != (pts.shape[0],):
        raise LabelLengthMismatchError(
            f"{d.labels.shape[0] if d.labels.ndim else 0} labels for {pts.shape[0]} samples"
        )
    return d


@dataclass(frozen=True)
class EmbeddingConfig:
    """Optimizer hyperparameters.

    ``learning_rate=None`` means the automatic rate ``n / 12``.
    """

    method: Method = Method.DTSNE
    perplexity: float = 100.0
    iterations: int = 750
    learning_rate: float | None = None
    momentum_early: float = 0.5
    momentum_late: float = 0.8
    momentum_switch_iter: int = 20
    exaggeration_factor: float = 12.0
    exaggeration_iters: int = 100
    pca_input_dims: int = 50
    seed: int = 0
    out_dim: int = 2

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        if not self.perplexity > 0:
            raise ConfigError("perplexity must be positive")
        if self.iterations < 1:
            raise ConfigError("iterations must be a positive integer")
        if self.learning_rate is not None and not self.learning_rate > 0:
            raise ConfigError("learning_rate must be positive")
        for name in ("momentum_early", "momentum_late"):
            v = getattr(self, name)
            if not 0 <= v < 1:
                raise ConfigError(f"{name} must lie in [0, 1), got {v}")
        if not 1 <= self.momentum_switch_iter <= self.iterations:
            raise ConfigError("momentum_switch_iter must lie in [1, iterations]")
        if self.exaggeration_factor < 1:
            raise ConfigError("exaggeration_factor must be >= 1")
        if not 0 <= self.exaggeration_iters <= self.iterations:
            raise ConfigError("exaggeration_iters must lie in [0, iterations]")
        if self.pca_input_dims < 1:
            raise ConfigError("pca_input_dims must be positive")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if self.out_dim not in (2, 3):
            raise ConfigError("out_dim must be 2 or 3")

    def check_against(self, dataset: Dataset):
        if self.perplexity >= dataset.n:
            raise ConfigError(
                f"perplexity {self.perplexity:g} must be smaller than the number of samples ({dataset.n})"
            )

    def resolved_learning_rate(self, n):
        return n / 12.0 if self.learning_rate is None else float(self.learning_rate)

    def to_dict(self):
        d = dataclasses.asdict(self)
        d["method"] = self.method.value
        return d


def config_fingerprint(config: EmbeddingConfig, dataset: Dataset) -> str:
    payload = json.dumps(config.to_dict(), sort_keys=True)
    h = hashlib.sha256(payload.encode())
    h.update(dataset.digest().encode())
    return h.hexdigest()[:16]


@dataclass(frozen=True, eq=False)
class Embedding:
    coords: np.ndarray
    config_fingerprint: str = ""

    def __post_init__(self):
        c = _frozen(self.coords)
        if c.ndim != 2 or c.shape[1] not in (2, 3):
            raise DtsneError(f"embedding must have 2 or 3 columns, got shape {c.shape}")
        if not np.all(np.isfinite(c)):
            raise DtsneError("embedding contains non-finite coordinates")
        object.__setattr__(self, "coords", c)

    @property
    def dim(self):
        return self.coords.shape[1]

    @property
    def n(self):
        return self.coords.shape[0]


@dataclass(frozen=True, eq=False)
class AffinityModel:
    """Joint affinities ``P`` with per-point bandwidths and optional dtSNE scale factors."""

    P: np.ndarray
    sigmas: np.ndarray
    gammas: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "P", _frozen(self.P))
        object.__setattr__(self, "sigmas", _frozen(self.sigmas))
        if self.gammas is not None:
            object.__setattr__(self, "gammas", _frozen(self.gammas))

    @property
    def n(self):
        return self.P.shape[0]


@dataclass(frozen=True)
class QualityReport:
    """Correlation scores of one embedding; ``nan`` marks an undefined correlation."""

    rho_global: float
    rho_knn: float
    rho_r: float
    k_neighbors: int
    spearman: dict = field(default_factory=dict)

    def as_line(self):
        return (
            f"rho={_fmt(self.rho_global)} rho_knn={_fmt(self.rho_knn)} "
            f"rho_r={_fmt(self.rho_r)} k={self.k_neighbors}"
        )

    def spearman_line(self):
        return " ".join(f"spearman_{key}={_fmt(v)}" for key, v in self.spearman.items())


def _fmt(v):
    if v is None or math.isnan(v):
        return "undefined"
    return f"{v:.6g}"
