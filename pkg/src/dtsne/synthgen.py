"""Seeded synthetic cluster benchmarks.

Every cluster draws from its own random stream,
``SeedSequence(seed, spawn_key=(cluster_index,))``, so the data of cluster
``i`` depends only on ``(seed, i)`` and the cluster's own parameters.
Adding or resizing clusters never perturbs the others.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import Dataset, DtsneError

FIXED_2D_CENTERS = ((10.0, 0.0), (0.0, 15.0), (-10.0, 0.0))
CENTER_RANGE = (0.0, 50.0)


class SpecInvalidError(DtsneError):
    pass


class Distribution(str, enum.Enum):
    GAUSSIAN = "gaussian"
    UNIFORM = "uniform"


class CenterLaw(str, enum.Enum):
    UNIFORM_0_50 = "uniform_0_50"
    FIXED_2D = "fixed_2d"


@dataclass(frozen=True)
class ClusterSpec:
    distribution: Distribution
    n_clusters: int
    dim: int
    samples_per_cluster: tuple
    scales: tuple
    center_law: CenterLaw = CenterLaw.UNIFORM_0_50
    fixed_centers: tuple | None = None
    seed: int = 0
    name: str = "synthetic"

    def validate(self):
        try:
            dist = Distribution(self.distribution)
            law = CenterLaw(self.center_law)
        except ValueError as exc:
            raise SpecInvalidError(str(exc)) from None
        if self.n_clusters < 1 or self.dim < 1:
            raise SpecInvalidError("n_clusters and dim must be positive")
        if len(self.samples_per_cluster) != self.n_clusters or len(self.scales) != self.n_clusters:
            raise SpecInvalidError("samples_per_cluster and scales need one entry per cluster")
        if any(int(s) < 1 for s in self.samples_per_cluster):
            raise SpecInvalidError("every cluster needs at least one sample")
        if any(not (float(s) > 0 and math.isfinite(float(s))) for s in self.scales):
            raise SpecInvalidError("scales must be positive and finite")
        if not 0 <= self.seed < 2**64:
            raise SpecInvalidError("seed must be a 64-bit unsigned integer")
        if law is CenterLaw.FIXED_2D:
            centers = self.fixed_centers or FIXED_2D_CENTERS
            if self.dim != 2:
                raise SpecInvalidError("fixed 2-d centers require dim == 2")
            if len(centers) < self.n_clusters:
                raise SpecInvalidError(f"{self.n_clusters} clusters but only {len(centers)} fixed centers")
        return dist, law


def _cluster(spec, dist, law, i):
    rng = np.random.default_rng(np.random.SeedSequence(spec.seed, spawn_key=(i,)))
    if law is CenterLaw.FIXED_2D:
        center = np.asarray((spec.fixed_centers or FIXED_2D_CENTERS)[i], dtype=np.float64)
    else:
        center = rng.uniform(*CENTER_RANGE, size=spec.dim)
    size = (int(spec.samples_per_cluster[i]), spec.dim)
    if dist is Distribution.GAUSSIAN:
        offsets = rng.standard_normal(size)
    else:
        half_width = 0.5 * math.sqrt(12.0)  # unit variance
        offsets = rng.uniform(-half_width, half_width, size)
    return center + float(spec.scales[i]) * offsets


def generate(spec: ClusterSpec) -> Dataset:
    """Draw all clusters of ``spec``; labels hold the cluster index."""
    dist, law = spec.validate()
    blocks = [_cluster(spec, dist, law, i) for i in range(spec.n_clusters)]
    labels = np.repeat(np.arange(spec.n_clusters), [int(s) for s in spec.samples_per_cluster])
    return Dataset(np.vstack(blocks), labels, spec.name)


_PRESETS = {
    "2d-density": dict(
        distribution=Distribution.GAUSSIAN, n_clusters=3, dim=2,
        samples_per_cluster=(300, 300, 300), scales=(1.0, 2.0, 4.0),
        center_law=CenterLaw.FIXED_2D,
    ),
    "2d-samples": dict(
        distribution=Distribution.GAUSSIAN, n_clusters=3, dim=2,
        samples_per_cluster=(100, 200, 500), scales=(2.0, 2.0, 2.0),
        center_law=CenterLaw.FIXED_2D,
    ),
    "g3s": dict(
        distribution=Distribution.GAUSSIAN, n_clusters=3, dim=50,
        samples_per_cluster=(200, 400, 600), scales=(2.0, 2.0, 2.0),
    ),
    "g3d": dict(
        distribution=Distribution.GAUSSIAN, n_clusters=3, dim=50,
        samples_per_cluster=(300, 300, 300), scales=(2.0, 4.0, 8.0),
    ),
    "g10d": dict(
        distribution=Distribution.GAUSSIAN, n_clusters=10, dim=50,
        samples_per_cluster=(200,) * 10, scales=tuple(float(s) for s in range(1, 11)),
    ),
    "u5d": dict(
        distribution=Distribution.UNIFORM, n_clusters=5, dim=150,
        samples_per_cluster=(500,) * 5, scales=(1.0, 2.0, 4.0, 6.0, 8.0),
    ),
}

PRESET_NAMES = tuple(_PRESETS)


def preset(name: str, seed: int = 0) -> ClusterSpec:
    try:
        params = _PRESETS[name]
    except KeyError:
        raise SpecInvalidError(
            f"unknown preset {name!r}; available: {', '.join(PRESET_NAMES)}"
        ) from None
    return ClusterSpec(seed=seed, name=name, **params)


def spec_from_dict(d: dict) -> ClusterSpec:
    """Build a spec from plain JSON-style values."""
    try:
        return ClusterSpec(
            distribution=Distribution(d["distribution"]),
            n_clusters=int(d["n_clusters"]),
            dim=int(d["dim"]),
            samples_per_cluster=tuple(int(s) for s in d["samples_per_cluster"]),
            scales=tuple(float(s) for s in d["scales"]),
            center_law=CenterLaw(d.get("center_law", CenterLaw.UNIFORM_0_50)),
            fixed_centers=tuple(tuple(map(float, c)) for c in d["fixed_centers"]) if d.get("fixed_centers") else None,
            seed=int(d.get("seed", 0)),
            name=str(d.get("name", "synthetic")),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecInvalidError(f"invalid cluster spec: {exc}") from None
