import numpy as np
import pytest

from dtsne.synthgen import (
    PRESET_NAMES,
    CenterLaw,
    ClusterSpec,
    Distribution,
    SpecInvalidError,
    generate,
    preset,
    spec_from_dict,
)

SHAPES = {
    "2d-density": (900, 2, [300, 300, 300]),
    "2d-samples": (800, 2, [100, 200, 500]),
    "g3s": (1200, 50, [200, 400, 600]),
    "g3d": (900, 50, [300, 300, 300]),
    "g10d": (2000, 50, [200] * 10),
    "u5d": (2500, 150, [500] * 5),
}


@pytest.mark.parametrize("name", PRESET_NAMES)
def test_preset_shapes(name):
    d = generate(preset(name, seed=11))
    n, m, counts = SHAPES[name]
    assert (d.n, d.m) == (n, m)
    np.testing.assert_array_equal(np.bincount(d.labels), counts)
    assert np.all(np.isfinite(d.points))


def _centered_scale(d, lab):
    block = d.points[d.labels == lab]
    return (block - block.mean(axis=0)).std(ddof=1)


@pytest.mark.parametrize("name", PRESET_NAMES)
def test_cluster_scales(name):
    spec = preset(name, seed=2)
    d = generate(spec)
    for lab, (size, scale) in enumerate(zip(spec.samples_per_cluster, spec.scales)):
        if size >= 200:
            assert _centered_scale(d, lab) == pytest.approx(scale, rel=0.10)


def test_g3d_scales():
    d = generate(preset("g3d", seed=7))
    assert [_centered_scale(d, k) for k in range(3)] == pytest.approx([2, 4, 8], rel=0.1)


def test_unit_variance_law_of_large_numbers():
    for dist in Distribution:
        spec = ClusterSpec(dist, 1, 3, (10_000,), (1.0,), seed=4)
        var = generate(spec).points.var(axis=0, ddof=1)
        np.testing.assert_allclose(var, 1.0, rtol=0.05)


def test_centers_in_range():
    d = generate(preset("g10d", seed=1))
    for lab in range(10):
        center = d.points[d.labels == lab].mean(axis=0)
        assert np.all((center > -3) & (center < 53))


def test_fixed_centers():
    d = generate(preset("2d-density", seed=0))
    means = [d.points[d.labels == k].mean(axis=0) for k in range(3)]
    np.testing.assert_allclose(means, [(10, 0), (0, 15), (-10, 0)], atol=0.8)


def test_deterministic():
    a = generate(preset("g3s", seed=99))
    b = generate(preset("g3s", seed=99))
    assert np.array_equal(a.points, b.points)
    assert not np.array_equal(a.points, generate(preset("g3s", seed=100)).points)


def test_clusters_use_independent_streams():
    small = ClusterSpec(Distribution.GAUSSIAN, 2, 4, (50, 60), (1.0, 2.0), seed=3)
    big = ClusterSpec(Distribution.GAUSSIAN, 3, 4, (50, 60, 70), (1.0, 2.0, 5.0), seed=3)
    np.testing.assert_array_equal(generate(small).points, generate(big).points[:110])


def test_unknown_preset():
    with pytest.raises(SpecInvalidError, match="g3d"):
        preset("nope")


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(samples_per_cluster=(10,)),
        dict(scales=(1.0, -1.0)),
        dict(center_law=CenterLaw.FIXED_2D, dim=3),
        dict(n_clusters=0, samples_per_cluster=(), scales=()),
    ],
)
def test_invalid_spec(kwargs):
    base = dict(distribution=Distribution.GAUSSIAN, n_clusters=2, dim=2,
                samples_per_cluster=(10, 10), scales=(1.0, 1.0))
    with pytest.raises(SpecInvalidError):
        generate(ClusterSpec(**{**base, **kwargs}))


def test_spec_from_dict():
    spec = spec_from_dict({"distribution": "uniform", "n_clusters": 2, "dim": 3,
                           "samples_per_cluster": [5, 6], "scales": [1, 2], "seed": 8})
    assert generate(spec).n == 11
    with pytest.raises(SpecInvalidError):
        spec_from_dict({"distribution": "cauchy"})
