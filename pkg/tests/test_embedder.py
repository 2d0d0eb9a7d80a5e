import warnings

import numpy as np
import pytest

from dtsne.affinity import PerplexityWarning, build_affinities_tsne
from dtsne.core import AffinityModel, Dataset, EmbeddingConfig, NonFiniteIterateError
from dtsne.embedder import (
    compute_q,
    initial_embedding,
    kl_divergence,
    kl_gradient,
    optimize,
    run_embedding,
)

import oracles
from helpers import fd_gradient, max_rel_error, random_gammas, random_joint


class TestComputeQ:
    def test_coincident_pair(self):
        Q, Z = compute_q(np.zeros((2, 2)))
        np.testing.assert_array_equal(Q, [[0, 0.5], [0.5, 0]])
        assert Z == 2.0

    def test_unit_distance_pair(self):
        Q, Z = compute_q([[0.0, 0.0], [1.0, 0.0]])
        assert Z == 1.0
        assert Q[0, 1] == Q[1, 0] == 0.5

    def test_unit_gammas_identical(self, rng):
        Y = rng.normal(size=(3, 2))
        Qa, Za = compute_q(Y)
        Qb, Zb = compute_q(Y, np.ones((3, 3)))
        np.testing.assert_allclose(Qb, Qa, rtol=0, atol=1e-15)

    def test_matches_scalar_oracle(self, rng):
        Y = rng.normal(size=(7, 3))
        g = random_gammas(rng, 7)
        Q, Z = compute_q(Y, g)
        Qo, Zo = oracles.q_matrix(Y.tolist(), g.tolist())
        np.testing.assert_allclose(Q, Qo, rtol=0, atol=1e-14)
        assert Z == pytest.approx(Zo, rel=1e-13)

    def test_normalized(self, rng):
        Q, _ = compute_q(rng.normal(size=(20, 2)) * 5, random_gammas(rng, 20))
        assert np.array_equal(Q, Q.T)
        assert np.all(np.diag(Q) == 0)
        assert abs(Q.sum() - 1) < 1e-10


class TestKL:
    def test_identical(self, rng):
        P = random_joint(rng, 6)
        assert abs(kl_divergence(P, P)) < 1e-12

    def test_non_negative(self, rng):
        for _ in range(20):
            assert kl_divergence(random_joint(rng, 8), random_joint(rng, 8)) >= -1e-12

    def test_matches_double_loop(self, rng):
        P, Q = random_joint(rng, 4), random_joint(rng, 4)
        assert kl_divergence(P, Q) == pytest.approx(oracles.kl(P.tolist(), Q.tolist()), abs=1e-12)

    def test_zero_p_terms_vanish(self):
        P = np.array([[0, 0.5, 0], [0.5, 0, 0], [0, 0, 0]])
        Q = np.full((3, 3), 1 / 6)
        np.fill_diagonal(Q, 0)
        assert kl_divergence(P, Q) == pytest.approx(np.log(0.5 / (1 / 6)))


class TestGradient:
    def test_zero_when_matched(self, rng):
        Y = rng.normal(size=(6, 2))
        Q, _ = compute_q(Y)
        np.testing.assert_allclose(kl_gradient(Q, Y), 0.0, atol=1e-10)

    def test_rows_sum_to_zero(self, rng):
        Y = rng.normal(size=(15, 3)) * 3
        g = kl_gradient(random_joint(rng, 15), Y, random_gammas(rng, 15))
        np.testing.assert_allclose(g.sum(axis=0), 0.0, atol=1e-9)

    @pytest.mark.parametrize("with_gammas", [False, True])
    def test_finite_differences(self, rng, with_gammas):
        n = 10
        P = random_joint(rng, n)
        Y = rng.normal(size=(n, 2))
        g = random_gammas(rng, n) if with_gammas else None
        assert max_rel_error(kl_gradient(P, Y, g), fd_gradient(P, Y, g)) < 1e-4


def _triangle():
    return Dataset(3.0 * np.eye(3))


class TestRun:
    def test_deterministic(self, rng):
        d = Dataset(rng.normal(size=(40, 5)))
        cfg = EmbeddingConfig(perplexity=8, iterations=120)
        a, _ = run_embedding(d, cfg)
        b, _ = run_embedding(d, cfg)
        assert np.array_equal(a.coords, b.coords)
        assert a.config_fingerprint == b.config_fingerprint

    @pytest.mark.parametrize("method", ["tsne", "dtsne"])
    def test_equidistant_symmetry(self, method):
        cfg = EmbeddingConfig(method=method, perplexity=1.5, iterations=200, exaggeration_iters=50)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", PerplexityWarning)
            e, _ = run_embedding(_triangle(), cfg)
        Y = e.coords
        d = [np.linalg.norm(Y[i] - Y[j]) for i, j in ((0, 1), (0, 2), (1, 2))]
        assert max(d) <= 1.05 * min(d)

    def test_init_scale(self, rng):
        Y0 = initial_embedding(rng.normal(size=(30, 6)), 2)
        assert Y0.std() == pytest.approx(1e-4, rel=1e-12)

    def test_pca_reduction_applied(self, rng):
        d = Dataset(rng.normal(size=(30, 12)))
        cfg = EmbeddingConfig(perplexity=5, iterations=60, exaggeration_iters=30, pca_input_dims=4, out_dim=3)
        e, state = run_embedding(d, cfg)
        assert e.coords.shape == (30, 3)
        assert state.kl_iters == [50, 60]

    def test_unit_gammas_reproduce_tsne(self, rng):
        X = rng.normal(size=(25, 4))
        aff = build_affinities_tsne(X, 6)
        unit = AffinityModel(aff.P, aff.sigmas, np.ones((25, 25)))
        Y0 = initial_embedding(X, 2)
        cfg = EmbeddingConfig(perplexity=6, iterations=100)
        ta, tb = [], []
        optimize(aff, Y0, cfg, callback=lambda t, Y: ta.append(Y.copy()))
        optimize(unit, Y0, cfg, callback=lambda t, Y: tb.append(Y.copy()))
        assert max(np.max(np.abs(a - b)) for a, b in zip(ta, tb)) <= 1e-10

    def test_divergence_reported(self, rng):
        X = rng.normal(size=(20, 3))
        aff = build_affinities_tsne(X, 5)
        cfg = EmbeddingConfig(perplexity=5, iterations=200, learning_rate=1e200)
        with pytest.raises(NonFiniteIterateError) as exc:
            with np.errstate(all="ignore"):
                optimize(aff, initial_embedding(X, 2), cfg)
        assert exc.value.iteration >= 1

    def test_kl_mostly_decreasing_without_exaggeration(self, rng):
        centers = rng.uniform(0, 30, size=(3, 10))
        X = np.vstack([c + rng.normal(size=(60, 10)) * s for c, s in zip(centers, (1, 2, 4))])
        cfg = EmbeddingConfig(perplexity=20, iterations=1000, exaggeration_iters=0)
        for method in ("tsne", "dtsne"):
            _, state = run_embedding(Dataset(X), EmbeddingConfig(**{**cfg.to_dict(), "method": method}))
            kl = np.array(state.kl_trace)
            assert np.all(kl >= -1e-12)
            assert np.mean(np.diff(kl) <= 0) >= 0.95


def _nn_median(Y, labels, lab):
    return oracles.median_nn_by_cluster(Y[labels == lab].tolist(), [0] * int(np.sum(labels == lab)))[0]


def test_relative_density_preserved_by_dtsne():
    rng = np.random.default_rng(5)
    X = np.vstack([rng.normal(size=(150, 10)), 40 + 4 * rng.normal(size=(150, 10))])
    labels = np.repeat([0, 1], 150)
    high = _nn_median(X, labels, 1) / _nn_median(X, labels, 0)
    e, _ = run_embedding(Dataset(X), EmbeddingConfig(method="dtsne", perplexity=30, iterations=750))
    low = _nn_median(e.coords, labels, 1) / _nn_median(e.coords, labels, 0)
    assert high / 2 <= low <= high * 2
