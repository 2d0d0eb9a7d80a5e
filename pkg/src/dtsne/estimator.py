"""scikit-learn compatible wrappers around the embedding pipeline."""

from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .affinity import build_affinities
from .core import Dataset, EmbeddingConfig, Method, validate_dataset
from .embedder import initial_embedding, optimize, reduce_input
from .metrics import evaluate


class DensityTSNE(TransformerMixin, BaseEstimator):
    """t-SNE (``method="tsne"``) or density-preserving dtSNE (``method="dtsne"``).

    Parameters
    ----------
    method : {"dtsne", "tsne"}
    n_components : int, 2 or 3
    perplexity : float
        Effective neighbor count; must be below the number of samples.
    n_iter : int
    learning_rate : float or "auto"
        ``"auto"`` uses ``n_samples / 12``.
    momentum_early, momentum_late : float
        Momentum before and after ``momentum_switch_iter``.
    momentum_switch_iter : int
    early_exaggeration : float
    exaggeration_iter : int
    pca_components : int
        Inputs with more columns are first reduced to this many principal components.
    random_state : int
        Recorded for provenance; the optimization itself is deterministic.

    Attributes
    ----------
    embedding_ : ndarray of shape (n_samples, n_components)
    affinities_ : AffinityModel
    kl_divergence_ : float
        Objective after the last iteration.
    kl_trace_ : list of (iteration, kl) tuples
    n_iter_ : int
    """

    def __init__(
        self,
        method="dtsne",
        n_components=2,
        perplexity=100.0,
        n_iter=750,
        learning_rate="auto",
        momentum_early=0.5,
        momentum_late=0.8,
        momentum_switch_iter=20,
        early_exaggeration=12.0,
        exaggeration_iter=100,
        pca_components=50,
        random_state=0,
    ):
        self.method = method
        self.n_components = n_components
        self.perplexity = perplexity
        self.n_iter = n_iter
        self.learning_rate = learning_rate
        self.momentum_early = momentum_early
        self.momentum_late = momentum_late
        self.momentum_switch_iter = momentum_switch_iter
        self.early_exaggeration = early_exaggeration
        self.exaggeration_iter = exaggeration_iter
        self.pca_components = pca_components
        self.random_state = random_state

    def _config(self):
        return EmbeddingConfig(
            method=Method(self.method),
            perplexity=float(self.perplexity),
            iterations=int(self.n_iter),
            learning_rate=None if self.learning_rate == "auto" else float(self.learning_rate),
            momentum_early=self.momentum_early,
            momentum_late=self.momentum_late,
            momentum_switch_iter=int(self.momentum_switch_iter),
            exaggeration_factor=float(self.early_exaggeration),
            exaggeration_iters=int(self.exaggeration_iter),
            pca_input_dims=int(self.pca_components),
            seed=int(self.random_state or 0),
            out_dim=int(self.n_components),
        )

    def fit(self, X, y=None):
        X = check_array(X, dtype="float64", ensure_min_samples=2)
        config = self._config()
        dataset = validate_dataset(Dataset(X))
        config.check_against(dataset)
        Xr = reduce_input(X, config)
        self.affinities_ = build_affinities(Xr, config.perplexity, config.method)
        state = optimize(self.affinities_, initial_embedding(Xr, config.out_dim), config)
        self.embedding_ = state.Y
        self.kl_trace_ = list(zip(state.kl_iters, state.kl_trace))
        self.kl_divergence_ = state.kl_trace[-1]
        self.n_iter_ = state.iter
        self.n_features_in_ = X.shape[1]
        return self

    def fit_transform(self, X, y=None):
        return self.fit(X, y).embedding_

    def score(self, X, y=None):
        """Relative-density correlation ``rho_r`` of the fitted embedding against ``X``."""
        check_is_fitted(self, "embedding_")
        X = check_array(X, dtype="float64")
        return evaluate(X, self.embedding_, spearman=False).rho_r


class TSNE(DensityTSNE):
    """Plain t-SNE with the same optimizer settings as :class:`DensityTSNE`."""

    def __init__(
        self,
        n_components=2,
        perplexity=100.0,
        n_iter=750,
        learning_rate="auto",
        momentum_early=0.5,
        momentum_late=0.8,
        momentum_switch_iter=20,
        early_exaggeration=12.0,
        exaggeration_iter=100,
        pca_components=50,
        random_state=0,
    ):
        super().__init__(
            method="tsne",
            n_components=n_components,
            perplexity=perplexity,
            n_iter=n_iter,
            learning_rate=learning_rate,
            momentum_early=momentum_early,
            momentum_late=momentum_late,
            momentum_switch_iter=momentum_switch_iter,
            early_exaggeration=early_exaggeration,
            exaggeration_iter=exaggeration_iter,
            pca_components=pca_components,
            random_state=random_state,
        )
