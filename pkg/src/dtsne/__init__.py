"""t-SNE and density-preserving dtSNE embeddings with quality metrics and synthetic benchmarks."""

from .affinity import build_affinities, build_affinities_dtsne, build_affinities_tsne, compute_gammas
from .core import (
    AffinityModel,
    Dataset,
    Embedding,
    EmbeddingConfig,
    Method,
    QualityReport,
    validate_dataset,
)
from .embedder import compute_q, kl_divergence, kl_gradient, run_embedding
from .estimator import TSNE, DensityTSNE
from .metrics import evaluate
from .synthgen import ClusterSpec, generate, preset

__all__ = [
    "AffinityModel",
    "ClusterSpec",
    "Dataset",
    "DensityTSNE",
    "Embedding",
    "EmbeddingConfig",
    "Method",
    "QualityReport",
    "TSNE",
    "build_affinities",
    "build_affinities_dtsne",
    "build_affinities_tsne",
    "compute_gammas",
    "compute_q",
    "evaluate",
    "generate",
    "kl_divergence",
    "kl_gradient",
    "preset",
    "run_embedding",
    "validate_dataset",
]

__version__ = "0.1.0"
