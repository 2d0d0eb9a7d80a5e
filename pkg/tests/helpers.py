import numpy as np

from dtsne.embedder import compute_q, kl_divergence


def random_joint(rng, n):
    P = rng.random((n, n))
    P = P + P.T
    np.fill_diagonal(P, 0.0)
    return P / P.sum()


def random_gammas(rng, n):
    g = rng.uniform(0.05, 1.0, size=(n, n))
    return 0.5 * (g + g.T)


def fd_gradient(P, Y, gammas, h=1e-5):
    """Central finite differences of the KL objective, one coordinate at a time."""
    G = np.zeros_like(Y)
    for i in range(Y.shape[0]):
        for c in range(Y.shape[1]):
            Yp, Ym = Y.copy(), Y.copy()
            Yp[i, c] += h
            Ym[i, c] -= h
            fp = kl_divergence(P, compute_q(Yp, gammas)[0])
            fm = kl_divergence(P, compute_q(Ym, gammas)[0])
            G[i, c] = (fp - fm) / (2 * h)
    return G


def max_rel_error(analytic, numeric, floor=1e-7):
    return float(np.max(np.abs(analytic - numeric) / np.maximum(np.abs(numeric), floor)))
