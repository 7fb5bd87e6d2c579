"""Independent reference implementations used to pin expected values.

Everything here is deliberately written the slow, literal way (index sums,
explicit loops, a textbook primal-dual solver) so it shares no code path
with the package.
"""
import numpy as np


def direct_dft2(g):
    """O(n^2 m^2) double-sum forward transform."""
    g = np.asarray(g, dtype=np.float64)
    n, m = g.shape
    out = np.zeros((n, m), dtype=np.complex128)
    for r in range(n):
        for s in range(m):
            acc = 0.0j
            for k in range(n):
                for l in range(m):
                    acc += g[k, l] * np.exp(-2j * np.pi * (k * r / n + l * s / m))
            out[r, s] = acc
    return out


def direct_idft2(spec):
    """O(n^2 m^2) double-sum inverse transform with the 1/(n m) factor."""
    spec = np.asarray(spec, dtype=np.complex128)
    n, m = spec.shape
    out = np.zeros((n, m), dtype=np.complex128)
    for k in range(n):
        for l in range(m):
            acc = 0.0j
            for r in range(n):
                for s in range(m):
                    acc += spec[r, s] * np.exp(2j * np.pi * (k * r / n + l * s / m))
            out[k, l] = acc / (n * m)
    return out


def direct_index_convolve(kernel, g):
    """out[r, s] = sum_{k,l} kernel[k-r, l-s] g[k, l], periodic."""
    kernel = np.asarray(kernel, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    n, m = g.shape
    out = np.zeros((n, m))
    for r in range(n):
        for s in range(m):
            acc = 0.0
            for k in range(n):
                for l in range(m):
                    acc += kernel[(k - r) % n, (l - s) % m] * g[k, l]
            out[r, s] = acc
    return out


def grad_forward(u):
    """Periodic forward differences, rows member then columns member."""
    return np.stack([np.roll(u, -1, axis=0) - u, np.roll(u, -1, axis=1) - u])


def grad_adjoint(p):
    """Adjoint of grad_forward."""
    return (np.roll(p[0], 1, axis=0) - p[0]) + (np.roll(p[1], 1, axis=1) - p[1])


def tv_energy(u, f, mu, kappa):
    g = grad_forward(u)
    if kappa == 1:
        tv = np.abs(g).sum()
    else:
        tv = np.sqrt((g * g).sum(axis=0)).sum()
    return tv + 0.5 * mu * ((u - f) ** 2).sum()


def chambolle_pock_tv(f, mu, kappa=2, iters=20000):
    """Primal-dual reference minimizer of tv + (mu/2)||u - f||^2.

    Standard first-order scheme with the gradient operator norm bound
    sqrt(8); no shared machinery with the sweep solver.
    """
    f = np.asarray(f, dtype=np.float64)
    L = np.sqrt(8.0)
    tau = 1.0 / L
    sig = 1.0 / L
    u = f.copy()
    u_bar = u.copy()
    p = np.zeros((2,) + f.shape)
    for _ in range(iters):
        p = p + sig * grad_forward(u_bar)
        if kappa == 1:
            p = np.clip(p, -1.0, 1.0)
        else:
            norms = np.maximum(np.sqrt((p * p).sum(axis=0)), 1.0)
            p = p / norms[None, :, :]
        u_old = u
        u = (u - tau * grad_adjoint(p) + tau * mu * f) / (1.0 + tau * mu)
        u_bar = 2.0 * u - u_old
    return u


def dense_operator_matrix(apply_fn, n, m):
    """Dense (n*m, n*m) matrix of a linear grid operator, column by column."""
    mat = np.zeros((n * m, n * m))
    for j in range(n * m):
        e = np.zeros(n * m)
        e[j] = 1.0
        mat[:, j] = apply_fn(e.reshape(n, m)).reshape(-1)
    return mat


def brute_force_prox_scalar(x, t, lo=None, hi=None, step=1e-5):
    """Grid minimizer of t|w| + (w-x)^2/2 over a 1-D grid."""
    if lo is None:
        lo = min(x - 0.5, -0.5)
    if hi is None:
        hi = max(x + 0.5, 0.5)
    w = np.arange(lo, hi + step, step)
    obj = t * np.abs(w) + 0.5 * (w - x) ** 2
    return w[np.argmin(obj)]


def brute_force_prox_vector(x, t, step=1e-5):
    """Grid minimizer of t||w|| + ||w-x||^2/2 along the ray through x."""
    x = np.asarray(x, dtype=np.float64)
    r = np.linalg.norm(x)
    if r == 0.0:
        return np.zeros_like(x)
    alphas = np.arange(0.0, r + step, step)
    obj = t * alphas + 0.5 * (alphas - r) ** 2
    best = alphas[np.argmin(obj)]
    return best * x / r
