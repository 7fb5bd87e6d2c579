"""Closed-form filter triples and the diagonal-factorization checkers.

The constructors return ready-to-solve :class:`~fixdecomp.solver.InputFilterTriple`
objects whose analysis bank is the forward-difference gradient pair (possibly
reweighted per spectral direction) and whose synthesis bank and low-pass are
the matching explicit-minimizer filters.

The checkers recover, or refute, the diagonal family linking a synthesis
bank to its analysis bank, and summarize the composed spectrum
``sigma = sum_p conj(Btilde_p) B_p`` in a :class:`ConditionReport`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    InvalidMaskError,
    InvalidParameterError,
    NotStronglyFactoringError,
    NotWeaklyFactoringError,
    OverflowGuardError,
)
from .solver import InputFilterTriple
from .validation import check_bank, check_kappa, check_positive, check_symbol

# Absolute tolerance (symbols here are unit scale) for factor recovery and
# spectrum flags; the strict margin guards the contraction bound.
FACTOR_TOL = 1e-9
STRICT_MARGIN = 1e-9
# exp() argument magnitude beyond which double precision overflows.
_EXP_GUARD = 700.0


def _check_shape(n, m):
    if int(n) < 2 or int(m) < 2:
        raise InvalidParameterError(f"grid sides must be >= 2, got ({n}, {m})")
    return int(n), int(m)


def omega_grid(n, m):
    """Centered angular frequencies for each bin, as two (n, m) arrays.

    ``w[k] = 2 pi k / n`` for ``k < n/2`` and ``2 pi k / n - 2 pi``
    otherwise, so every value lies in ``[-pi, pi)`` (even side) or
    ``(-pi, pi)`` (odd side).
    """
    n, m = _check_shape(n, m)
    k = np.arange(n, dtype=np.float64)
    l = np.arange(m, dtype=np.float64)
    wk = np.where(2 * k < n, 2 * np.pi * k / n, 2 * np.pi * k / n - 2 * np.pi)
    wl = np.where(2 * l < m, 2 * np.pi * l / m, 2 * np.pi * l / m - 2 * np.pi)
    return np.broadcast_to(wk[:, None], (n, m)).copy(), np.broadcast_to(
        wl[None, :], (n, m)
    ).copy()


def gradient_bank(n, m):
    """Forward-difference symbols: rows member then columns member.

    Member 0 realizes ``u[k+1, l] - u[k, l]`` and member 1 the analogous
    column difference, both periodic.
    """
    n, m = _check_shape(n, m)
    k = np.arange(n)
    l = np.arange(m)
    d_rows = (np.exp(2j * np.pi * k / n) - 1.0)[:, None] * np.ones((1, m))
    d_cols = np.ones((n, 1)) * (np.exp(2j * np.pi * l / m) - 1.0)[None, :]
    return np.stack([d_rows, d_cols]).astype(np.complex128)


def _gradient_energy(bank):
    """sum_p |D_p|^2, real."""
    return (np.abs(bank) ** 2).sum(axis=0)


def build_tv_l2(n, m, mu, beta, kappa=2):
    """Gradient-l1 plus quadratic data-fit triple."""
    n, m = _check_shape(n, m)
    mu = check_positive(mu, "mu")
    beta = check_positive(beta, "beta")
    kappa = check_kappa(kappa)
    grad = gradient_bank(n, m)
    denom = mu + beta * _gradient_energy(grad)
    low_pass = (mu / denom).astype(np.complex128)
    synthesis = (beta / denom)[None, :, :] * grad
    return InputFilterTriple(low_pass, grad, synthesis, beta, kappa)


def build_model2(n, m, mu, beta, y1, y2, kappa=2):
    """Gradient bank reweighted by a separable Gaussian spectral profile.

    The analysis members are the gradient symbols multiplied by
    ``v = exp(-y1 w_k^2 - y2 w_l^2)``; the synthesis members divide by the
    same profile so the composed spectrum matches the plain gradient model.
    """
    n, m = _check_shape(n, m)
    mu = check_positive(mu, "mu")
    beta = check_positive(beta, "beta")
    kappa = check_kappa(kappa)
    y1, y2 = float(y1), float(y2)
    wk, wl = omega_grid(n, m)
    exponent = -y1 * wk**2 - y2 * wl**2
    peak = float(np.abs(exponent).max())
    if peak > _EXP_GUARD:
        raise OverflowGuardError(
            f"spectral profile exponent reaches {peak:.1f} (> {_EXP_GUARD:.0f}); "
            "weights would overflow"
        )
    profile = np.exp(exponent)
    grad = gradient_bank(n, m)
    denom = mu + beta * _gradient_energy(grad)
    low_pass = (mu / denom).astype(np.complex128)
    analysis = grad * profile[None, :, :]
    synthesis = (beta / (denom * profile))[None, :, :] * grad
    return InputFilterTriple(low_pass, analysis, synthesis, beta, kappa)


def build_model3(n, m, mu, beta, r1, r2, kappa=2):
    """Gradient bank with per-member scalar reweighting ``1/r_p``.

    Weakly but (for ``r1 != r2``) not strongly factoring: the recovered
    per-member factors differ by ``(r1/r2)^2``.
    """
    n, m = _check_shape(n, m)
    mu = check_positive(mu, "mu")
    beta = check_positive(beta, "beta")
    kappa = check_kappa(kappa)
    r1 = check_positive(r1, "r1")
    r2 = check_positive(r2, "r2")
    grad = gradient_bank(n, m)
    denom = mu + beta * _gradient_energy(grad)
    low_pass = (mu / denom).astype(np.complex128)
    weights = np.array([r1, r2])
    analysis = grad / weights[:, None, None]
    synthesis = (beta / denom)[None, :, :] * grad * weights[:, None, None]
    return InputFilterTriple(low_pass, analysis, synthesis, beta, kappa)


def build_tv_hilbert(n, m, mu, beta, mask, kappa=2):
    """Gradient triple with the data fit measured through a spectral mask.

    ``mask`` must be a strictly positive real symbol; it enters the
    explicit-minimizer filters only through its squared modulus.
    """
    n, m = _check_shape(n, m)
    mu = check_positive(mu, "mu")
    beta = check_positive(beta, "beta")
    kappa = check_kappa(kappa)
    mask = check_symbol(mask, "mask")
    if mask.shape != (n, m):
        raise InvalidMaskError(f"mask shape {mask.shape} does not match ({n}, {m})")
    if float(np.abs(mask.imag).max()) > FACTOR_TOL * max(1.0, float(np.abs(mask).max())):
        raise InvalidMaskError("mask symbol must be real")
    if float(mask.real.min()) <= 0.0:
        raise InvalidMaskError("mask symbol must be strictly positive")
    grad = gradient_bank(n, m)
    weight = mu * mask.real**2
    denom = weight + beta * _gradient_energy(grad)
    low_pass = (weight / denom).astype(np.complex128)
    synthesis = (beta / denom)[None, :, :] * grad
    return InputFilterTriple(low_pass, grad, synthesis, beta, kappa)


def weak_factor(analysis, synthesis, tol=FACTOR_TOL):
    """Recover the diagonal nonnegative family linking the two banks.

    Bin-wise, wherever ``|analysis| > tol`` the ratio
    ``synthesis / analysis`` must be real (imaginary part within
    ``tol * (1 + |synthesis|)``) and nonnegative (real part ``>= -tol``);
    wherever the analysis member vanishes the synthesis member must too.
    Returns the real factors clamped to ``[0, inf)`` with zeros on the
    vanishing bins; raises :class:`NotWeaklyFactoringError` otherwise.
    """
    analysis = check_bank(analysis, "analysis")
    synthesis = check_bank(synthesis, "synthesis")
    if analysis.shape != synthesis.shape:
        raise NotWeaklyFactoringError(
            f"banks differ in shape: {analysis.shape} vs {synthesis.shape}"
        )
    factors = np.zeros(analysis.shape, dtype=np.float64)
    for p in range(analysis.shape[0]):
        a, s = analysis[p], synthesis[p]
        live = np.abs(a) > tol
        dead_bad = ~live & (np.abs(s) > tol)
        if np.any(dead_bad):
            k, l = np.argwhere(dead_bad)[0]
            raise NotWeaklyFactoringError(
                f"member {p}: synthesis nonzero at bin ({k}, {l}) where analysis vanishes",
                member=p,
                bin_index=(int(k), int(l)),
            )
        ratio = np.zeros_like(a)
        np.divide(s, a, out=ratio, where=live)
        imag_bad = live & (np.abs(ratio.imag) > tol * (1.0 + np.abs(s)))
        if np.any(imag_bad):
            k, l = np.argwhere(imag_bad)[0]
            raise NotWeaklyFactoringError(
                f"member {p}: factor not real at bin ({k}, {l}); "
                f"imag {ratio.imag[k, l]:.3e}",
                member=p,
                bin_index=(int(k), int(l)),
            )
        neg_bad = live & (ratio.real < -tol)
        if np.any(neg_bad):
            k, l = np.argwhere(neg_bad)[0]
            raise NotWeaklyFactoringError(
                f"member {p}: factor negative at bin ({k}, {l}); "
                f"value {ratio.real[k, l]:.3e}",
                member=p,
                bin_index=(int(k), int(l)),
            )
        factors[p][live] = np.maximum(ratio.real[live], 0.0)
    return factors


def strong_factor(analysis, synthesis, tol=FACTOR_TOL):
    """Collapse the per-member factors to a single symbol, or refute it.

    On each bin the factors of all members whose analysis symbol exceeds
    ``tol`` must coincide within ``tol`` (relative); the returned symbol is
    zero on bins where every member vanishes.
    """
    factors = weak_factor(analysis, synthesis, tol=tol)
    live = np.abs(check_bank(analysis)) > tol
    out = np.zeros(factors.shape[1:], dtype=np.float64)
    defined = live.any(axis=0)
    # first live member per bin supplies the reference value
    ref_idx = np.argmax(live, axis=0)
    kk, ll = np.nonzero(defined)
    out[kk, ll] = factors[ref_idx[kk, ll], kk, ll]
    mismatch = live & (np.abs(factors - out[None, :, :]) > tol * (1.0 + np.abs(out)))
    if np.any(mismatch):
        p, k, l = np.argwhere(mismatch)[0]
        raise NotStronglyFactoringError(
            f"per-member factors disagree at bin ({k}, {l}): member {p} gives "
            f"{factors[p, k, l]:.6e} vs {out[k, l]:.6e}",
            bin_index=(int(k), int(l)),
        )
    return out


@dataclass
class ConditionReport:
    """Summary of the composed spectrum ``sum_p conj(Btilde_p) B_p``.

    ``nepc_ok`` certifies real nonnegative bins not exceeding one (within
    tolerance); ``cpc_ok`` additionally demands the strict margin below one
    needed for the affine-set inverse.
    """

    sigma: np.ndarray
    max_imag: float
    min_val: float
    max_val: float
    nepc_ok: bool
    cpc_ok: bool


def sigma_spectrum(analysis, synthesis, tol=FACTOR_TOL, tol_strict=STRICT_MARGIN):
    """Compose the banks bin-wise and grade the resulting spectrum.

    Always returns a report; never raises on a failed condition.
    """
    analysis = check_bank(analysis, "analysis")
    synthesis = check_bank(synthesis, "synthesis")
    if analysis.shape != synthesis.shape:
        raise InvalidParameterError(
            f"banks differ in shape: {analysis.shape} vs {synthesis.shape}"
        )
    composed = np.sum(np.conj(synthesis) * analysis, axis=0)
    max_imag = float(np.abs(composed.imag).max())
    sigma = composed.real.copy()
    min_val = float(sigma.min())
    max_val = float(sigma.max())
    clean = max_imag <= tol and min_val >= -tol
    nepc_ok = clean and max_val <= 1.0 + tol
    cpc_ok = clean and max_val <= 1.0 - tol_strict
    return ConditionReport(
        sigma=sigma,
        max_imag=max_imag,
        min_val=min_val,
        max_val=max_val,
        nepc_ok=nepc_ok,
        cpc_ok=cpc_ok,
    )
