"""Periodic grids, their spectra, and circular convolution operators.

Conventions used throughout the package:

* Grids are real ``(n, m)`` arrays indexed periodically; ``a[k, l]`` means
  ``a[k mod n, l mod m]``.
* The forward transform :func:`dft2` is unnormalized,
  ``g_hat[r, s] = sum_{k,l} g[k, l] exp(-2 pi i (k r / n + l s / m))``,
  and :func:`idft2` carries the full ``1/(n m)`` factor, so
  ``idft2(dft2(g)) == g``.
* Filters live in the spectral domain as complex ``(n, m)`` symbols.  A
  symbol acts on a grid by pointwise spectral multiplication
  (:func:`convolve`); the adjoint action multiplies by the conjugate
  symbol (:func:`convolve_adjoint`).
* A *bank* stacks ``P`` symbols as ``(P, n, m)``; a *family* stacks ``P``
  real grids the same way.

Operators built from real spatial stencils use :func:`kernel_symbol`,
which realizes the correlation-style periodic sum

    ``out[r, s] = sum_{k,l} kernel[k - r, l - s] g[k, l]``.
"""
from __future__ import annotations

import numpy as np

from .errors import RealCastError
from .validation import (
    check_bank,
    check_bank_family,
    check_family,
    check_grid,
    check_same_shape,
    check_symbol,
)

# Relative ceiling on the imaginary residue a Hermitian spectrum may leave.
REAL_CAST_RTOL = 1e-9


def dft2(g):
    """Forward 2-D transform of a real grid (unnormalized sum convention)."""
    g = check_grid(g)
    return np.fft.fft2(g)


def idft2(spectrum):
    """Inverse 2-D transform; carries the 1/(n m) factor. Returns complex."""
    spectrum = check_symbol(spectrum)
    return np.fft.ifft2(spectrum)


def real_cast(values, rtol=REAL_CAST_RTOL):
    """Drop a negligible imaginary part, or raise :class:`RealCastError`.

    The imaginary part is negligible when its Frobenius norm is at most
    ``rtol`` times the norm of the full array (with an absolute floor for
    the all-zero case).
    """
    values = np.asarray(values)
    if not np.iscomplexobj(values):
        return np.asarray(values, dtype=np.float64)
    scale = np.linalg.norm(values)
    residue = np.linalg.norm(values.imag)
    if residue > rtol * max(scale, np.finfo(np.float64).tiny):
        raise RealCastError(
            f"imaginary residue {residue:.3e} exceeds {rtol:.1e} of scale {scale:.3e}; "
            "the acting symbol is not Hermitian for this input"
        )
    return np.ascontiguousarray(values.real)


def kernel_symbol(kernel):
    """Spectral symbol of a real periodic stencil.

    ``convolve(kernel_symbol(A), g)`` evaluates the correlation-style sum
    ``out[r, s] = sum_{k,l} A[k - r, l - s] g[k, l]`` with periodic
    indexing.  For a real stencil this is the conjugated spectrum, i.e.
    the spectrum evaluated at negated frequencies.
    """
    kernel = check_grid(kernel, name="kernel")
    return np.conj(np.fft.fft2(kernel))


def convolve(symbol, g):
    """Apply a spectral symbol to a real grid; result cast back to real."""
    symbol = check_symbol(symbol)
    g = check_grid(g)
    check_same_shape(symbol, g, "symbol", "grid")
    return real_cast(np.fft.ifft2(symbol * np.fft.fft2(g)))


def convolve_adjoint(symbol, g):
    """Apply the adjoint of a symbol (its conjugate) to a real grid."""
    symbol = check_symbol(symbol)
    g = check_grid(g)
    check_same_shape(symbol, g, "symbol", "grid")
    return real_cast(np.fft.ifft2(np.conj(symbol) * np.fft.fft2(g)))


def family_convolve(bank, g):
    """Apply each symbol of a bank to one grid; returns a (P, n, m) family."""
    bank = check_bank(bank)
    g = check_grid(g)
    check_same_shape(bank[0], g, "bank member", "grid")
    spec = np.fft.fft2(g)
    return real_cast(np.fft.ifft2(bank * spec[None, :, :], axes=(-2, -1)))


def family_adjoint(bank, family):
    """Sum of member-wise adjoint actions; maps a family back to one grid."""
    bank = check_bank(bank)
    family = check_family(family)
    check_bank_family(bank, family)
    spec = np.fft.fft2(family, axes=(-2, -1))
    acc = np.sum(np.conj(bank) * spec, axis=0)
    return real_cast(np.fft.ifft2(acc))


def diag_family_convolve(bank, family):
    """Member-wise action of a bank on a family (diagonal operator)."""
    bank = check_bank(bank)
    family = check_family(family)
    check_bank_family(bank, family)
    spec = np.fft.fft2(family, axes=(-2, -1))
    return real_cast(np.fft.ifft2(bank * spec, axes=(-2, -1)))


def inner(a, b):
    """Euclidean inner product of two grids or families of equal shape."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    check_same_shape(a, b)
    return float(np.vdot(a, b).real)


def frobenius(a):
    """Euclidean norm of a grid or family."""
    return float(np.linalg.norm(np.asarray(a, dtype=np.float64)))


def l1_aniso(family):
    """Entry-wise l1 norm of a family."""
    family = check_family(family)
    return float(np.abs(family).sum())


def l1_iso(family):
    """Sum over sites of the Euclidean norm of the member vector."""
    family = check_family(family)
    return float(np.sqrt((family * family).sum(axis=0)).sum())


def periodic_get(a, k, l):
    """Entry of a grid under periodic index wrapping."""
    a = np.asarray(a)
    return a[k % a.shape[0], l % a.shape[1]]
