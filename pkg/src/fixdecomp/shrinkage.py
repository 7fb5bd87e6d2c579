"""Shrinkage maps: exact minimizers of the l1-plus-quadratic site problems.

Both maps act on a real family ``(P, n, m)`` in the spatial domain and
return a family of the same shape.
"""
from __future__ import annotations

import numpy as np

from .errors import InvalidParameterError, NonPositiveThresholdError
from .validation import check_family


def _check_threshold(t):
    t = float(t)
    if not np.isfinite(t) or t <= 0:
        raise NonPositiveThresholdError(f"threshold must be > 0, got {t!r}")
    return t


def shrink_aniso(family, t):
    """Entry-wise soft threshold: sign(x) * max(|x| - t, 0).

    Unique minimizer of ``t*|w| + (w - x)^2 / 2`` per entry.
    """
    family = check_family(family)
    t = _check_threshold(t)
    return np.sign(family) * np.maximum(np.abs(family) - t, 0.0)


def shrink_iso(family, t):
    """Per-site vector shrinkage of the member vector.

    At each site the member vector ``x`` is scaled by
    ``max(||x|| - t, 0) / ||x||``; a zero vector stays zero.  Unique
    minimizer of ``t*||w|| + ||w - x||^2 / 2`` per site.
    """
    family = check_family(family)
    t = _check_threshold(t)
    norms = np.sqrt((family * family).sum(axis=0))
    scale = np.zeros_like(norms)
    np.divide(np.maximum(norms - t, 0.0), norms, out=scale, where=norms > 0)
    return family * scale[None, :, :]


def shrink(family, t, kappa):
    """Dispatch on the coupling mode: 1 entry-wise, 2 per-site vector."""
    if kappa == 1:
        return shrink_aniso(family, t)
    if kappa == 2:
        return shrink_iso(family, t)
    raise InvalidParameterError(f"kappa must be 1 or 2, got {kappa!r}")
