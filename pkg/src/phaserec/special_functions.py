"""Order-zero Bessel and Hankel functions for real, non-negative arguments.

Two-regime evaluation: the ascending power series (with the logarithmic
term for Y0) below ``SWITCHOVER`` and the Hankel asymptotic expansion
above it.  All functions accept scalars or arrays and return the same
shape.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError

__all__ = ["bessel_j0", "bessel_y0", "hankel1_0", "SWITCHOVER"]

EULER_GAMMA = 0.57721566490153286061

SWITCHOVER = 12.0
_SERIES_TERMS = 48
_ASYMPTOTIC_TERMS = 8

# Hankel expansion coefficients a_k(0) = prod_{j<=k} -(2j-1)^2 / (8j)
_A = [1.0]
for _k in range(1, 2 * _ASYMPTOTIC_TERMS + 1):
    _A.append(_A[-1] * (-((2 * _k - 1) ** 2)) / (8.0 * _k))
_P_COEF = np.array([(-1) ** m * _A[2 * m] for m in range(_ASYMPTOTIC_TERMS)])
_Q_COEF = np.array([(-1) ** m * _A[2 * m + 1] for m in range(_ASYMPTOTIC_TERMS)])


def _as_array(x, *, allow_zero: bool, name: str) -> tuple[np.ndarray, bool]:
    scalar = np.ndim(x) == 0
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name}: argument must be finite", "special_functions")
    bad = arr < 0 if allow_zero else arr <= 0
    if np.any(bad):
        bound = ">= 0" if allow_zero else "> 0"
        raise DomainError(f"{name}: argument must be {bound}", "special_functions")
    return np.atleast_1d(arr), scalar


def _series(x: np.ndarray, with_y: bool) -> tuple[np.ndarray, np.ndarray | None]:
    q = -0.25 * x * x
    term = np.ones_like(x)
    j0 = np.ones_like(x)
    s = np.zeros_like(x)
    harmonic = 0.0
    for k in range(1, _SERIES_TERMS):
        term = term * q / (k * k)
        j0 = j0 + term
        if with_y:
            harmonic += 1.0 / k
            s = s - harmonic * term
    if not with_y:
        return j0, None
    y0 = (2.0 / np.pi) * ((np.log(0.5 * x) + EULER_GAMMA) * j0 + s)
    return j0, y0


def _asymptotic(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    inv2 = 1.0 / (x * x)
    p = np.zeros_like(x)
    q = np.zeros_like(x)
    # Horner in 1/x^2
    for m in range(_ASYMPTOTIC_TERMS - 1, -1, -1):
        p = p * inv2 + _P_COEF[m]
        q = q * inv2 + _Q_COEF[m]
    q = q / x
    chi = x - 0.25 * np.pi
    amp = np.sqrt(2.0 / (np.pi * x))
    c, s = np.cos(chi), np.sin(chi)
    return amp * (p * c - q * s), amp * (p * s + q * c)


def _j0_y0(x: np.ndarray, with_y: bool) -> tuple[np.ndarray, np.ndarray | None]:
    j0 = np.empty_like(x)
    y0 = np.empty_like(x) if with_y else None
    small = x < SWITCHOVER
    if np.any(small):
        js, ys = _series(x[small], with_y)
        j0[small] = js
        if with_y:
            y0[small] = ys
    large = ~small
    if np.any(large):
        ja, ya = _asymptotic(x[large])
        j0[large] = ja
        if with_y:
            y0[large] = ya
    return j0, y0


def _restore(values: np.ndarray, scalar: bool, shape):
    if scalar:
        return values.reshape(-1)[0].item()
    return values.reshape(shape)


def bessel_j0(x):
    """Bessel function of the first kind of order zero, ``x >= 0``."""
    arr, scalar = _as_array(x, allow_zero=True, name="bessel_j0")
    j0, _ = _j0_y0(arr.ravel(), with_y=False)
    return _restore(j0, scalar, arr.shape)


def bessel_y0(x):
    """Bessel function of the second kind of order zero, ``x > 0``.

    Raises
    ------
    DomainError
        For ``x <= 0`` where Y0 has its logarithmic singularity.
    """
    arr, scalar = _as_array(x, allow_zero=False, name="bessel_y0")
    _, y0 = _j0_y0(arr.ravel(), with_y=True)
    return _restore(y0, scalar, arr.shape)


def hankel1_0(x):
    """Hankel function ``H0^(1)(x) = J0(x) + i Y0(x)`` for ``x > 0``."""
    arr, scalar = _as_array(x, allow_zero=False, name="hankel1_0")
    j0, y0 = _j0_y0(arr.ravel(), with_y=True)
    return _restore(j0 + 1j * y0, scalar, arr.shape)
