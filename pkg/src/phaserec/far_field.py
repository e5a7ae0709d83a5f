"""Scattering amplitude, far-field constant and the phaseless observables built from them."""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, GeometryError, ValidationError
from .forward import ScatteringSolution, evaluate_psi

__all__ = [
    "FarFieldEntry",
    "FarFieldConstant",
    "farfield_constant",
    "scattering_amplitude",
    "leading_field",
    "phaseless_a",
    "background_a0",
]

_ZERO_MODULUS = 1e-14
_SHELL_RTOL = 1e-12
_DIRECTION_TOL = 1e-9


def _principal_angle(z: complex) -> float:
    """Argument of ``z`` in ``(-pi, pi]``."""
    angle = cmath.phase(z)
    return np.pi if angle <= -np.pi else angle


def _check_shell(k: np.ndarray, l: np.ndarray, module: str) -> None:
    kk, ll = float(k @ k), float(l @ l)
    if abs(kk - ll) > _SHELL_RTOL * max(kk, ll):
        raise ValidationError("k and l must lie on the same energy shell", module)


@dataclass(frozen=True)
class FarFieldEntry:
    """Amplitude ``f(k, l)`` with its polar form ``modulus * exp(i phase_alpha)``."""

    k: np.ndarray
    l: np.ndarray
    f: complex
    modulus: float
    phase_alpha: float

    @classmethod
    def from_value(cls, k, l, f: complex) -> "FarFieldEntry":
        k = np.array(k, dtype=float)
        l = np.array(l, dtype=float)
        _check_shell(k, l, "far_field")
        f = complex(f)
        modulus = abs(f)
        alpha = 0.0 if modulus < _ZERO_MODULUS else _principal_angle(f)
        return cls(k, l, f, modulus, alpha)


@dataclass(frozen=True)
class FarFieldConstant:
    dimension: int
    k_norm: float
    c: complex
    modulus: float
    phase_beta: float


def farfield_constant(dimension: int, k_norm: float) -> FarFieldConstant:
    """``c(d, |k|) = -pi i (-2 pi i)^((d-1)/2) |k|^((d-3)/2)``, principal branch."""
    if dimension not in (2, 3):
        raise ValidationError(f"dimension must be 2 or 3, got {dimension}", "far_field")
    if not k_norm > 0:
        raise DomainError("k_norm must be > 0", "far_field")
    base = -2j * np.pi
    if dimension % 2:
        power = base ** ((dimension - 1) // 2)
    else:
        power = cmath.sqrt(base) ** (dimension - 1)
    c = -1j * np.pi * power * k_norm ** ((dimension - 3) / 2)
    if dimension % 2:
        # exact real/imaginary parts: drop signed zeros left by complex multiplication
        c = complex(c.real + 0.0, c.imag + 0.0)
    return FarFieldConstant(dimension, float(k_norm), c, abs(c), _principal_angle(c))


def scattering_amplitude(solution: ScatteringSolution, l) -> FarFieldEntry:
    """``f(k, l) = (2 pi)^-d sum_j exp(-i l.x_j) v_j psi_j cell_volume``."""
    k = solution.context.k
    l = np.asarray(l, dtype=float)
    if l.shape != k.shape:
        raise ValidationError("l must be a d-vector", "far_field")
    _check_shell(k, l, "far_field")
    grid = solution.grid
    d = grid.dimension
    f = np.sum(np.exp(-1j * grid.cell_centers @ l) * grid.v_values * solution.psi_values)
    f *= grid.cell_volume / (2.0 * np.pi) ** d
    return FarFieldEntry.from_value(k, l, complex(f))


def _check_direction(entry: FarFieldEntry, x: np.ndarray) -> None:
    k_norm = np.linalg.norm(entry.k)
    expected = k_norm * x / np.linalg.norm(x)
    if np.linalg.norm(entry.l - expected) > _DIRECTION_TOL * k_norm:
        raise ValidationError(
            "amplitude direction l does not match the observation direction x/|x|", "far_field"
        )


def leading_field(entry: FarFieldEntry, x, k) -> complex:
    """Plane wave plus the leading outgoing spherical wave at ``x``."""
    x = np.asarray(x, dtype=float)
    k = np.asarray(k, dtype=float)
    rad = float(np.linalg.norm(x))
    if rad == 0:
        raise DomainError("leading_field is undefined at x = 0", "far_field")
    _check_direction(entry, x)
    d = len(x)
    k_norm = float(np.linalg.norm(k))
    c = farfield_constant(d, k_norm).c
    return complex(
        np.exp(1j * (k @ x)) + c * np.exp(1j * k_norm * rad) / rad ** ((d - 1) / 2) * entry.f
    )


def phaseless_a(solution: ScatteringSolution, x, k=None) -> np.ndarray | float:
    """``|x|^((d-1)/2) (|psi+(x, k)|^2 - 1)`` outside the support ball.

    ``x`` is one d-vector or an ``(M, d)`` array; ``k`` defaults to the
    solution's incident vector and must match it when given.
    """
    if k is not None and not np.allclose(k, solution.context.k, rtol=0, atol=1e-12):
        raise ValidationError("k differs from the solution's incident wave vector", "far_field")
    pts = np.atleast_2d(np.asarray(x, dtype=float))
    rad = np.linalg.norm(pts, axis=1)
    if np.any(rad <= solution.grid.potential.support_radius):
        raise GeometryError(
            "phaseless samples must lie outside the support ball of the scatterer", "far_field"
        )
    psi = evaluate_psi(solution, pts)
    d = solution.dimension
    intensity = psi.real**2 + psi.imag**2
    a = rad ** ((d - 1) / 2) * (intensity - 1.0)
    return float(a[0]) if np.ndim(x) == 1 else a


def background_a0(entry: FarFieldEntry, x, k) -> float:
    """``2 Re(c exp(i(|k||x| - k.x)) f(k, |k| x/|x|))``."""
    x = np.asarray(x, dtype=float)
    k = np.asarray(k, dtype=float)
    rad = float(np.linalg.norm(x))
    if rad == 0:
        raise DomainError("background_a0 is undefined at x = 0", "far_field")
    _check_direction(entry, x)
    k_norm = float(np.linalg.norm(k))
    c = farfield_constant(len(x), k_norm).c
    return float(2.0 * (c * np.exp(1j * (k_norm * rad - k @ x)) * entry.f).real)
