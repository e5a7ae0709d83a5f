"""Point-source scattering: the outgoing resolvent kernel R+(x, x', E).

``R+`` solves the same Nystrom system as the plane-wave problem with the
incident field replaced by ``-G0+(|x - x'|, sqrt(E))``.  Far from the
scatterer, ``|R+|^2`` along the ray ``-s k/|k|`` determines ``|psi+(x', k)|^2``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, GeometryError, InsufficientDataError, ValidationError
from .far_field import farfield_constant
from .forward import IntegralOperator, green_free, volume_potential
from .medium import GridDiscretization

__all__ = [
    "ResolventField",
    "ResolventReduction",
    "solve_resolvent_field",
    "evaluate_resolvent",
    "reciprocity_defect",
    "sample_resolvent_sq",
    "psi_sq_from_resolvent",
    "resolvent_far_pattern",
]


@dataclass(frozen=True, eq=False)
class ResolventField:
    source: np.ndarray
    E: float
    grid: GridDiscretization
    R_values: np.ndarray
    residual: float
    condition: float

    @property
    def k_norm(self) -> float:
        return float(np.sqrt(self.E))


def solve_resolvent_field(
    grid: GridDiscretization, source, E: float, operator: IntegralOperator | None = None
) -> ResolventField:
    """Solve for ``R+(., source, E)`` on the active cells.

    A source that coincides with a cell centre is moved by half a cell
    diagonal, with a warning.
    """
    if not E > 0:
        raise ValidationError("E must be > 0", "resolvent")
    src = np.array(source, dtype=float)
    if src.shape != (grid.dimension,):
        raise ValidationError("source must be a d-vector", "resolvent")
    k_norm = float(np.sqrt(E))
    dist = np.linalg.norm(grid.cell_centers - src, axis=1)
    if grid.size and dist.min() < 1e-12 * grid.spacing:
        src = src + 0.5 * grid.spacing
        warnings.warn(
            "resolvent source coincides with a cell centre; shifted by half a cell diagonal",
            RuntimeWarning,
            stacklevel=2,
        )
        dist = np.linalg.norm(grid.cell_centers - src, axis=1)
    if operator is None:
        operator = IntegralOperator(grid, k_norm)
    elif operator.grid is not grid or not np.isclose(operator.k_norm, k_norm, rtol=1e-14):
        raise ValidationError("operator was assembled for another grid or energy", "resolvent")
    rhs = -green_free(grid.dimension, dist, k_norm) if grid.size else np.zeros(0, complex)
    values, residual = operator.solve(rhs, module="resolvent")
    values.setflags(write=False)
    src.setflags(write=False)
    return ResolventField(src, float(E), grid, values, residual, operator.condition)


def evaluate_resolvent(field: ResolventField, x) -> np.ndarray | complex:
    """``R+(x, source, E)`` by the integral representation; ``x`` must differ from the source."""
    pts = np.atleast_2d(np.asarray(x, dtype=float))
    dist = np.linalg.norm(pts - field.source, axis=1)
    if np.any(dist == 0):
        raise DomainError("R+ is singular at x = source", "resolvent")
    vals = -green_free(field.grid.dimension, dist, field.k_norm) + volume_potential(
        field.grid, field.R_values, field.k_norm, pts
    )
    return complex(vals[0]) if np.ndim(x) == 1 else vals


def _check_exterior(grid: GridDiscretization, pts, name: str) -> None:
    if np.linalg.norm(pts) <= grid.potential.support_radius:
        raise GeometryError(f"{name} must lie outside the support ball", "resolvent")


def reciprocity_defect(grid: GridDiscretization, x, x_prime, E: float) -> float:
    """``|R+(x, x') - R+(x', x)|`` from two independent solves."""
    x = np.asarray(x, dtype=float)
    x_prime = np.asarray(x_prime, dtype=float)
    if np.array_equal(x, x_prime):
        raise DomainError("reciprocity needs two distinct points", "resolvent")
    _check_exterior(grid, x, "x")
    _check_exterior(grid, x_prime, "x_prime")
    forward = solve_resolvent_field(grid, x_prime, E)
    backward = solve_resolvent_field(grid, x, E)
    return float(abs(evaluate_resolvent(forward, x) - evaluate_resolvent(backward, x_prime)))


def sample_resolvent_sq(field: ResolventField, k, s_values) -> np.ndarray:
    """``|R+(-s k/|k|, x', E)|^2`` for each ``s``."""
    k = np.asarray(k, dtype=float)
    khat = k / np.linalg.norm(k)
    s = np.asarray(s_values, dtype=float)
    vals = evaluate_resolvent(field, -s[:, None] * khat[None, :])
    return vals.real**2 + vals.imag**2


@dataclass(frozen=True)
class ResolventReduction:
    """Estimates of ``|psi+(x', k)|^2`` from scaled ``|R+|^2`` samples.

    ``estimate`` is the value at the largest radius; ``defect`` is the
    difference between the two largest-radius estimates.
    """

    s_values: np.ndarray
    scaled: np.ndarray
    estimate: float
    defect: float


def psi_sq_from_resolvent(s_values, r_sq_values, k, scaling: str = "squared") -> ResolventReduction:
    """Scale ``|R+(-s k/|k|, x', E)|^2`` into an estimate of ``|psi+(x', k)|^2``.

    ``scaling="squared"`` uses ``(2 pi)^(2d) |c|^-2 s^(d-1)``, the square of the
    far-field relation between ``R+`` and ``psi+``.  ``scaling="printed"`` uses
    ``(2 pi)^d |c|^-1 s^((d-1)/2)``, kept only to demonstrate that it does not
    converge.
    """
    s = np.asarray(s_values, dtype=float)
    rsq = np.asarray(r_sq_values, dtype=float)
    if s.ndim != 1 or s.shape != rsq.shape:
        raise ValidationError("s_values and r_sq_values must be 1-D and aligned", "resolvent")
    if len(s) < 2:
        raise InsufficientDataError("need at least two sample radii", "resolvent")
    if np.any(np.diff(s) <= 0):
        raise ValidationError("sample radii must be strictly increasing", "resolvent")
    k = np.asarray(k, dtype=float)
    d = len(k)
    c_mod = farfield_constant(d, float(np.linalg.norm(k))).modulus
    if scaling == "squared":
        factor = (2 * np.pi) ** (2 * d) / c_mod**2 * s ** (d - 1)
    elif scaling == "printed":
        factor = (2 * np.pi) ** d / c_mod * s ** ((d - 1) / 2)
    else:
        raise ValidationError(f"unknown scaling {scaling!r}", "resolvent")
    scaled = factor * rsq
    return ResolventReduction(s, scaled, float(scaled[-1]), float(abs(scaled[-1] - scaled[-2])))


def resolvent_far_pattern(field: ResolventField, x) -> complex:
    """``R+(x, x') |x|^((d-1)/2) exp(-i sqrt(E)|x|) (-(2 pi)^d / c)``.

    Tends to ``psi+(x', -sqrt(E) x/|x|)`` as ``|x|`` grows along a ray.
    """
    x = np.asarray(x, dtype=float)
    rad = float(np.linalg.norm(x))
    d = field.grid.dimension
    c = farfield_constant(d, field.k_norm).c
    r = evaluate_resolvent(field, x)
    return complex(r * rad ** ((d - 1) / 2) * np.exp(-1j * field.k_norm * rad) * (-(2 * np.pi) ** d / c))
