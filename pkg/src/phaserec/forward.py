"""Lippmann-Schwinger solver for plane-wave scattering on a compactly supported potential.

The volume integral equation

    psi(x) = exp(i k.x) + int G(|x - y|, |k|) v(y) psi(y) dy

is collocated at the active cell centres of a :class:`GridDiscretization`
(Nystrom method).  Off-diagonal weights are ``G * cell_volume``; the
diagonal uses the integral of the kernel over the equal-measure disc/ball
around the cell centre.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.linalg import get_lapack_funcs, lu_factor, lu_solve
from scipy.spatial.distance import cdist
from scipy.special import j1

from .errors import DomainError, SolverError, ValidationError
from .medium import GridDiscretization, Potential
from .special_functions import EULER_GAMMA, hankel1_0

__all__ = [
    "CONDITION_LIMIT",
    "RESIDUAL_LIMIT",
    "PlaneWaveContext",
    "IntegralOperator",
    "ScatteringSolution",
    "green_free",
    "singular_cell_weight",
    "assemble_operator",
    "solve_psi_on_support",
    "evaluate_psi",
    "scattered_field",
    "born_amplitude",
]

logger = logging.getLogger(__name__)

CONDITION_LIMIT = 1e12
RESIDUAL_LIMIT = 1e-10
_CHUNK = 2048


def green_free(dimension: int, distance, k_norm: float):
    """Outgoing free-space Green's function ``G0+(|x|, |k|)``.

    ``-exp(i k r) / (4 pi r)`` in 3D and ``-(i/4) H0^(1)(k r)`` in 2D, i.e. the
    kernel with ``(-Laplace - k^2) G = -delta``.  ``distance`` may be an array.
    """
    if dimension not in (2, 3):
        raise ValidationError(f"dimension must be 2 or 3, got {dimension}", "forward_solver")
    if k_norm <= 0:
        raise DomainError("k_norm must be > 0", "forward_solver")
    r = np.asarray(distance, dtype=float)
    if np.any(r <= 0) or not np.all(np.isfinite(r)):
        raise DomainError(
            "green_free is singular at distance 0; use singular_cell_weight", "forward_solver"
        )
    if dimension == 3:
        out = -np.exp(1j * k_norm * r) / (4.0 * np.pi * r)
    else:
        out = -0.25j * np.asarray(hankel1_0(k_norm * r))
    return complex(out) if np.ndim(distance) == 0 else out


def singular_cell_weight(dimension: int, cell_volume: float, k_norm: float) -> complex:
    """Integral of the Green's function over the disc/ball with the same measure as a cell.

    2D integrates the small-argument form ``H0(z) ~ 1 + (2i/pi)(ln(z/2) + gamma)``;
    3D integrates the exact kernel, ``-int_0^a s exp(i k s) ds``.
    """
    if dimension == 2:
        a = np.sqrt(cell_volume / np.pi)
        log_part = 0.5 * a * a * (np.log(0.5 * k_norm * a) + EULER_GAMMA) - 0.25 * a * a
        return complex(-0.25j * np.pi * a * a + log_part)
    a = (3.0 * cell_volume / (4.0 * np.pi)) ** (1.0 / 3.0)
    ka = k_norm * a
    if ka < 1e-4:
        return complex(-0.5 * a * a * (1 + 2j * ka / 3.0))
    inner = np.exp(1j * ka) * (a / (1j * k_norm) + 1.0 / k_norm**2) - 1.0 / k_norm**2
    return complex(-inner)


@dataclass(frozen=True)
class PlaneWaveContext:
    """Incident wave vector ``k`` on the energy shell ``|k|^2 = E``."""

    k: np.ndarray
    E: float

    def __post_init__(self):
        k = np.array(self.k, dtype=float)
        k.setflags(write=False)
        object.__setattr__(self, "k", k)
        if not self.E > 0:
            raise ValidationError("E must be > 0", "forward_solver")
        if abs(k @ k - self.E) > 1e-12 * self.E:
            raise ValidationError(f"|k|^2 = {k @ k!r} differs from E = {self.E!r}", "forward_solver")

    @classmethod
    def from_direction(cls, direction, E: float) -> "PlaneWaveContext":
        d = np.asarray(direction, dtype=float)
        return cls(np.sqrt(E) * d / np.linalg.norm(d), E)

    @property
    def k_norm(self) -> float:
        return float(np.sqrt(self.E))

    @property
    def dimension(self) -> int:
        return len(self.k)


class IntegralOperator:
    """Factorized Nystrom matrix ``I - W diag(v)`` for one grid and wavenumber.

    Shared by the plane-wave and point-source solvers.
    """

    def __init__(self, grid: GridDiscretization, k_norm: float):
        self.grid = grid
        self.k_norm = float(k_norm)
        d = grid.dimension
        centers = grid.cell_centers
        dist = cdist(centers, centers)
        np.fill_diagonal(dist, 1.0)
        weights = green_free(d, dist, self.k_norm) * grid.cell_volume
        self.self_weight = singular_cell_weight(d, grid.cell_volume, self.k_norm)
        np.fill_diagonal(weights, self.self_weight)
        self.weights = weights
        matrix = -weights * grid.v_values[None, :]
        matrix[np.diag_indices_from(matrix)] += 1.0
        self.matrix = matrix

        anorm = np.abs(matrix).sum(axis=0).max()
        self._lu = lu_factor(matrix, check_finite=False)
        gecon = get_lapack_funcs("gecon", (self._lu[0],))
        rcond, info = gecon(self._lu[0], anorm, norm="1")
        self.condition = float(np.inf) if rcond == 0 else float(1.0 / rcond)
        if not np.isfinite(self.condition) or self.condition > CONDITION_LIMIT:
            raise SolverError(
                f"Lippmann-Schwinger matrix is ill-conditioned (condition estimate "
                f"{self.condition:.3e}); E may be near an exceptional value of the "
                f"discretized operator",
                "forward_solver",
                condition=self.condition,
            )

    def solve(self, rhs: np.ndarray, module: str = "forward_solver") -> tuple[np.ndarray, float]:
        """Solve with one step of iterative refinement; returns the solution and relative residual."""
        x = lu_solve(self._lu, rhs, check_finite=False)
        resid = self.matrix @ x - rhs
        x = x - lu_solve(self._lu, resid, check_finite=False)
        scale = np.linalg.norm(rhs)
        rel = float(np.linalg.norm(self.matrix @ x - rhs) / scale) if scale > 0 else 0.0
        if rel > RESIDUAL_LIMIT:
            raise SolverError(
                f"backsubstitution residual {rel:.3e} exceeds {RESIDUAL_LIMIT:g}",
                module,
                condition=self.condition,
            )
        return x, rel


def assemble_operator(grid: GridDiscretization, k_norm: float) -> IntegralOperator:
    return IntegralOperator(grid, k_norm)


@dataclass(frozen=True, eq=False)
class ScatteringSolution:
    context: PlaneWaveContext
    grid: GridDiscretization
    psi_values: np.ndarray
    residual: float
    condition: float

    @property
    def dimension(self) -> int:
        return self.grid.dimension


def solve_psi_on_support(
    grid: GridDiscretization, context: PlaneWaveContext, operator: IntegralOperator | None = None
) -> ScatteringSolution:
    """Solve the discrete Lippmann-Schwinger system for ``psi+`` at the active cells.

    An already factorized ``operator`` for the same grid and ``|k|`` may be passed
    to reuse the factorization across incident directions.
    """
    if context.dimension != grid.dimension:
        raise ValidationError("context and grid dimensions differ", "forward_solver")
    if operator is None:
        operator = IntegralOperator(grid, context.k_norm)
    elif operator.grid is not grid or not np.isclose(operator.k_norm, context.k_norm, rtol=1e-14):
        raise ValidationError("operator was assembled for another grid or energy", "forward_solver")
    incident = np.exp(1j * grid.cell_centers @ context.k)
    psi, residual = operator.solve(incident)
    psi.setflags(write=False)
    logger.debug("solved %d cells, condition %.3e, residual %.2e", grid.size, operator.condition, residual)
    return ScatteringSolution(context, grid, psi, residual, operator.condition)


def _owning_cells(grid: GridDiscretization, pts: np.ndarray) -> np.ndarray:
    """Active-cell index containing each point, or -1."""
    n = grid.cells_per_side
    r = grid.potential.support_radius
    h = grid.spacing
    lattice = np.floor((pts + r) / h).astype(np.int64)
    inside = np.all((lattice >= 0) & (lattice < n), axis=1)
    idx_centers = np.rint((grid.cell_centers + r) / h - 0.5).astype(np.int64)
    flat_centers = np.ravel_multi_index(idx_centers.T, (n,) * grid.dimension)
    lookup = np.full(n**grid.dimension, -1, dtype=np.int64)
    lookup[flat_centers] = np.arange(grid.size)
    out = np.full(len(pts), -1, dtype=np.int64)
    if np.any(inside):
        flat = np.ravel_multi_index(lattice[inside].T, (n,) * grid.dimension)
        out[inside] = lookup[flat]
    return out


def volume_potential(grid: GridDiscretization, density: np.ndarray, k_norm: float, x) -> np.ndarray:
    """``sum_j G(|x - x_j|) v_j density_j cell_volume`` at arbitrary points ``x``.

    Points lying in an active cell use the singular weight for that cell.
    """
    pts = np.atleast_2d(np.asarray(x, dtype=float))
    d = grid.dimension
    if pts.shape[1] != d:
        raise ValidationError(f"points must have {d} coordinates", "forward_solver")
    source = grid.v_values * density
    out = np.empty(len(pts), dtype=complex)
    self_weight = singular_cell_weight(d, grid.cell_volume, k_norm)
    owner = _owning_cells(grid, pts)
    for start in range(0, len(pts), _CHUNK):
        sl = slice(start, start + _CHUNK)
        dist = cdist(pts[sl], grid.cell_centers)
        rows = np.nonzero(owner[sl] >= 0)[0]
        cols = owner[sl][rows]
        dist[rows, cols] = 1.0
        kern = green_free(d, dist, k_norm) * grid.cell_volume
        kern[rows, cols] = self_weight
        out[sl] = kern @ source
    return out


def scattered_field(solution: ScatteringSolution, x) -> np.ndarray | complex:
    """``psi+ - exp(i k.x)`` from the representation formula."""
    vals = volume_potential(solution.grid, solution.psi_values, solution.context.k_norm, x)
    return complex(vals[0]) if np.ndim(x) == 1 else vals


def evaluate_psi(solution: ScatteringSolution, x) -> np.ndarray | complex:
    """``psi+(x)`` anywhere via the Lippmann-Schwinger representation.

    ``x`` is a single d-vector (returns a complex) or an ``(M, d)`` array.
    """
    pts = np.atleast_2d(np.asarray(x, dtype=float))
    vals = np.exp(1j * pts @ solution.context.k) + volume_potential(
        solution.grid, solution.psi_values, solution.context.k_norm, pts
    )
    return complex(vals[0]) if np.ndim(x) == 1 else vals


def _gauss_box(lo: np.ndarray, hi: np.ndarray, points: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(points)
    axes = [0.5 * (h - l) * nodes + 0.5 * (h + l) for l, h in zip(lo, hi)]
    wts = [0.5 * (h - l) * weights for l, h in zip(lo, hi)]
    mesh = np.meshgrid(*axes, indexing="ij")
    wmesh = np.meshgrid(*wts, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=-1)
    w = np.prod(np.stack([m.ravel() for m in wmesh], axis=-1), axis=-1)
    return pts, w


def born_amplitude(potential: Potential, k, l) -> complex:
    """First Born approximation ``(2 pi)^-d int exp(i (k - l).y) v(y) dy``.

    Closed forms are used for discs/balls and Gaussians (the Gaussian form
    ignores the clipping at the support radius); other kinds use
    Gauss-Legendre quadrature.
    """
    k = np.asarray(k, dtype=float)
    l = np.asarray(l, dtype=float)
    d = potential.dimension
    if k.shape != (d,) or l.shape != (d,):
        raise ValidationError("k and l must be d-vectors", "forward_solver")
    if abs(k @ k - l @ l) > 1e-12 * max(k @ k, l @ l):
        raise ValidationError("k and l must lie on the same energy shell", "forward_solver")
    q_vec = k - l
    q = float(np.linalg.norm(q_vec))
    scale = (2.0 * np.pi) ** (-d)

    if potential.kind == "disc_constant":
        amplitude, radius = potential.params
        if d == 2:
            ft = np.pi * radius**2 if q * radius < 1e-8 else 2 * np.pi * radius * j1(q * radius) / q
        else:
            qr = q * radius
            if qr < 1e-4:
                ft = 4.0 / 3.0 * np.pi * radius**3 * (1 - qr**2 / 10.0)
            else:
                ft = 4 * np.pi * (np.sin(qr) - qr * np.cos(qr)) / q**3
        return complex(scale * amplitude * ft)
    if potential.kind == "truncated_gaussian":
        amplitude, sigma = potential.params
        ft = (2 * np.pi * sigma**2) ** (d / 2) * np.exp(-0.5 * sigma**2 * q**2)
        return complex(scale * amplitude * ft)

    if potential.kind == "sum_of_bumps":
        total = 0j
        npts = 48 if d == 2 else 24
        for amplitude, center, width in potential.bumps():
            pts, w = _gauss_box(center - width, center + width, npts)
            t = np.sum((pts - center) ** 2, axis=1) / width**2
            inside = t < 1.0
            bump = np.zeros(len(pts))
            bump[inside] = amplitude * np.exp(1.0 - 1.0 / (1.0 - t[inside]))
            total += np.sum(w * bump * np.exp(1j * pts @ q_vec))
        return complex(scale * total)
    r = potential.support_radius
    pts, w = _gauss_box(np.full(d, -r), np.full(d, r), 96 if d == 2 else 40)
    return complex(scale * np.sum(w * potential(pts) * np.exp(1j * pts @ q_vec)))
