"""Compactly supported potentials and their cell-centred grid discretizations."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import ValidationError

__all__ = [
    "KINDS",
    "Potential",
    "GridDiscretization",
    "make_potential",
    "acoustic_to_potential",
    "discretize",
]

KINDS = ("disc_constant", "truncated_gaussian", "sum_of_bumps", "acoustic")


def _fail(msg: str):
    raise ValidationError(msg, "medium")


@dataclass(frozen=True, eq=False)
class Potential:
    """A real, bounded potential supported in the open ball of radius ``support_radius``.

    ``params`` depends on ``kind``:

    * ``disc_constant``: ``(amplitude, radius)``, a disc/ball centred at the origin.
    * ``truncated_gaussian``: ``(amplitude, sigma)``, ``amplitude * exp(-|x|^2 / (2 sigma^2))``
      hard-clipped at the support radius.
    * ``sum_of_bumps``: groups of ``(amplitude, *center, width)``; each bump is the
      smooth compact bump ``amplitude * exp(1 - 1 / (1 - |x-c|^2/width^2))``.
    * ``acoustic``: no params; values come from ``profile`` (see
      :func:`acoustic_to_potential`).
    """

    dimension: int
    kind: str
    params: tuple[float, ...]
    support_radius: float
    profile: Callable[[np.ndarray], np.ndarray] | None = field(default=None, repr=False)

    def __call__(self, x) -> np.ndarray | float:
        pts = np.asarray(x, dtype=float)
        scalar = pts.ndim == 1
        pts = np.atleast_2d(pts)
        if pts.shape[-1] != self.dimension:
            _fail(f"points must have {self.dimension} coordinates, got shape {pts.shape}")
        rad = np.linalg.norm(pts, axis=-1)
        values = self._raw(pts, rad * rad)
        values = np.where(rad < self.support_radius, values, 0.0)
        return float(values[0]) if scalar else values

    def _raw(self, pts: np.ndarray, r2: np.ndarray) -> np.ndarray:
        p = self.params
        if self.kind == "disc_constant":
            amplitude, radius = p
            return np.where(r2 < radius**2, amplitude, 0.0)
        if self.kind == "truncated_gaussian":
            amplitude, sigma = p
            return amplitude * np.exp(-r2 / (2.0 * sigma**2))
        if self.kind == "sum_of_bumps":
            out = np.zeros(pts.shape[:-1])
            for amplitude, center, width in self.bumps():
                t = np.einsum("...i,...i->...", pts - center, pts - center) / width**2
                inside = t < 1.0
                safe = np.where(inside, t, 0.0)
                out += np.where(inside, amplitude * np.exp(1.0 - 1.0 / (1.0 - safe)), 0.0)
            return out
        # acoustic
        return np.asarray(self.profile(pts), dtype=float)

    def bumps(self) -> list[tuple[float, np.ndarray, float]]:
        """Decode ``sum_of_bumps`` params into ``(amplitude, center, width)`` triples."""
        if self.kind != "sum_of_bumps":
            return []
        group = self.dimension + 2
        p = self.params
        return [
            (p[i], np.array(p[i + 1 : i + 1 + self.dimension]), p[i + group - 1])
            for i in range(0, len(p), group)
        ]

    @property
    def is_zero(self) -> bool:
        if self.kind in ("disc_constant", "truncated_gaussian"):
            return self.params[0] == 0.0
        if self.kind == "sum_of_bumps":
            return all(b[0] == 0.0 for b in self.bumps())
        return False

    def to_dict(self) -> dict:
        if self.kind == "acoustic":
            _fail("acoustic potentials wrap a callable and cannot be serialized")
        return {
            "dimension": self.dimension,
            "kind": self.kind,
            "params": list(self.params),
            "support_radius": self.support_radius,
        }


def make_potential(
    dimension: int, kind: str, params: Sequence[float], support_radius: float
) -> Potential:
    """Build and validate a :class:`Potential`."""
    if dimension not in (2, 3):
        _fail(f"dimension must be 2 or 3, got {dimension}")
    if kind not in KINDS or kind == "acoustic":
        _fail(f"unknown potential kind {kind!r}")
    r = float(support_radius)
    if not np.isfinite(r) or r <= 0:
        _fail("support_radius must be finite and > 0")
    p = tuple(float(v) for v in params)
    if not all(np.isfinite(p)):
        _fail("potential params must be finite")

    if kind == "disc_constant":
        if len(p) != 2:
            _fail("disc_constant needs params [amplitude, radius]")
        if not 0 < p[1] <= r:
            _fail(f"disc radius {p[1]} must lie in (0, support_radius={r}]")
    elif kind == "truncated_gaussian":
        if len(p) != 2:
            _fail("truncated_gaussian needs params [amplitude, sigma]")
        if p[1] <= 0:
            _fail("gaussian width sigma must be > 0")
    else:
        group = dimension + 2
        if len(p) == 0 or len(p) % group:
            _fail(f"sum_of_bumps needs groups of {group} params [amplitude, *center, width]")
        for i in range(0, len(p), group):
            center = np.array(p[i + 1 : i + 1 + dimension])
            width = p[i + group - 1]
            if width <= 0:
                _fail("bump width must be > 0")
            if np.linalg.norm(center) + width > r:
                _fail("bump (center, width) must lie inside the support ball")
    return Potential(dimension, kind, p, r)


def acoustic_to_potential(
    n_field: Callable[[np.ndarray], np.ndarray],
    omega: float,
    c0: float,
    support_radius: float,
    dimension: int = 2,
    shell_samples: int = 720,
) -> tuple[Potential, float]:
    """Convert a refraction-index field into a potential ``(1 - n^2) (omega/c0)^2``.

    Returns the potential and the energy ``E = (omega/c0)^2``.  ``n_field`` is
    called with an ``(N, d)`` array of points and must equal one on and
    outside the support sphere.
    """
    if omega <= 0 or c0 <= 0:
        _fail("omega and c0 must be > 0")
    if dimension not in (2, 3):
        _fail(f"dimension must be 2 or 3, got {dimension}")
    r = float(support_radius)
    wavenumber2 = (omega / c0) ** 2

    # n must be 1 on the boundary shell and just outside it
    rng = np.random.default_rng(0)
    dirs = rng.normal(size=(shell_samples, dimension))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    shell = np.concatenate([dirs * r, dirs * r * 1.01])
    n_shell = np.asarray(n_field(shell), dtype=float)
    if not np.allclose(n_shell, 1.0, rtol=0, atol=1e-12):
        _fail("refraction index must equal 1 on the support boundary shell")

    def profile(pts: np.ndarray) -> np.ndarray:
        n = np.asarray(n_field(pts.reshape(-1, dimension)), dtype=float)
        return ((1.0 - n**2) * wavenumber2).reshape(pts.shape[:-1])

    return Potential(dimension, "acoustic", (), r, profile), wavenumber2


@dataclass(frozen=True, eq=False)
class GridDiscretization:
    """Midpoint sampling of a potential on the cells of ``[-r, r]^d`` whose centres lie in the ball."""

    potential: Potential
    cells_per_side: int
    cell_centers: np.ndarray
    cell_volume: float
    v_values: np.ndarray

    @property
    def dimension(self) -> int:
        return self.potential.dimension

    @property
    def spacing(self) -> float:
        return 2.0 * self.potential.support_radius / self.cells_per_side

    @property
    def size(self) -> int:
        return len(self.cell_centers)

    def mass(self) -> float:
        """Midpoint-rule integral of the potential."""
        return float(np.sum(self.v_values) * self.cell_volume)


def discretize(potential: Potential, cells_per_side: int) -> GridDiscretization:
    if int(cells_per_side) != cells_per_side or cells_per_side < 4:
        _fail("cells_per_side must be an integer >= 4")
    n = int(cells_per_side)
    r = potential.support_radius
    h = 2.0 * r / n
    axis = -r + h * (np.arange(n) + 0.5)
    mesh = np.meshgrid(*([axis] * potential.dimension), indexing="ij")
    centers = np.stack([m.ravel() for m in mesh], axis=-1)
    active = np.linalg.norm(centers, axis=1) < r
    centers = np.ascontiguousarray(centers[active])
    centers.setflags(write=False)
    values = np.asarray(potential(centers), dtype=float)
    values.setflags(write=False)
    return GridDiscretization(potential, n, centers, h**potential.dimension, values)
