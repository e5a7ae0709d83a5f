"""Recovery of the complex scattering amplitude from phaseless intensities along a ray.

Along the outgoing ray ``x = s l/|l|`` the first-order part of the
phaseless signal ``a`` oscillates as

    a0(s) = 2 |c| |f| cos(2 pi s / T + alpha + beta),

with period ``T = 2 pi / (sqrt(E) (1 - k.l / E))``.  Sampling ``a`` at two
offsets ``s1, s2`` shifted by the same whole number of periods gives a 2x2
linear system for ``(|f| cos alpha, |f| sin alpha)``.  The unknown
remainder ``a - a0`` decays like ``s^-1/2`` (2D) or ``s^-1`` (3D), so the
estimates converge as the period count ``n`` grows.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import (
    DegenerateOffsetsError,
    DegeneratePairError,
    GeometryError,
    InsufficientDataError,
    ValidationError,
)
from .far_field import FarFieldConstant, farfield_constant, phaseless_a
from .forward import ScatteringSolution

__all__ = [
    "MIN_OFFSET_SINE",
    "RAY_SAMPLES_HEADER",
    "RaySampleSet",
    "PhaseRecoveryResult",
    "period_T",
    "offset_sine",
    "default_offsets",
    "synthetic_a0",
    "generate_ray_samples",
    "recover_f_at_n",
    "recover_f_sequence",
    "estimate_decay_slope",
    "write_ray_samples_csv",
    "read_ray_samples_csv",
]

MIN_OFFSET_SINE = 0.1
RAY_SAMPLES_HEADER = ("s", "a_value", "offset_index")
_MODULE = "phase_recovery"


def period_T(k, l) -> float:
    """Oscillation period ``2 pi (sqrt(E) (1 - k.l/E))^-1`` of the phaseless signal."""
    k = np.asarray(k, dtype=float)
    l = np.asarray(l, dtype=float)
    E = float(k @ k)
    if not E > 0 or abs(E - l @ l) > 1e-12 * E:
        raise ValidationError("k and l must be nonzero and on the same energy shell", _MODULE)
    gap = 1.0 - float(k @ l) / E
    if gap < 1e-12:
        raise DegeneratePairError("k = l: the period is undefined for the forward direction", _MODULE)
    return float(2.0 * np.pi / (np.sqrt(E) * gap))


def offset_sine(T: float, s1: float, s2: float) -> float:
    return float(np.sin(2.0 * np.pi * (s1 - s2) / T))


def default_offsets(T: float) -> tuple[float, float]:
    """``(0, T/4)``, the best-conditioned choice."""
    return 0.0, 0.25 * T


def _check_offsets(T: float, s1: float, s2: float) -> None:
    if not (0 <= s1 <= T and 0 <= s2 <= T):
        raise ValidationError("offsets s1, s2 must lie in [0, T]", _MODULE)
    if abs(offset_sine(T, s1, s2)) < MIN_OFFSET_SINE:
        raise DegenerateOffsetsError(
            f"|sin(2 pi (s1 - s2)/T)| = {abs(offset_sine(T, s1, s2)):.3g} < {MIN_OFFSET_SINE}: "
            "s1 and s2 must differ modulo T/2",
            _MODULE,
        )


@dataclass(frozen=True, eq=False)
class RaySampleSet:
    """Phaseless samples ``a((s_j + n T) l/|l|, k)`` for ``j = 1, 2`` and each ``n``.

    ``a_values[i]`` holds the pair for ``n_list[i]``.
    """

    k: np.ndarray
    l: np.ndarray
    T: float
    s1: float
    s2: float
    n_list: tuple[int, ...]
    a_values: np.ndarray
    support_radius: float | None = None

    def __post_init__(self):
        k = np.array(self.k, dtype=float)
        l = np.array(self.l, dtype=float)
        T = period_T(k, l)
        if not np.isclose(T, self.T, rtol=1e-10):
            raise ValidationError(f"T={self.T} does not match the period {T} of (k, l)", _MODULE)
        _check_offsets(self.T, self.s1, self.s2)
        n_list = tuple(int(n) for n in self.n_list)
        if not n_list or any(n < 1 for n in n_list) or any(np.diff(n_list) <= 0):
            raise ValidationError("n_list must be strictly increasing positive integers", _MODULE)
        a = np.array(self.a_values, dtype=float).reshape(len(n_list), 2)
        if self.support_radius is not None:
            radii = self.radii()
            if np.any(np.asarray(radii) <= self.support_radius):
                raise GeometryError("sample radii must exceed the support radius", _MODULE)
        for name, val in (("k", k), ("l", l), ("a_values", a)):
            val.setflags(write=False)
            object.__setattr__(self, name, val)
        object.__setattr__(self, "n_list", n_list)

    def radii(self) -> np.ndarray:
        n = np.asarray(self.n_list, dtype=float)
        return np.stack([self.s1 + n * self.T, self.s2 + n * self.T], axis=1)

    def pair(self, n: int) -> np.ndarray:
        try:
            return self.a_values[self.n_list.index(int(n))]
        except ValueError:
            raise ValidationError(f"n={n} is not among the sampled n_list", _MODULE) from None


@dataclass(frozen=True, eq=False)
class PhaseRecoveryResult:
    n_list: tuple[int, ...]
    per_n_estimates: np.ndarray
    final_estimate: complex
    residual_trace: np.ndarray
    delta_a_diagnostic: np.ndarray | None = None
    samples: RaySampleSet | None = field(default=None, repr=False)

    def errors(self, reference: complex) -> np.ndarray:
        """Complex-plane errors ``|f_n - reference|``."""
        return np.abs(self.per_n_estimates - reference)


def synthetic_a0(s, T: float, modulus: float, alpha: float, constant: FarFieldConstant) -> np.ndarray:
    """Noise-free oscillation model ``2 |c| |f| cos(2 pi s/T + alpha + beta)``."""
    s = np.asarray(s, dtype=float)
    return 2.0 * constant.modulus * modulus * np.cos(2 * np.pi * s / T + alpha + constant.phase_beta)


def recover_f_at_n(samples: RaySampleSet, n: int, constant: FarFieldConstant) -> complex:
    """Solve the 2x2 system for ``f`` from the sample pair at period count ``n``.

    The remainder ``a - a0`` is treated as zero.
    """
    _check_offsets(samples.T, samples.s1, samples.s2)
    a1, a2 = samples.pair(n)
    w = 2.0 * np.pi / samples.T
    beta = constant.phase_beta
    phi1 = w * samples.s1 + beta
    phi2 = w * samples.s2 + beta
    scale = 1.0 / (2.0 * constant.modulus * np.sin(w * (samples.s1 - samples.s2)))
    re = scale * (-np.sin(phi2) * a1 + np.sin(phi1) * a2)
    im = scale * (-np.cos(phi2) * a1 + np.cos(phi1) * a2)
    return complex(re, im)


def generate_ray_samples(
    solution: ScatteringSolution,
    l,
    n_list: Sequence[int],
    s_offsets: tuple[float, float] | None = None,
) -> RaySampleSet:
    """Evaluate ``a`` from a forward solution on the sampling set along ``l``."""
    k = solution.context.k
    l = np.asarray(l, dtype=float)
    T = period_T(k, l)
    s1, s2 = default_offsets(T) if s_offsets is None else s_offsets
    r = solution.grid.potential.support_radius
    n_list = tuple(int(n) for n in n_list)
    if not n_list:
        raise ValidationError("n_list is empty", _MODULE)
    if min(s1, s2) + n_list[0] * T <= 2.0 * r:
        raise GeometryError(
            f"smallest sample radius {min(s1, s2) + n_list[0] * T:.4g} must exceed "
            f"twice the support radius ({2 * r:g})",
            _MODULE,
        )
    lhat = l / np.linalg.norm(l)
    n = np.asarray(n_list, dtype=float)
    radii = np.stack([s1 + n * T, s2 + n * T], axis=1)
    a = phaseless_a(solution, radii.reshape(-1, 1) * lhat[None, :])
    return RaySampleSet(k, l, T, s1, s2, n_list, a.reshape(-1, 2), support_radius=r)


def recover_f_sequence(
    source: ScatteringSolution | RaySampleSet,
    k=None,
    l=None,
    n_list: Sequence[int] | None = None,
    s_offsets: tuple[float, float] | None = None,
    reference: complex | None = None,
) -> PhaseRecoveryResult:
    """Recover ``f(k, l)`` for every ``n`` in ``n_list``.

    ``source`` is either a forward solution (samples are generated along
    ``l``) or a ready :class:`RaySampleSet`.  The final estimate is the one
    at the largest ``n``.  When ``reference`` is given, the remainder
    ``a - a0`` implied by it is reported in ``delta_a_diagnostic``.
    """
    if isinstance(source, RaySampleSet):
        samples = source
        if k is not None and not np.allclose(k, samples.k, rtol=0, atol=1e-12):
            raise ValidationError("k differs from the sample set", _MODULE)
        if l is not None and not np.allclose(l, samples.l, rtol=0, atol=1e-12):
            raise ValidationError("l differs from the sample set", _MODULE)
        if n_list is not None:
            missing = set(int(n) for n in n_list) - set(samples.n_list)
            if missing:
                raise InsufficientDataError(f"samples do not cover n = {sorted(missing)}", _MODULE)
        else:
            n_list = samples.n_list
    else:
        if k is not None and not np.allclose(k, source.context.k, rtol=0, atol=1e-12):
            raise ValidationError("k differs from the solution's incident wave vector", _MODULE)
        if l is None or n_list is None:
            raise ValidationError("l and n_list are required with a forward solution", _MODULE)
        samples = generate_ray_samples(source, l, n_list, s_offsets)
    n_list = tuple(int(n) for n in n_list)

    constant = farfield_constant(len(samples.k), float(np.linalg.norm(samples.k)))
    estimates = np.array([recover_f_at_n(samples, n, constant) for n in n_list])
    trace = np.abs(estimates - estimates[-1])

    diagnostic = None
    if reference is not None:
        ref = complex(reference)
        idx = [samples.n_list.index(n) for n in n_list]
        radii = samples.radii()[idx]
        a0 = synthetic_a0(radii, samples.T, abs(ref), np.angle(ref), constant)
        diagnostic = samples.a_values[idx] - a0

    return PhaseRecoveryResult(n_list, estimates, complex(estimates[-1]), trace, diagnostic, samples)


def estimate_decay_slope(n_list: Sequence[float], errors: Sequence[float]) -> float:
    """Least-squares slope of ``log(error)`` against ``log(n)``; non-positive errors are dropped."""
    n = np.asarray(n_list, dtype=float)
    e = np.asarray(errors, dtype=float)
    if n.shape != e.shape:
        raise ValidationError("n_list and errors must have equal length", _MODULE)
    keep = (e > 0) & np.isfinite(e)
    if keep.sum() < 4:
        raise InsufficientDataError("need at least 4 positive errors to fit a slope", _MODULE)
    slope, _ = np.polyfit(np.log(n[keep]), np.log(e[keep]), 1)
    return float(slope)


def write_ray_samples_csv(samples: RaySampleSet, path) -> None:
    """Write samples as ``s,a_value,offset_index`` rows."""
    radii = samples.radii()
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RAY_SAMPLES_HEADER)
        for j in (0, 1):
            for s, a in zip(radii[:, j], samples.a_values[:, j]):
                writer.writerow([repr(float(s)), repr(float(a)), j + 1])


def read_ray_samples_csv(path, k, l, support_radius: float | None = None) -> RaySampleSet:
    """Read an ``s,a_value,offset_index`` file measured along ``l`` for incidence ``k``.

    The offsets and period counts are inferred from the radii; both offsets
    must be sampled at the same set of period counts.
    """
    T = period_T(k, l)
    rows: dict[int, list[tuple[float, float]]] = {1: [], 2: []}
    with open(Path(path), newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != RAY_SAMPLES_HEADER:
            raise ValidationError(f"ray sample header must be {','.join(RAY_SAMPLES_HEADER)}", _MODULE)
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                s, a, idx = float(row[0]), float(row[1]), int(row[2])
            except (ValueError, IndexError):
                raise ValidationError(f"malformed ray sample at line {lineno}", _MODULE) from None
            if idx not in rows:
                raise ValidationError(f"offset_index must be 1 or 2 (line {lineno})", _MODULE)
            rows[idx].append((s, a))

    offsets, tables = [], []
    for j in (1, 2):
        if not rows[j]:
            raise InsufficientDataError(f"no samples with offset_index {j}", _MODULE)
        data = sorted(rows[j])
        s0 = data[0][0]
        offset = s0 - np.floor(s0 / T) * T
        if T - offset < 1e-9 * T:
            offset = 0.0
        table = {}
        for s, a in data:
            n = int(round((s - offset) / T))
            if abs(offset + n * T - s) > 1e-8 * max(1.0, s):
                raise ValidationError(f"radius {s} is not on the lattice s{j} + nT", _MODULE)
            table[n] = a
        offsets.append(offset)
        tables.append(table)
    if set(tables[0]) != set(tables[1]):
        raise InsufficientDataError("both offsets must cover the same period counts", _MODULE)
    n_list = tuple(sorted(tables[0]))
    a = np.array([[tables[0][n], tables[1][n]] for n in n_list])
    return RaySampleSet(k, l, T, offsets[0], offsets[1], n_list, a, support_radius=support_radius)
