"""Config-driven experiment runs writing JSON reports and plot-ready CSV files."""

from __future__ import annotations

import contextlib
import csv
import json
import logging
import os
import shutil
import tempfile
import time
import warnings
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from .errors import DegeneratePairError, ValidationError
from .far_field import scattering_amplitude
from .forward import IntegralOperator, PlaneWaveContext, evaluate_psi, solve_psi_on_support
from .medium import discretize, make_potential
from .recovery import (
    estimate_decay_slope,
    period_T,
    recover_f_sequence,
    write_ray_samples_csv,
)
from .resolvent import psi_sq_from_resolvent, sample_resolvent_sq, solve_resolvent_field

__all__ = [
    "MODES",
    "PER_N_HEADER",
    "REDUCTION_HEADER",
    "GRID_HEADER",
    "ExperimentConfig",
    "RunReport",
    "validate_config",
    "run_experiment",
    "thread_limit",
]

logger = logging.getLogger(__name__)

MODES = ("forward", "recover", "convergence", "resolvent_reduction")
PER_N_HEADER = ("n", "f_hat_re", "f_hat_im", "abs_error")
REDUCTION_HEADER = ("s", "scaled_Rsq", "psi_sq_reference", "rel_defect")
GRID_HEADER = ("cells_per_side", "f_re", "f_im", "abs_change")

_REQUIRED = ("mode", "potential", "E", "k_direction", "l_direction", "cells_per_side")
_OPTIONAL = ("n_list", "s_offsets", "output_dir", "seed", "x_prime", "s_values", "grid_sweep")
_POTENTIAL_KEYS = ("dimension", "kind", "params", "support_radius")
_MODE_NEEDS = {
    "forward": (),
    "recover": ("n_list",),
    "convergence": ("n_list", "grid_sweep"),
    "resolvent_reduction": ("x_prime", "s_values"),
}
T_WARN_RATIO = 50.0
T_REFUSE_RATIO = 1e3


def _bad(key: str, constraint: str):
    raise ValidationError(f"config key {key!r}: {constraint}", "experiments")


@dataclass(frozen=True)
class ExperimentConfig:
    mode: str
    potential: dict
    E: float
    k_direction: tuple[float, ...]
    l_direction: tuple[float, ...]
    cells_per_side: int
    n_list: tuple[int, ...] = ()
    s_offsets: tuple[float, float] | None = None
    output_dir: str | None = None
    seed: int = 0
    x_prime: tuple[float, ...] | None = None
    s_values: tuple[float, ...] = ()
    grid_sweep: tuple[int, ...] = ()

    @property
    def dimension(self) -> int:
        return self.potential["dimension"]

    def wave_vectors(self) -> tuple[np.ndarray, np.ndarray]:
        root = np.sqrt(self.E)
        return root * np.array(self.k_direction), root * np.array(self.l_direction)

    def to_dict(self) -> dict:
        out = asdict(self)
        return {key: (list(v) if isinstance(v, tuple) else v) for key, v in out.items()}


def _number(raw: Mapping, key: str) -> float:
    val = raw[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)) or not np.isfinite(val):
        _bad(key, "must be a finite number")
    return float(val)


def _vector(raw: Mapping, key: str, dim: int | None = None) -> tuple[float, ...]:
    val = raw[key]
    if not isinstance(val, list) or not all(
        isinstance(v, (int, float)) and not isinstance(v, bool) and np.isfinite(v) for v in val
    ):
        _bad(key, "must be a list of finite numbers")
    if dim is not None and len(val) != dim:
        _bad(key, f"must have {dim} components")
    return tuple(float(v) for v in val)


def _int_list(raw: Mapping, key: str, minimum: int) -> tuple[int, ...]:
    val = raw[key]
    if not isinstance(val, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in val):
        _bad(key, "must be a list of integers")
    if any(v < minimum for v in val):
        _bad(key, f"entries must be >= {minimum}")
    if any(b <= a for a, b in zip(val, val[1:])):
        _bad(key, "must be strictly increasing")
    return tuple(val)


def validate_config(raw: str | Mapping[str, Any]) -> ExperimentConfig:
    """Parse and check an experiment config (JSON text or an already decoded mapping).

    Unknown keys are rejected; every error names the offending key.
    """
    if isinstance(raw, (str, bytes)):
        try:
            raw = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"config is not valid JSON: {exc}", "experiments") from None
    if not isinstance(raw, Mapping):
        raise ValidationError("config must be a JSON object", "experiments")

    unknown = sorted(set(raw) - set(_REQUIRED) - set(_OPTIONAL))
    if unknown:
        _bad(unknown[0], "unknown key")
    for key in _REQUIRED:
        if key not in raw:
            _bad(key, "is required")

    mode = raw["mode"]
    if mode not in MODES:
        _bad("mode", f"must be one of {', '.join(MODES)}")
    for key in _MODE_NEEDS[mode]:
        if key not in raw:
            _bad(key, f"is required in mode {mode!r}")

    pot = raw["potential"]
    if not isinstance(pot, Mapping):
        _bad("potential", "must be an object")
    extra = sorted(set(pot) - set(_POTENTIAL_KEYS))
    if extra:
        _bad(f"potential.{extra[0]}", "unknown key")
    for key in _POTENTIAL_KEYS:
        if key not in pot:
            _bad(f"potential.{key}", "is required")
    if pot["dimension"] not in (2, 3) or isinstance(pot["dimension"], bool):
        _bad("potential.dimension", "must be 2 or 3")
    potential_spec = {
        "dimension": int(pot["dimension"]),
        "kind": pot["kind"],
        "params": list(_vector(pot, "params")),
        "support_radius": _number(pot, "support_radius"),
    }
    potential = make_potential(**potential_spec)
    dim = potential.dimension

    E = _number(raw, "E")
    if not E > 0:
        _bad("E", "must satisfy E > 0")
    k_dir = _vector(raw, "k_direction", dim)
    l_dir = _vector(raw, "l_direction", dim)
    for key, vec in (("k_direction", k_dir), ("l_direction", l_dir)):
        if abs(np.linalg.norm(vec) - 1.0) > 1e-10:
            _bad(key, "must be a unit vector (|direction| = 1 within 1e-10)")

    cells = raw["cells_per_side"]
    if isinstance(cells, bool) or not isinstance(cells, int) or cells < 4:
        _bad("cells_per_side", "must be an integer >= 4")

    values: dict[str, Any] = {}
    if "n_list" in raw:
        values["n_list"] = _int_list(raw, "n_list", 1)
        if not values["n_list"]:
            _bad("n_list", "must not be empty")
    if "grid_sweep" in raw:
        values["grid_sweep"] = _int_list(raw, "grid_sweep", 4)
    if raw.get("s_offsets") is not None:
        values["s_offsets"] = _vector(raw, "s_offsets", 2)
    if raw.get("output_dir") is not None:
        if not isinstance(raw["output_dir"], str):
            _bad("output_dir", "must be a string path")
        values["output_dir"] = raw["output_dir"]
    if "seed" in raw:
        if isinstance(raw["seed"], bool) or not isinstance(raw["seed"], int):
            _bad("seed", "must be an integer")
        values["seed"] = raw["seed"]
    if "x_prime" in raw:
        values["x_prime"] = _vector(raw, "x_prime", dim)
        if np.linalg.norm(values["x_prime"]) <= potential.support_radius:
            _bad("x_prime", "must lie outside the support ball")
    if "s_values" in raw:
        s = _vector(raw, "s_values")
        if len(s) < 2 or any(b <= a for a, b in zip(s, s[1:])):
            _bad("s_values", "must hold at least two strictly increasing radii")
        if s[0] < 2 * potential.support_radius:
            _bad("s_values", "radii must be >= 2 * support_radius")
        values["s_values"] = s

    if mode in ("recover", "convergence"):
        k_vec = np.sqrt(E) * np.array(k_dir)
        l_vec = np.sqrt(E) * np.array(l_dir)
        try:
            T = period_T(k_vec, l_vec)
        except DegeneratePairError as exc:
            raise DegeneratePairError(
                f"config keys 'k_direction'/'l_direction': {exc}", "experiments"
            ) from None
        if T > T_REFUSE_RATIO * potential.support_radius:
            _bad("l_direction", f"period T={T:.4g} exceeds {T_REFUSE_RATIO:g} * support_radius (near-forward pair)")
        if T > T_WARN_RATIO * potential.support_radius:
            warnings.warn(f"period T={T:.4g} is large compared with the support radius", RuntimeWarning)
        if "s_offsets" in values:
            s1, s2 = values["s_offsets"]
            if not (0 <= s1 <= T and 0 <= s2 <= T):
                _bad("s_offsets", f"offsets must lie in [0, T] with T={T:.6g}")

    return ExperimentConfig(
        mode=mode,
        potential=potential_spec,
        E=E,
        k_direction=k_dir,
        l_direction=l_dir,
        cells_per_side=cells,
        **values,
    )


@dataclass
class RunReport:
    """Result of one run.  ``wall_time`` is kept out of ``report.json`` so that the file is reproducible."""

    config: dict
    f_direct: dict
    condition_estimate: float
    residual: float
    per_n: list[dict] = field(default_factory=list)
    slope: float | None = None
    period: float | None = None
    offsets: list[float] | None = None
    reduction: list[dict] = field(default_factory=list)
    grid_convergence: list[dict] = field(default_factory=list)
    wall_time: float = 0.0

    def to_json(self) -> str:
        data = asdict(self)
        data.pop("wall_time")
        return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _complex_dict(z: complex) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag, "abs": abs(z), "phase": float(np.angle(z)) if abs(z) >= 1e-14 else 0.0}


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])


@contextlib.contextmanager
def thread_limit():
    """Cap BLAS/LAPACK threads when ``PHASEREC_THREADS`` is set."""
    raw = os.environ.get("PHASEREC_THREADS")
    if not raw:
        yield
        return
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        raise ValidationError("PHASEREC_THREADS must be a positive integer", "experiments")
    from threadpoolctl import threadpool_limits

    with threadpool_limits(limits=n):
        yield


def _solve(cfg: ExperimentConfig, cells: int):
    potential = make_potential(**cfg.potential)
    grid = discretize(potential, cells)
    k, l = cfg.wave_vectors()
    operator = IntegralOperator(grid, np.sqrt(cfg.E))
    solution = solve_psi_on_support(grid, PlaneWaveContext(k, float(k @ k)), operator)
    return grid, operator, solution, l


def _recover(cfg: ExperimentConfig, solution, l, f_direct: complex, report: RunReport, out: Path):
    result = recover_f_sequence(
        solution, l=l, n_list=cfg.n_list, s_offsets=cfg.s_offsets, reference=f_direct
    )
    errors = result.errors(f_direct)
    report.per_n = [
        {"n": n, "f_hat_re": float(z.real), "f_hat_im": float(z.imag), "abs_error": float(e)}
        for n, z, e in zip(result.n_list, result.per_n_estimates, errors)
    ]
    report.period = result.samples.T
    report.offsets = [result.samples.s1, result.samples.s2]
    if len(cfg.n_list) >= 4:
        report.slope = estimate_decay_slope(result.n_list, errors)
    _write_csv(out / "per_n.csv", PER_N_HEADER, ([r[h] for h in PER_N_HEADER] for r in report.per_n))
    write_ray_samples_csv(result.samples, out / "ray_samples.csv")


def _execute(cfg: ExperimentConfig, out: Path) -> RunReport:
    grid, operator, solution, l = _solve(cfg, cfg.cells_per_side)
    f_direct = scattering_amplitude(solution, l).f
    report = RunReport(
        config=cfg.to_dict(),
        f_direct=_complex_dict(f_direct),
        condition_estimate=solution.condition,
        residual=solution.residual,
    )
    if cfg.mode in ("recover", "convergence"):
        _recover(cfg, solution, l, f_direct, report, out)
    if cfg.mode == "convergence":
        previous = None
        for cells in cfg.grid_sweep:
            _, _, sol, _ = _solve(cfg, cells)
            f = scattering_amplitude(sol, l).f
            change = float("nan") if previous is None else abs(f - previous)
            report.grid_convergence.append(
                {"cells_per_side": cells, "f_re": float(f.real), "f_im": float(f.imag), "abs_change": change}
            )
            previous = f
        # NaN is not valid JSON; first row has no predecessor
        report.grid_convergence[0]["abs_change"] = None
        _write_csv(
            out / "grid_convergence.csv",
            GRID_HEADER,
            ([r[h] if r[h] is not None else "" for h in GRID_HEADER] for r in report.grid_convergence),
        )
    if cfg.mode == "resolvent_reduction":
        k = solution.context.k
        field_ = solve_resolvent_field(grid, cfg.x_prime, cfg.E, operator)
        rsq = sample_resolvent_sq(field_, k, cfg.s_values)
        reduction = psi_sq_from_resolvent(cfg.s_values, rsq, k)
        ref = abs(evaluate_psi(solution, np.array(cfg.x_prime))) ** 2
        report.reduction = [
            {"s": s, "scaled_Rsq": float(v), "psi_sq_reference": float(ref), "rel_defect": float(abs(v - ref) / ref)}
            for s, v in zip(cfg.s_values, reduction.scaled)
        ]
        _write_csv(
            out / "reduction.csv", REDUCTION_HEADER, ([r[h] for h in REDUCTION_HEADER] for r in report.reduction)
        )
    return report


def run_experiment(config: ExperimentConfig, output_dir: str | os.PathLike | None = None) -> RunReport:
    """Run one experiment and write its files into ``output_dir``.

    Files are staged in a temporary sibling directory and moved into place
    only when the run succeeds; an existing ``output_dir`` is replaced.
    """
    target = output_dir if output_dir is not None else config.output_dir
    if target is None:
        raise ValidationError("config key 'output_dir': no output directory given", "experiments")
    target = Path(target)
    target.parent.mkdir(parents=True, exist_ok=True)
    staging = Path(tempfile.mkdtemp(prefix=f".{target.name}.", dir=target.parent))
    start = time.perf_counter()
    try:
        with thread_limit():
            report = _execute(config, staging)
        report.wall_time = time.perf_counter() - start
        (staging / "report.json").write_text(report.to_json())
        (staging / "timing.json").write_text(json.dumps({"wall_time": report.wall_time}) + "\n")
        if target.exists():
            shutil.rmtree(target)
        os.replace(staging, target)
    except BaseException:
        shutil.rmtree(staging, ignore_errors=True)
        raise
    logger.info("%s run finished in %.2fs -> %s", config.mode, report.wall_time, target)
    return report
