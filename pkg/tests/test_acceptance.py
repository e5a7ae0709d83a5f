"""Acceptance gate: one test per criterion, each recording a PASS/FAIL summary line."""

import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES, K2, L2
from oracles import j0_series, y0_series
from phaserec import (
    PlaneWaveContext,
    RaySampleSet,
    background_a0,
    bessel_j0,
    bessel_y0,
    born_amplitude,
    discretize,
    evaluate_psi,
    evaluate_resolvent,
    farfield_constant,
    make_potential,
    period_T,
    phaseless_a,
    reciprocity_defect,
    recover_f_at_n,
    scattering_amplitude,
    solve_psi_on_support,
    solve_resolvent_field,
)
from phaserec.experiments import run_experiment, validate_config
from phaserec.recovery import offset_sine, synthetic_a0
from phaserec.resolvent import psi_sq_from_resolvent, sample_resolvent_sq

DISC_2D = {"dimension": 2, "kind": "disc_constant", "params": [0.5, 1.0], "support_radius": 1.0}
BALL_3D = {"dimension": 3, "kind": "disc_constant", "params": [0.3, 1.0], "support_radius": 1.0}
RECOVER_2D = {
    "mode": "recover",
    "potential": DISC_2D,
    "E": 1.0,
    "k_direction": [1.0, 0.0],
    "l_direction": [0.0, 1.0],
    "cells_per_side": 48,
    "n_list": [2, 4, 8, 16, 32, 64],
}


def record(number: int, title: str, passed: bool, detail: str, elapsed: float) -> None:
    status = "PASS" if passed else "FAIL"
    ACCEPTANCE_LINES.append(f"[{status}] {number:2d}. {title}: {detail} ({elapsed:.2f} s)")


@pytest.fixture(autouse=True)
def _ensure_summary_line(request):
    before = len(ACCEPTANCE_LINES)
    yield
    if len(ACCEPTANCE_LINES) == before:
        ACCEPTANCE_LINES.append(f"[FAIL] {request.node.name}: raised before reaching its check")


@pytest.fixture(scope="module")
def recover_run(tmp_path_factory):
    start = time.perf_counter()
    out = tmp_path_factory.mktemp("acceptance") / "run2"
    report = run_experiment(validate_config(RECOVER_2D), out)
    return report, out, time.perf_counter() - start


def test_criterion_01_noiseless_exactness():
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    worst, draws = 0.0, 0
    while draws < 1000:
        d = int(rng.choice([2, 3]))
        E = rng.uniform(0.2, 20.0)
        theta = rng.uniform(0.05, np.pi)
        k = np.sqrt(E) * np.eye(d)[0]
        l = np.sqrt(E) * (np.cos(theta) * np.eye(d)[0] + np.sin(theta) * np.eye(d)[1])
        T = period_T(k, l)
        s1, s2 = rng.uniform(0.0, T, 2)
        if abs(offset_sine(T, s1, s2)) < 0.1:
            continue
        # round-off in forming s + nT grows like eps * n; n <= 1000 keeps it below 1e-10
        n = int(rng.integers(1, 1001))
        f = rng.uniform(0.0, 3.0) * np.exp(1j * rng.uniform(-np.pi, np.pi))
        constant = farfield_constant(d, np.sqrt(E))
        a = synthetic_a0([s1 + n * T, s2 + n * T], T, abs(f), np.angle(f), constant)
        samples = RaySampleSet(k, l, T, s1, s2, (n,), a[None, :])
        worst = max(worst, abs(recover_f_at_n(samples, n, constant) - f))
        draws += 1
    elapsed = time.perf_counter() - start
    passed = worst < 1e-10 and elapsed < 1.0
    record(1, "noiseless inversion exactness", passed, f"max error {worst:.2e} over 1000 draws (< 1e-10)", elapsed)
    assert worst < 1e-10
    assert elapsed < 1.0


def test_criterion_02_rate_2d(recover_run):
    report, out, elapsed = recover_run
    errors = np.array([row["abs_error"] for row in report.per_n])
    decreasing = bool(np.all(np.diff(errors[1:]) < 0))
    slope = report.slope
    passed = decreasing and -0.9 <= slope <= -0.25 and len(errors) == 6 and elapsed <= 120
    record(
        2,
        "2D decay rate",
        passed,
        f"slope {slope:.3f} in [-0.9, -0.25], strictly decreasing from n=4: {decreasing}",
        elapsed,
    )
    assert len((out / "per_n.csv").read_text().splitlines()) == 7
    assert decreasing
    assert -0.9 <= slope <= -0.25
    assert elapsed <= 120


def test_criterion_03_rate_3d(tmp_path):
    start = time.perf_counter()
    cfg = dict(
        RECOVER_2D,
        potential=BALL_3D,
        k_direction=[1.0, 0.0, 0.0],
        l_direction=[0.0, 1.0, 0.0],
        cells_per_side=16,
        n_list=[2, 4, 8, 16, 32],
    )
    report = run_experiment(validate_config(cfg), tmp_path / "run3")
    elapsed = time.perf_counter() - start
    slope = report.slope
    passed = -1.4 <= slope <= -0.6 and elapsed <= 600
    record(3, "3D decay rate", passed, f"slope {slope:.3f} in [-1.4, -0.6]", elapsed)
    assert -1.4 <= slope <= -0.6
    assert elapsed <= 600


def test_criterion_04_born_consistency():
    start = time.perf_counter()
    unit = make_potential(2, "truncated_gaussian", [1.0, 0.5], 2.0)
    f_born = born_amplitude(unit, K2, L2)
    scaled = []
    for eps in (0.2, 0.1, 0.05):
        grid = discretize(make_potential(2, "truncated_gaussian", [eps, 0.5], 2.0), 32)
        f = scattering_amplitude(solve_psi_on_support(grid, PlaneWaveContext(K2, 1.0)), L2).f
        scaled.append(abs(f - eps * f_born) / eps**2)
    ratio = max(scaled) / min(scaled)
    elapsed = time.perf_counter() - start
    passed = ratio < 3 and elapsed <= 60
    detail = "|f - eps f_B|/eps^2 = " + ", ".join(f"{v:.4g}" for v in scaled) + f"; max/min {ratio:.3f} (< 3)"
    record(4, "Born consistency", passed, detail, elapsed)
    assert ratio < 3
    assert elapsed <= 60


def test_criterion_05_constant_and_branch():
    start = time.perf_counter()
    c3 = farfield_constant(3, 1.0).c
    const_err = abs(c3 - (-2 * np.pi**2))

    eps = 0.01
    weak = make_potential(2, "truncated_gaussian", [eps, 0.5], 2.0)
    solution = solve_psi_on_support(discretize(weak, 32), PlaneWaveContext(K2, 1.0))
    radii = 2000.0 + 0.37 * np.arange(9)
    x = radii[:, None] * L2[None, :]
    prefactor = (evaluate_psi(solution, x) - np.exp(1j * x @ K2)) * np.sqrt(radii) * np.exp(-1j * radii)
    fitted = np.mean(prefactor)
    c2 = farfield_constant(2, 1.0).c
    expected = c2 * born_amplitude(weak, K2, L2)
    branch_err = abs(fitted - expected) / abs(expected)
    # the other square-root branch flips the sign of c and must be far off
    other_branch_err = abs(fitted + expected) / abs(expected)
    elapsed = time.perf_counter() - start
    passed = const_err <= 1e-12 and branch_err < 0.02 and other_branch_err > 1 and elapsed <= 60
    record(
        5,
        "far-field constant and branch",
        passed,
        f"|c3 + 2 pi^2| = {const_err:.1e} (<= 1e-12); 2D prefactor mismatch {branch_err:.2%} (< 2%)",
        elapsed,
    )
    assert const_err <= 1e-12
    assert branch_err < 0.02
    assert other_branch_err > 1
    assert elapsed <= 60


def test_criterion_06_reciprocity():
    start = time.perf_counter()
    x, xp = np.array([2.0, 1.0]), np.array([-1.5, 2.5])
    zero = discretize(make_potential(2, "disc_constant", [0.0, 1.0], 1.0), 16)
    disc = make_potential(**DISC_2D)
    d_zero = reciprocity_defect(zero, x, xp, 1.0)
    defects = {n: reciprocity_defect(discretize(disc, n), x, xp, 1.0) for n in (24, 32, 48)}
    # the discrete operator is symmetric, so every defect sits at round-off;
    # refinement is checked as "no growth beyond the round-off floor of |R|"
    field = solve_resolvent_field(discretize(disc, 48), xp, 1.0)
    floor = 1e-14 * abs(evaluate_resolvent(field, x))
    not_growing = defects[48] <= max(defects[32], floor) and defects[32] <= max(defects[24], floor)
    elapsed = time.perf_counter() - start
    passed = d_zero < 1e-12 and defects[32] < 1e-5 and not_growing and elapsed <= 120
    record(
        6,
        "reciprocity",
        passed,
        f"v=0: {d_zero:.1e} (< 1e-12); 24^2/32^2/48^2: {defects[24]:.1e}/{defects[32]:.1e}/"
        f"{defects[48]:.1e} (32^2 < 1e-5, non-increasing above round-off floor {floor:.1e})",
        elapsed,
    )
    assert d_zero < 1e-12
    assert defects[32] < 1e-5
    assert not_growing
    assert elapsed <= 120


def test_criterion_07_resolvent_reduction(tmp_path):
    start = time.perf_counter()
    k3 = np.array([1.0, 0.0, 0.0])
    zero3 = discretize(make_potential(3, "disc_constant", [0.0, 1.0], 1.0), 6)
    field = solve_resolvent_field(zero3, [1.5, -2.0, 0.5], 1.0)
    s = np.array([50.0, 100.0, 200.0])
    rsq = sample_resolvent_sq(field, k3, s)
    dev = np.abs(psi_sq_from_resolvent(s, rsq, k3).scaled - 1.0)
    ratios = dev[:-1] / dev[1:]
    halving = bool(np.all((ratios >= 1.6) & (ratios <= 2.4)))

    s_long = np.array([50.0, 100.0, 200.0, 400.0, 800.0])
    printed = psi_sq_from_resolvent(
        s_long, sample_resolvent_sq(field, k3, s_long), k3, scaling="printed"
    ).scaled
    printed_diverges = abs(printed[-1] - 1.0) > 0.5 and abs(printed[-1] - 1.0) > abs(printed[0] - 1.0)

    cfg = {
        "mode": "resolvent_reduction",
        "potential": DISC_2D,
        "E": 1.0,
        "k_direction": [1.0, 0.0],
        "l_direction": [0.0, 1.0],
        "cells_per_side": 32,
        "x_prime": [-1.5, 2.5],
        "s_values": [250.0, 500.0, 1000.0],
    }
    report = run_experiment(validate_config(cfg), tmp_path / "run7")
    rel = report.reduction[-1]["rel_defect"]
    elapsed = time.perf_counter() - start
    passed = halving and rel < 0.05 and printed_diverges and elapsed <= 120
    record(
        7,
        "resolvent reduction",
        passed,
        f"3D halving ratios {ratios[0]:.3f}, {ratios[1]:.3f} in [1.6, 2.4]; 2D rel. defect at s=1000 "
        f"{rel:.2%} (< 5%); printed scaling at s=800 gives {printed[-1]:.3g} (not -> 1)",
        elapsed,
    )
    assert halving
    assert rel < 0.05
    assert printed_diverges
    assert elapsed <= 120


def test_criterion_08_remainder_bound(disc2d_48, f_disc2d_48):
    start = time.perf_counter()
    s = np.array([128.0, 256.0, 512.0, 1024.0])
    x = s[:, None] * L2[None, :]
    a = phaseless_a(disc2d_48, x)
    a0 = np.array([background_a0(f_disc2d_48, xi, K2) for xi in x])
    scaled = np.abs(a - a0) * np.sqrt(s)
    ratio = scaled.max() / scaled.min()
    elapsed = time.perf_counter() - start
    passed = ratio < 5 and elapsed <= 60
    detail = "delta_a * s^1/2 = " + ", ".join(f"{v:.4f}" for v in scaled) + f"; max/min {ratio:.3f} (< 5)"
    record(8, "remainder decay bound", passed, detail, elapsed)
    assert ratio < 5
    assert elapsed <= 60


def test_criterion_09_special_functions():
    x = np.linspace(0.1, 20.0, 200)
    j_ref = np.array([j0_series(v) for v in x])
    y_ref = np.array([y0_series(v) for v in x])
    start = time.perf_counter()
    j, y = bessel_j0(x), bessel_y0(x)
    elapsed = time.perf_counter() - start
    err = max(np.max(np.abs(j - j_ref)), np.max(np.abs(y - y_ref)))
    passed = err < 1e-8 and elapsed < 1.0
    record(9, "special-function accuracy", passed, f"max |error| {err:.1e} on 200 points (< 1e-8)", elapsed)
    assert err < 1e-8
    assert elapsed < 1.0


def test_criterion_10_determinism(recover_run, tmp_path):
    _, first, _ = recover_run
    start = time.perf_counter()
    run_experiment(validate_config(RECOVER_2D), tmp_path / "again")
    elapsed = time.perf_counter() - start
    same = (first / "report.json").read_bytes() == (tmp_path / "again" / "report.json").read_bytes()
    record(10, "determinism", same, f"report.json byte-identical across runs: {same}", elapsed)
    assert same
