"""
Plane-wave scattering by a disc
===============================

A constant disc potential is discretized on a square grid and the
Lippmann-Schwinger equation is solved for the total field.  The scattering
amplitude converges under grid refinement and approaches the Born value
when the potential is weak.
"""

import numpy as np

from phaserec import (
    PlaneWaveContext,
    born_amplitude,
    discretize,
    evaluate_psi,
    make_potential,
    scattering_amplitude,
    solve_psi_on_support,
)
from phaserec.far_field import leading_field

k = np.array([1.0, 0.0])
l = np.array([0.0, 1.0])
context = PlaneWaveContext(k, E=1.0)
disc = make_potential(2, "disc_constant", [0.5, 1.0], support_radius=1.0)

# %%
# Grid refinement of f(k, l)
previous = None
for cells in (16, 24, 32, 48):
    grid = discretize(disc, cells)
    solution = solve_psi_on_support(grid, context)
    f = scattering_amplitude(solution, l).f
    change = "" if previous is None else f"  change {abs(f - previous):.2e}"
    print(f"{cells:3d}^2 grid, {grid.size:5d} cells: f = {f:.6f}  cond {solution.condition:.2f}{change}")
    previous = f

print(f"Born approximation: {born_amplitude(disc, k, l):.6f}")

# %%
# Far from the scatterer the field is a plane wave plus an outgoing circular wave
entry = scattering_amplitude(solution, l)
for s in (10.0, 100.0, 1000.0):
    x = s * l
    print(f"|x| = {s:6.0f}: |psi - psi_1| = {abs(evaluate_psi(solution, x) - leading_field(entry, x, k)):.2e}")

# %%
# Weak scattering: f / eps tends to the Born amplitude of the unit profile
unit = make_potential(2, "truncated_gaussian", [1.0, 0.5], 2.0)
f_born = born_amplitude(unit, k, l)
for eps in (0.2, 0.1, 0.05):
    weak = make_potential(2, "truncated_gaussian", [eps, 0.5], 2.0)
    f = scattering_amplitude(solve_psi_on_support(discretize(weak, 32), context), l).f
    print(f"eps = {eps:4.2f}: |f - eps f_B| / eps^2 = {abs(f - eps * f_born) / eps**2:.5f}")

# %%
# Acoustic media: a refraction index n(x) at frequency omega maps to the
# potential (1 - n^2)(omega/c0)^2 at energy E = (omega/c0)^2
from phaserec import acoustic_to_potential  # noqa: E402


def lens(pts):
    r2 = np.sum(pts**2, axis=-1)
    return np.where(r2 < 0.64, 1.0 + 0.1 * (1.0 - r2 / 0.64) ** 2, 1.0)


acoustic, E = acoustic_to_potential(lens, omega=1.5, c0=1.0, support_radius=1.0)
k_ac = np.sqrt(E) * np.array([1.0, 0.0])
l_ac = np.sqrt(E) * np.array([0.0, 1.0])
sol = solve_psi_on_support(discretize(acoustic, 32), PlaneWaveContext(k_ac, E))
print(f"acoustic lens at E = {E}: f = {scattering_amplitude(sol, l_ac).f:.6f}")
