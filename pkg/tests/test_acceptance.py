"""Exit criteria of the package, one test per criterion at its stated tolerance.

A PASS/FAIL line per criterion is printed in the terminal summary.
"""

import math
import time
from fractions import Fraction

import numpy as np
import pytest

from amcs.benchmark import bench
from amcs.coherent import amcs_amplitudes, amcs_norm_sq, amcs_trajectory, apply_annihilator
from amcs.dlevel import axial_solution, evolve_d, recurrence_residual
from amcs.fields import AxialField, ConstantField, RotatingField
from amcs.fock import build_fock, project_block
from amcs.numerics import TimeGrid, commutator
from amcs.pscs import (
    amcs_to_pscs,
    casimir_dispersion,
    dinverse_coefficient,
    dinverse_reduction,
    dispersion_saturation,
    pscs_state,
    resolution_of_identity,
)
from amcs.spin2 import solve_w, w_constant_field
from amcs.spin_ops import casimir, spin_matrices
from helpers import random_complex

OMEGA0 = 1.0
PRESETS = {
    "constant": ConstantField((0.4, -0.3, 2 * OMEGA0)),
    "rotating": RotatingField(amplitude=0.8, frequency=1.3, phase=0.2, bz=2 * OMEGA0),
}
AXIAL_PRESETS = {
    "constant axial": ConstantField.from_omega0(OMEGA0),
    "cosine axial": AxialField(offset=1.0, amplitude=0.5, frequency=1.5, phase=0.3),
}


def _random_Z(rng, max_abs=2.0):
    z = random_complex(rng, 2)
    return rng.uniform(0.3, max_abs) * z / np.linalg.norm(z)


@pytest.mark.acceptance("1 oracle equality")
def test_oracle_equality():
    start = time.perf_counter()
    ops = build_fock(20)
    worst = 0.0
    for d in range(1, 22):
        proj, ref = project_block(ops, d), spin_matrices(d)
        for a, b in zip(proj.components() + (proj.s_plus, proj.s_minus),
                        ref.components() + (ref.s_plus, ref.s_minus)):
            worst = max(worst, float(np.max(np.abs(a - b))))
    elapsed = time.perf_counter() - start
    print(f"oracle deviation {worst:.2e}, {elapsed:.2f} s")
    assert worst <= 1e-13
    assert elapsed < 5.0


@pytest.mark.acceptance("2 algebra")
def test_algebra():
    worst = 0.0
    for d in range(1, 41):
        ops = spin_matrices(d)
        s = ops.components()
        for i in range(3):
            worst = max(worst, np.max(np.abs(commutator(s[i], s[(i + 1) % 3]) - 1j * s[(i + 2) % 3])))
        worst = max(worst, np.max(np.abs(casimir(ops) - ops.j * (ops.j + 1) * np.eye(d))))
    assert worst <= 1e-12


@pytest.mark.acceptance("3 constant field")
@pytest.mark.parametrize("omega0", [1.0, 2.5])
def test_constant_field(omega0):
    t1 = 20.0 / omega0
    grid = TimeGrid.linspace(0.0, t1, 2001)
    traj = solve_w(ConstantField.from_omega0(omega0), grid, 1e-3 / omega0)
    assert np.max(np.abs(traj.w - w_constant_field(omega0, grid.samples))) <= 1e-10
    Z = np.array([0.9 - 0.2j, 0.4 + 0.7j])
    pref = math.exp(-np.vdot(Z, Z).real / 2)
    psi = amcs_trajectory(2, Z, traj)
    phase = np.exp(1j * omega0 * grid.samples)
    expected = pref * np.stack([Z[0] / phase, Z[1] * phase], axis=1)
    assert np.max(np.abs(psi - expected)) <= 1e-10


@pytest.mark.acceptance("4 cross-validation")
@pytest.mark.parametrize("preset", sorted(PRESETS))
def test_cross_validation(preset, rng):
    field = PRESETS[preset]
    grid = TimeGrid.linspace(0.0, 20.0 / OMEGA0, 401)
    traj = solve_w(field, grid, 1e-3)
    for d in (2, 3, 5, 10):
        Z = _random_Z(rng)
        amcs = amcs_trajectory(d, Z, traj)
        direct = evolve_d(field, amcs[0], grid, 1e-3).psi
        overlap = np.abs(np.einsum("na,na->n", amcs.conj(), direct))
        overlap /= np.linalg.norm(amcs, axis=1) * np.linalg.norm(direct, axis=1)
        assert np.max(1 - overlap) <= 1e-8


@pytest.mark.acceptance("5 ladder property")
def test_ladder_property(rng):
    times = np.sort(rng.uniform(0.1, 10.0, 10))
    grid = TimeGrid(np.concatenate([[0.0], times]))
    traj = solve_w(PRESETS["rotating"], grid, 1e-3)
    Z = _random_Z(rng)
    worst = 0.0
    for w in traj.w[1:]:
        for d in range(2, 16):
            state = amcs_amplitudes(d, Z, w)
            lower = amcs_amplitudes(d - 1, Z, w).psi
            for alpha in (1, 2):
                worst = max(worst, np.linalg.norm(apply_annihilator(state, alpha) - Z[alpha - 1] * lower))
    assert worst <= 1e-12


@pytest.mark.acceptance("6 norms")
@pytest.mark.parametrize("radius", [0.5, 2.0, 5.0])
def test_norms(radius, rng):
    # brute-force confirmation of the exponent with exact rationals
    r1, r2 = Fraction(3, 7), Fraction(5, 4)
    for d in range(1, 9):
        brute = sum(r1 ** (d - a) * r2 ** (a - 1) / (math.factorial(a - 1) * math.factorial(d - a))
                    for a in range(1, d + 1))
        claimed = (r1 + r2) ** (d - 1) / math.factorial(d - 1)
        assert brute == claimed
    z = random_complex(rng, 2)
    Z = radius * z / np.linalg.norm(z)
    for d in range(1, 30):
        state = amcs_amplitudes(d, Z, np.eye(2))
        assert abs(state.norm_sq() - amcs_norm_sq(d, Z)) <= 1e-12
    total, d = 0.0, 1
    while True:
        term = amcs_norm_sq(d, Z)
        total += term
        if d > radius**2 and term < 1e-12:
            break
        d += 1
    assert abs(total - 1.0) <= 1e-11


@pytest.mark.acceptance("7 bridge")
def test_bridge(rng):
    grid = TimeGrid.linspace(0.0, 6.0, 13)
    traj = solve_w(PRESETS["rotating"], grid, 1e-3)
    labels = [_random_Z(rng) for _ in range(3)]
    # a label whose rotated second component is tiny but above the chart floor
    w = traj.w[5]
    labels.append(w @ np.array([1.2, 2e-6j]))
    checked = 0
    for Z in labels:
        for wk in traj.w:
            for d in range(1, 13):
                state = amcs_amplitudes(d, Z, wk)
                if abs(state.Z_tilde[1]) < 1e-6:
                    continue
                zeta, pref = amcs_to_pscs(state)
                assert np.linalg.norm(state.psi - pref * pscs_state(d, zeta).psi) <= 1e-10
                checked += 1
    assert checked > 500


@pytest.mark.acceptance("8 inverse displacement reduction")
def test_dinverse(rng):
    grid = TimeGrid.linspace(0.0, 5.0, 6)
    traj = solve_w(PRESETS["rotating"], grid, 1e-3)
    for _ in range(3):
        Z = _random_Z(rng)
        for w in traj.w:
            for d in range(1, 13):
                state = amcs_amplitudes(d, Z, w)
                coef, rest = dinverse_reduction(state)
                assert rest <= 1e-10
                assert abs(coef - dinverse_coefficient(state)) <= 1e-10


@pytest.mark.acceptance("9 resolution of identity")
def test_resolution_of_identity():
    start = time.perf_counter()
    for d in range(1, 7):
        assert resolution_of_identity(d, 256, 256).deviation <= 1e-6
    with pytest.warns(UserWarning):
        errs = [resolution_of_identity(6, n, n).deviation for n in (2, 3, 4, 5)]
    assert all(b < a for a, b in zip(errs, errs[1:]))
    assert time.perf_counter() - start < 30.0


@pytest.mark.acceptance("10 dispersions")
def test_dispersions(rng):
    for d in range(1, 21):
        assert abs(casimir_dispersion(d) - (d - 1) / 2) <= 1e-12
    for d in range(2, 13):
        target = ((d - 1) / 4) ** 2
        for zeta in list(random_complex(rng, 3)) + [0.0, 5.0 - 3.0j]:
            lhs, rhs = dispersion_saturation(d, zeta)
            assert abs(lhs - rhs) <= 1e-10 and abs(lhs - target) <= 1e-10


@pytest.mark.acceptance("11 axial closed form")
@pytest.mark.parametrize("preset", sorted(AXIAL_PRESETS))
def test_axial_closed_form(preset, rng):
    field = AXIAL_PRESETS[preset]
    grid = TimeGrid.linspace(0.0, 20.0, 41)
    for d in range(1, 11):
        c = random_complex(rng, d)
        c /= np.linalg.norm(c)
        traj = evolve_d(field, c, grid, 1e-3)
        for state in traj:
            assert np.max(np.abs(state.psi - axial_solution(d, c, field, state.t).psi)) <= 1e-9


@pytest.mark.acceptance("12 recurrence")
@pytest.mark.parametrize("preset", sorted(PRESETS))
def test_recurrence(preset, rng):
    field = PRESETS[preset]
    grid = TimeGrid.linspace(0.0, 3.0, 3001)
    fm = np.abs(0.5 * (field(grid.samples)[:, 0] - 1j * field(grid.samples)[:, 1]))
    assert fm.min() >= 0.1
    for d in (2, 3, 5, 8):
        psi0 = amcs_amplitudes(d, _random_Z(rng)).normalized()
        traj = evolve_d(field, psi0, grid, 1e-3)
        assert np.max(recurrence_residual(traj, field)) <= 1e-6


@pytest.mark.acceptance("13 benchmark")
def test_benchmark():
    table = bench([2, 8, 32, 128, 512], horizon=0.2, step=0.05, repeats=5)
    print()
    print(table.format())
    ratio_512 = table.rows[-1].ratio
    print(f"speedup at d=512: {ratio_512:.1f}x ({'above' if ratio_512 > 5 else 'BELOW'} 5x)")
    assert all(r.infidelity <= 1e-8 for r in table.rows)
    assert table.is_monotone()
