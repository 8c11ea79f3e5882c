import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from amcs.coherent import (
    amcs_amplitudes,
    amcs_norm_sq,
    amcs_trajectory,
    annihilators,
    apply_annihilator,
    block_amplitudes,
    cs_representation,
    glauber_block,
    unit_block_amplitudes,
)
from amcs.dlevel import evolve_d
from amcs.errors import ContractError, DomainError
from amcs.fields import ConstantField, RotatingField
from amcs.fock import build_fock
from amcs.numerics import TimeGrid
from amcs.spin2 import solve_w, w_constant_field
from helpers import random_complex, random_unitary


def test_constant_field_spin_half():
    omega0, t = 0.9, 2.3
    Z = np.array([0.4 + 0.3j, -1.1 + 0.2j])
    st_ = amcs_amplitudes(2, Z, w_constant_field(omega0, t))
    pref = math.exp(-np.vdot(Z, Z).real / 2)
    expected = pref * np.array([Z[0] * np.exp(-1j * omega0 * t), Z[1] * np.exp(1j * omega0 * t)])
    assert_allclose(st_.psi, expected, atol=1e-15)


def test_initial_state_is_glauber_block():
    Z = np.array([0.5, 0.2 - 0.7j])
    assert_allclose(amcs_amplitudes(4, Z).psi, glauber_block(4, Z))


def _brute_norm(d, r1, r2):
    # exact rational sum of |Z1|^(2(d-a)) |Z2|^(2(a-1)) / ((a-1)! (d-a)!)
    s = sum(Fraction(r1) ** (d - a) * Fraction(r2) ** (a - 1) / (math.factorial(a - 1) * math.factorial(d - a))
            for a in range(1, d + 1))
    return float(s) * math.exp(-(r1 + r2))


@pytest.mark.parametrize("d", [1, 2, 3, 6, 11])
def test_norm_exponent_by_brute_force(d):
    r1, r2 = Fraction(9, 10), Fraction(13, 10)
    brute = _brute_norm(d, r1, r2)
    assert amcs_norm_sq(d, [math.sqrt(r1), 1j * math.sqrt(r2)]) == pytest.approx(brute, rel=1e-13)
    # the same formula with |Z|^(d-1) instead of |Z|^(2(d-1)) is wrong for d > 1
    half = math.exp(-2.2) * 2.2 ** ((d - 1) / 2) / math.factorial(d - 1)
    assert (d == 1) == (abs(half - brute) < 1e-12)


@given(st.integers(1, 25), st.integers(0, 2**32 - 1))
def test_block_norm_matches_amplitudes(d, seed):
    r = np.random.default_rng(seed)
    Z = random_complex(r, 2)
    Z *= r.uniform(0, 3) / np.linalg.norm(Z)
    state = amcs_amplitudes(d, Z, random_unitary(r))
    assert abs(state.norm_sq() - amcs_norm_sq(d, Z)) <= 1e-12


def test_block_norms_sum_to_one():
    Z = np.array([1.5, -1j])
    total = sum(amcs_norm_sq(d, Z) for d in range(1, 60))
    assert total == pytest.approx(1.0, abs=1e-14)
    assert amcs_norm_sq(1, [0, 0]) == 1.0 and amcs_norm_sq(3, [0, 0]) == 0.0


@pytest.mark.parametrize("d", [29, 30, 31, 45])
def test_large_blocks_against_high_precision(d):
    zt = np.array([2.0 + 1.0j, -1.5 + 0.5j])
    r2 = float(np.vdot(zt, zt).real)
    mpmath.mp.dps = 30
    ref = [
        complex(mpmath.exp(-r2 / 2) * mpmath.mpc(zt[0]) ** (d - a) * mpmath.mpc(zt[1]) ** (a - 1)
                / mpmath.sqrt(mpmath.factorial(a - 1) * mpmath.factorial(d - a)))
        for a in range(1, d + 1)
    ]
    assert_allclose(block_amplitudes(d, zt, r2), ref, rtol=1e-12)


def test_zero_components():
    out = block_amplitudes(3, np.array([0.0, 1.0]), 1.0)
    assert_allclose(out, [0, 0, math.exp(-0.5) / math.sqrt(2)])
    out = block_amplitudes(40, np.array([0.0, 1.0]), 1.0)
    assert out[-1] != 0 and np.all(out[:-1] == 0)


def test_unit_amplitudes_are_normalized_for_huge_blocks():
    v = unit_block_amplitudes(2000, np.array([3.0, 4.0j]))
    assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(DomainError):
        unit_block_amplitudes(3, np.zeros(2))
    assert_allclose(unit_block_amplitudes(1, np.zeros(2)), [1.0])


def _fock_coherent(ops, zt, z_abs_sq):
    return np.array([
        math.exp(-z_abs_sq / 2) * zt[0] ** n1 * zt[1] ** n2 / math.sqrt(math.factorial(n1) * math.factorial(n2))
        for n1, n2 in ops.basis.states
    ])


def test_ladder_property_against_fock_oracle(rng):
    n_max = 10
    ops = build_fock(n_max)
    Z = np.array([0.8 - 0.3j, 0.5 + 0.9j])
    w = random_unitary(rng)
    zt = w.conj().T @ Z
    psi = _fock_coherent(ops, zt, float(np.vdot(Z, Z).real))
    for alpha in (0, 1):
        A = w[alpha, 0] * ops.a1 + w[alpha, 1] * ops.a2
        lowered = A @ psi
        for d in range(2, n_max + 1):
            idx = ops.basis.block(d - 1)
            state = amcs_amplitudes(d, Z, w)
            assert_allclose(lowered[idx], apply_annihilator(state, alpha + 1), atol=1e-14)
            assert_allclose(lowered[idx], Z[alpha] * amcs_amplitudes(d - 1, Z, w).psi, atol=1e-14)


def test_annihilator_blocks():
    a1, a2 = annihilators(3)
    assert_allclose(a1, [[math.sqrt(2), 0, 0], [0, 1, 0]])
    assert_allclose(a2, [[0, 1, 0], [0, 0, math.sqrt(2)]])
    vac = amcs_amplitudes(1, [0.3, 0.4])
    assert apply_annihilator(vac, 1).size == 0
    with pytest.raises(DomainError):
        apply_annihilator(vac, 3)


def test_coherent_blocks_solve_the_d_level_equation():
    f = RotatingField(0.7, 1.4, 0.3, 0.5)
    grid = TimeGrid.linspace(0, 4, 9)
    Z = np.array([1.0 + 0.5j, -0.6j])
    traj = solve_w(f, grid, 1e-3)
    for d in (2, 4, 7):
        amcs = amcs_trajectory(d, Z, traj)
        direct = evolve_d(f, amcs[0], grid, 1e-3).psi
        assert_allclose(amcs, direct, atol=1e-12)


def test_cs_representation_series(rng):
    Z = np.array([0.7 + 0.2j, -0.4 + 0.5j])
    z = np.array([0.3 - 0.6j, 0.9 + 0.1j])
    w = random_unitary(rng)
    series = sum(np.vdot(glauber_block(d, z), amcs_amplitudes(d, Z, w).psi) for d in range(1, 40))
    assert cs_representation(z, Z, w) == pytest.approx(series, abs=1e-14)
    assert cs_representation(Z, Z) == pytest.approx(1.0)


def test_contracts():
    with pytest.raises(ContractError):
        amcs_amplitudes(2, [1, 0], np.array([[2, 0], [0, 1]]))
    with pytest.raises(DomainError):
        amcs_amplitudes(0, [1, 0])
    traj = solve_w(ConstantField.from_omega0(1.0), TimeGrid.linspace(0, 1, 3), 0.1)
    assert amcs_trajectory(3, [1, 1j], traj).shape == (3, 3)
