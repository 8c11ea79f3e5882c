import csv

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from amcs.dlevel import (
    DLevelState,
    axial_solution,
    bloch_vectors,
    evolve_d,
    expectations,
    recurrence_residual,
)
from amcs.errors import ContractError, DomainError, NumericDomainError
from amcs.fields import AxialField, ConstantField, RotatingField
from amcs.numerics import TimeGrid, mat_exp
from amcs.spin_ops import hamiltonian_d, spin_matrices
from helpers import random_complex


def _unit(v):
    return v / np.linalg.norm(v)


def test_state_validation():
    with pytest.raises(DomainError):
        DLevelState(3, 0.0, np.ones(2))
    with pytest.raises(NumericDomainError):
        DLevelState(2, 0.0, np.array([np.nan, 1]))
    assert DLevelState(2, 0.0, np.array([3, 4])).norm == 5


def test_constant_field_matches_exponential(rng):
    f = ConstantField((0.3, -0.5, 0.9))
    d = 5
    psi0 = _unit(random_complex(rng, d))
    traj = evolve_d(f, psi0, TimeGrid.linspace(0, 3, 4), 0.05)
    h = hamiltonian_d(spin_matrices(d), f(0.0))
    for state in traj:
        assert_allclose(state.psi, mat_exp(-1j * h * state.t) @ psi0, atol=1e-12)


@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_norm_is_conserved(d, seed):
    r = np.random.default_rng(seed)
    psi0 = random_complex(r, d)
    traj = evolve_d(RotatingField(1.2, 0.8, 0.1, 0.5), psi0, TimeGrid.linspace(0, 2, 3), 0.1, order=2)
    assert_allclose([s.norm for s in traj], np.linalg.norm(psi0), rtol=1e-13)


def test_trajectory_sequence_protocol(rng):
    traj = evolve_d(AxialField(1.0), np.eye(3)[0], TimeGrid.linspace(0, 1, 5), 0.1)
    assert len(traj) == 5
    assert isinstance(traj[-1], DLevelState) and traj[-1].t == 1.0
    assert len(traj[1:3]) == 2


@pytest.mark.parametrize("d", [1, 2, 4, 7])
def test_axial_closed_form(d, rng):
    f = AxialField(offset=0.5, amplitude=0.8, frequency=1.7, phase=0.4)
    c = _unit(random_complex(rng, d))
    traj = evolve_d(f, c, TimeGrid.linspace(0, 5, 11), 1e-2)
    for state in traj:
        assert_allclose(state.psi, axial_solution(d, c, f, state.t).psi, atol=1e-10)


def test_axial_solution_preconditions():
    with pytest.raises(ContractError):
        axial_solution(2, [1, 0], RotatingField(1.0), 1.0)
    with pytest.raises(DomainError):
        axial_solution(3, [1, 0], AxialField(1.0), 1.0)


@pytest.mark.parametrize("d", [2, 3, 5])
def test_recurrence_holds_on_solutions(d, rng):
    f = RotatingField(0.6, 1.1, 0.3, -0.4)
    traj = evolve_d(f, _unit(random_complex(rng, d)), TimeGrid.linspace(0, 2, 2001), 1e-3)
    res = recurrence_residual(traj, f)
    assert res.shape == (d - 1,)
    assert np.max(res) < 1e-8


def test_recurrence_detects_a_wrong_trajectory(rng):
    f = RotatingField(0.6, 1.1)
    traj = evolve_d(f, _unit(random_complex(rng, 3)), TimeGrid.linspace(0, 1, 101), 1e-2)
    wrong = evolve_d(RotatingField(0.6, 1.1, 0.0, 0.3), traj[0].psi, traj.grid, 1e-2)
    assert np.max(recurrence_residual(wrong, f)) > 1e-3


def test_recurrence_nonuniform_grid_and_guards(rng):
    f = RotatingField(0.6, 1.1)
    grid = TimeGrid(np.sort(np.concatenate([[0.0, 1.0], rng.uniform(0, 1, 400)])))
    traj = evolve_d(f, _unit(random_complex(rng, 3)), grid, 1e-3)
    assert np.max(recurrence_residual(list(traj), f)) < 1e-3
    with pytest.raises(ContractError):
        recurrence_residual(traj, AxialField(1.0))
    with pytest.raises(DomainError):
        recurrence_residual(traj[:2], f)
    assert recurrence_residual(evolve_d(f, [1.0], grid, 1e-2), f).size == 0


def test_expectations_lowest_weight():
    d = 6
    e = np.zeros(d)
    e[-1] = 1
    ex = expectations(e)
    j = (d - 1) / 2
    assert ex.s3 == pytest.approx(-j)
    assert ex.s_sq == pytest.approx(j * (j + 1))
    assert ex.var1 == pytest.approx(j / 2) and ex.var2 == pytest.approx(j / 2)
    assert ex.casimir_dispersion == pytest.approx(j, abs=1e-12)
    with pytest.raises(DomainError):
        expectations(np.zeros(3))


def test_bloch_vectors_normalize(rng):
    psi = random_complex(rng, 4, 3)
    b = bloch_vectors(psi)
    for row, v in zip(psi, b):
        assert_allclose(v, expectations(row).mean, atol=1e-14)


def test_trajectory_csv(tmp_path, rng):
    traj = evolve_d(AxialField(1.0), _unit(random_complex(rng, 2)), TimeGrid.linspace(0, 1, 3), 0.1)
    path = tmp_path / "psi.csv"
    traj.to_csv(path)
    rows = list(csv.reader(path.read_text().splitlines()))
    assert rows[0] == ["t", "re_psi1", "im_psi1", "re_psi2", "im_psi2", "S1", "S2", "S3"]
    assert complex(float(rows[3][1]), float(rows[3][2])) == traj.psi[2, 0]
