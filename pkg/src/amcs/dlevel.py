"""Direct integration of the d-level angular momentum equation.

``i dpsi_a/dt = sum_b H_ab(t) psi_b`` with ``H = s^(d).F(t)``, written out:

* ``a = 1``:  ``(d-1) F0 psi_1 + sqrt(d-1) F(-) psi_2``
* ``1 < a < d``: ``sqrt((a-1)(d-a+1)) F(+) psi_(a-1) + (d-2a+1) F0 psi_a + sqrt(a(d-a)) F(-) psi_(a+1)``
* ``a = d``:  ``-(d-1) F0 psi_d + sqrt(d-1) F(+) psi_(d-1)``

This path is independent of the coherent-state construction and serves as
its cross-check.
"""

from __future__ import annotations

import csv
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .errors import ContractError, DomainError, NumericDomainError
from .fields import FieldProfile, circular_components, primitive_xi
from .numerics import TimeGrid, propagate
from .spin_ops import casimir, hamiltonian_d, spin_matrices


@dataclass(frozen=True)
class DLevelState:
    d: int
    t: float
    psi: np.ndarray

    def __post_init__(self):
        psi = np.asarray(self.psi, dtype=np.complex128)
        if psi.shape != (self.d,):
            raise DomainError(f"expected {self.d} amplitudes, got shape {psi.shape}")
        if not np.all(np.isfinite(psi)):
            raise NumericDomainError("state has non-finite amplitudes")
        object.__setattr__(self, "psi", psi)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.psi))


class DLevelTrajectory(Sequence):
    """Samples of a d-level state on a time grid; indexing yields :class:`DLevelState`."""

    def __init__(self, grid: TimeGrid, psi: np.ndarray):
        self.grid = grid
        self.psi = psi  # (n, d)
        self.d = psi.shape[1]

    @property
    def times(self):
        return self.grid.samples

    def __len__(self):
        return len(self.grid)

    def __getitem__(self, k):
        if isinstance(k, slice):
            return [self[i] for i in range(*k.indices(len(self)))]
        return DLevelState(self.d, float(self.times[k]), self.psi[k])

    def to_csv(self, path) -> None:
        """Columns ``t, re_psi1, im_psi1, ..., <S1>, <S2>, <S3>``."""
        write_state_csv(path, self.times, self.psi, with_expectations=True)


def evolve_d(field: FieldProfile, psi0, grid: TimeGrid, step: float, order: int = 4) -> DLevelTrajectory:
    """Norm-preserving integration of the d-level equation from ``psi0`` at ``grid.t0``."""
    psi = psi0.psi if isinstance(psi0, DLevelState) else np.asarray(psi0, dtype=np.complex128)
    d = psi.shape[0]
    ops = spin_matrices(d)

    def generator(t):
        return hamiltonian_d(ops, field(t))

    out = propagate(generator, psi, grid, step, order=order)
    return DLevelTrajectory(grid, out)


def axial_solution(d: int, c, profile: FieldProfile, t: float) -> DLevelState:
    """Closed form ``psi_a(t) = c_a exp(-i (d - 2a + 1) Xi(t))`` for axial fields."""
    if not profile.is_axial:
        raise ContractError("the closed form holds only for axial fields")
    c = np.asarray(c, dtype=np.complex128)
    if c.shape != (d,):
        raise DomainError(f"need {d} integration constants")
    xi = primitive_xi(profile, t)
    weights = d - 2 * np.arange(1, d + 1) + 1
    return DLevelState(d, float(t), c * np.exp(-1j * weights * xi))


F_MINUS_FLOOR = 1e-8


def recurrence_residual(states, field: FieldProfile) -> np.ndarray:
    """Check a trajectory against the recurrence that expresses ``psi_(a+1)``
    through ``psi_a``, ``psi_(a-1)`` and ``d psi_a / dt``.

    From the ``a``-th equation,
    ``psi_(a+1) = [i dpsi_a/dt - (d-2a+1) F0 psi_a - sqrt((a-1)(d-a+1)) F(+) psi_(a-1)] / (sqrt(a(d-a)) F(-))``.
    Time derivatives are central differences on the sample grid: five-point
    (fourth order) when the grid is uniform, three-point otherwise.  Samples
    too close to either end for the stencil are skipped.

    Returns
    -------
    ndarray, shape (d - 1,)
        Entry ``k`` is ``max_t |predicted - actual|`` for level ``a = k + 2``.

    Raises
    ------
    ContractError
        If ``|F(-)|`` drops below ``1e-8`` at an interior sample.
    """
    if isinstance(states, DLevelTrajectory):
        times, psi = states.times, states.psi
    else:
        times = np.array([s.t for s in states])
        psi = np.array([s.psi for s in states])
    times = np.asarray(times, dtype=float)
    if len(times) < 3:
        raise DomainError("need at least three samples for central differences")
    d = psi.shape[1]
    if d < 2:
        return np.zeros(0)
    dt = np.diff(times)
    if len(times) >= 5 and np.allclose(dt, dt[0], rtol=1e-9, atol=0):
        h = dt[0]
        t_mid, p = times[2:-2], psi[2:-2]
        dpsi = (psi[:-4] - 8 * psi[1:-3] + 8 * psi[3:-1] - psi[4:]) / (12 * h)
    else:
        t_mid, p = times[1:-1], psi[1:-1]
        h_left = dt[:-1, None]
        h_right = dt[1:, None]
        dpsi = (
            -h_right / (h_left * (h_left + h_right)) * psi[:-2]
            + (h_right - h_left) / (h_left * h_right) * psi[1:-1]
            + h_left / (h_right * (h_left + h_right)) * psi[2:]
        )
    f0, fp, fm = circular_components(field(t_mid))
    if np.min(np.abs(fm)) < F_MINUS_FLOOR:
        raise ContractError("F(-) vanishes on the grid; the recurrence is singular")
    res = np.empty(d - 1)
    for a in range(1, d):
        i = a - 1
        rhs = 1j * dpsi[:, i] - (d - 2 * a + 1) * f0 * p[:, i]
        if a > 1:
            rhs -= np.sqrt((a - 1) * (d - a + 1)) * fp * p[:, i - 1]
        predicted = rhs / (np.sqrt(a * (d - a)) * fm)
        res[i] = np.max(np.abs(predicted - p[:, i + 1]))
    return res


@dataclass(frozen=True)
class Expectations:
    """Normalized averages of the spin components and their spreads."""

    s1: float
    s2: float
    s3: float
    s_sq: float
    var1: float
    var2: float
    var3: float

    @property
    def mean(self) -> np.ndarray:
        return np.array([self.s1, self.s2, self.s3])

    @property
    def casimir_dispersion(self) -> float:
        """``<S^2> - |<S>|^2``."""
        return self.s_sq - float(self.mean @ self.mean)


def expectations(state) -> Expectations:
    psi = state.psi if hasattr(state, "psi") else np.asarray(state, dtype=np.complex128)
    nrm = np.vdot(psi, psi).real
    if nrm == 0:
        raise DomainError("expectation values of the zero vector are undefined")
    ops = spin_matrices(psi.shape[0])

    def avg(m):
        return (np.vdot(psi, m @ psi) / nrm).real

    means = [avg(s) for s in ops.components()]
    squares = [avg(s @ s) for s in ops.components()]
    return Expectations(
        *means, avg(casimir(ops)), *(sq - m * m for sq, m in zip(squares, means))
    )


def bloch_vectors(psi: np.ndarray) -> np.ndarray:
    """``<S>`` for each row of ``psi`` (shape ``(n, d)`` -> ``(n, 3)``), normalized per row."""
    psi = np.atleast_2d(psi)
    ops = spin_matrices(psi.shape[1])
    nrm = np.einsum("ij,ij->i", psi.conj(), psi).real
    out = np.empty((psi.shape[0], 3))
    for k, s in enumerate(ops.components()):
        out[:, k] = np.einsum("ij,jk,ik->i", psi.conj(), s, psi).real / np.where(nrm > 0, nrm, np.nan)
    return out


def write_state_csv(path, times, psi, with_expectations: bool = False) -> None:
    psi = np.asarray(psi)
    d = psi.shape[1]
    header = ["t"]
    for a in range(1, d + 1):
        header += [f"re_psi{a}", f"im_psi{a}"]
    if with_expectations:
        header += ["S1", "S2", "S3"]
        bloch = bloch_vectors(psi)
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(header)
        for k, t in enumerate(times):
            row = [t]
            for z in psi[k]:
                row += [z.real, z.imag]
            if with_expectations:
                row += list(bloch[k])
            out.writerow([format(float(x), ".17g") for x in row])
