"""The 2x2 matrix ``w(t)`` behind the integrals of motion ``A(t) = w(t) a``.

``w`` obeys ``i dw/dt = -w H2(t)`` with ``H2 = s.F`` and ``w(0) = I``.  Its rows
``W_alpha`` are spinors obeying ``i dW/dt = (sigma.Omega) W`` with
``Omega = -(F1, -F2, F3)/2``; equivalently ``w^T`` solves
``i dy/dt = -H2^* y``.  We integrate that matrix equation directly.

Only the sector without Bogoliubov mixing is handled (``A = w a``, no
``a^+`` or constant term), so ``w`` stays unitary.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import ContractError
from .fields import FieldProfile
from .numerics import TimeGrid, doubling_error, propagate, unitarity_defect
from .spin_ops import hamiltonian_d, spin_matrices

UNITARITY_TOL = 1e-6
REPROJECT_EVERY = 1000

_SPIN_HALF = spin_matrices(2)


def hamiltonian_2(f) -> np.ndarray:
    """``H2 = s.F`` with ``s = sigma / 2``."""
    return hamiltonian_d(_SPIN_HALF, f)


@dataclass(frozen=True)
class WTrajectory:
    grid: TimeGrid
    w: np.ndarray  # (n, 2, 2)
    field: FieldProfile

    def __len__(self):
        return len(self.grid)

    def at(self, k: int) -> np.ndarray:
        return self.w[k]

    @property
    def times(self) -> np.ndarray:
        return self.grid.samples

    def max_unitarity_defect(self) -> float:
        return max(unitarity_defect(w) for w in self.w)

    def to_csv(self, path) -> None:
        """Columns ``t, Re w11, Im w11, Re w12, Im w12, Re w21, ...``."""
        header = ["t"]
        for al in (1, 2):
            for be in (1, 2):
                header += [f"re_w{al}{be}", f"im_w{al}{be}"]
        with open(path, "w", newline="") as fh:
            out = csv.writer(fh, lineterminator="\n")
            out.writerow(header)
            for t, w in zip(self.times, self.w):
                row = [t]
                for z in w.reshape(-1):
                    row += [z.real, z.imag]
                out.writerow([format(float(x), ".17g") for x in row])


def solve_w(field: FieldProfile, grid: TimeGrid, step: float, order: int = 4) -> WTrajectory:
    """Integrate ``i dw/dt = -w H2(t)`` from ``w(t0) = I`` over ``grid``.

    Parameters
    ----------
    field : FieldProfile
    grid : TimeGrid
    step : float
        Largest integration step; grid intervals are split evenly.
    order : {2, 4}
        Magnus order of the unitary stepper.

    Raises
    ------
    IntegrationError
        With the time at which values became non-finite.
    """

    def generator(t):
        return -np.conj(hamiltonian_2(field(t)))

    y = propagate(generator, np.eye(2), grid, step, order=order, reproject_every=REPROJECT_EVERY)
    return WTrajectory(grid, np.ascontiguousarray(np.swapaxes(y, 1, 2)), field)


def w_step_error(field: FieldProfile, grid: TimeGrid, step: float, order: int = 4) -> float:
    """Largest change in ``w`` on ``grid`` when ``step`` is halved."""

    def generator(t):
        return -np.conj(hamiltonian_2(field(t)))

    _, err = doubling_error(generator, np.eye(2), grid, step, order=order, reproject_every=REPROJECT_EVERY)
    return err


def w_constant_field(omega0: float, t) -> np.ndarray:
    """``diag(exp(i omega0 t), exp(-i omega0 t))``; stacked when ``t`` is an array."""
    t = np.asarray(t, dtype=float)
    phase = np.exp(1j * omega0 * t)
    out = np.zeros(t.shape + (2, 2), dtype=np.complex128)
    out[..., 0, 0] = phase
    out[..., 1, 1] = np.conj(phase)
    return out


def check_unitary(w, tol: float = UNITARITY_TOL) -> np.ndarray:
    w = np.asarray(w, dtype=np.complex128)
    if w.shape != (2, 2):
        raise ContractError(f"w must be 2x2, got shape {w.shape}")
    if not np.all(np.isfinite(w)) or unitarity_defect(w) > tol:
        raise ContractError("w is not unitary")
    return w


def tilde_Z(Z, w) -> np.ndarray:
    """Rotated coherent-state label ``Z~_alpha = sum_beta Z_beta conj(w_beta,alpha)``.

    Because ``w`` is unitary, ``Z~ = w^-1 Z`` and ``|Z~| = |Z|``.
    """
    w = check_unitary(w)
    z = np.asarray(Z, dtype=np.complex128)
    if z.shape != (2,):
        raise ContractError("Z must be a complex pair")
    return w.conj().T @ z
