"""Angular momentum coherent states ``|Z,t>^(d)``.

The two-mode coherent state ``|Z,t> = exp(-|Z|^2/2) exp(Z~_alpha a_alpha^+) |0,0>``
with ``Z~ = w(t)^-1 Z`` decomposes into blocks of fixed total quanta.  The
block of dimension ``d`` has amplitudes

    psi_a = exp(-|Z|^2/2) Z~_1^(d-a) Z~_2^(a-1) / sqrt((a-1)! (d-a)!),   a = 1..d,

and solves the d-level equation exactly once ``w`` solves the 2x2 one.  So a
single 2x2 integration yields the dynamics of every ``d`` at once.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .dlevel import DLevelState
from .errors import DomainError
from .spin2 import WTrajectory, check_unitary, tilde_Z

# above this dimension amplitudes are assembled from logarithms
LOG_SPACE_DIM = 30


def _xlogy(n, z):
    """``n * log|z|`` with the convention ``0 * log 0 = 0``."""
    mag = np.abs(z)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = n * np.log(mag)
    return np.where(n == 0, 0.0, out)


def block_amplitudes(d: int, zt: np.ndarray, z_abs_sq) -> np.ndarray:
    """Block amplitudes for one or many ``Z~`` (shape ``(2,)`` or ``(n, 2)``)."""
    zt = np.asarray(zt, dtype=np.complex128)
    single = zt.ndim == 1
    zt = np.atleast_2d(zt)
    a = np.arange(1, d + 1)
    p1, p2 = d - a, a - 1
    z1, z2 = zt[:, :1], zt[:, 1:]
    z_abs_sq = np.reshape(np.asarray(z_abs_sq, dtype=float), (-1, 1))
    log_fact = 0.5 * (gammaln(a) + gammaln(d - a + 1))
    if d <= LOG_SPACE_DIM:
        out = np.exp(-0.5 * z_abs_sq - log_fact) * z1**p1 * z2**p2
    else:
        logmag = -0.5 * z_abs_sq - log_fact + _xlogy(p1, z1) + _xlogy(p2, z2)
        phase = p1 * np.angle(z1) + p2 * np.angle(z2)
        out = np.exp(logmag + 1j * phase)
    return out[0] if single else out


def unit_block_amplitudes(d: int, zt: np.ndarray) -> np.ndarray:
    """Block amplitudes divided by their norm; stable for any ``d``.

    ``sqrt(C(d-1, a-1)) (Z~_1/|Z|)^(d-a) (Z~_2/|Z|)^(a-1)``.
    """
    zt = np.asarray(zt, dtype=np.complex128)
    single = zt.ndim == 1
    zt = np.atleast_2d(zt)
    r = np.linalg.norm(zt, axis=1, keepdims=True)
    if d > 1 and np.any(r == 0):
        raise DomainError("Z = 0 has no component in blocks with d > 1")
    u = zt / np.where(r == 0, 1.0, r)
    a = np.arange(1, d + 1)
    p1, p2 = d - a, a - 1
    log_binom = 0.5 * (gammaln(d) - gammaln(a) - gammaln(d - a + 1))
    logmag = log_binom + _xlogy(p1, u[:, :1]) + _xlogy(p2, u[:, 1:])
    phase = p1 * np.angle(u[:, :1]) + p2 * np.angle(u[:, 1:])
    out = np.exp(logmag + 1j * phase)
    return out[0] if single else out


@dataclass(frozen=True)
class AmcsState:
    """Block ``d`` of the coherent state labeled ``Z`` at the time where ``w`` was taken."""

    d: int
    Z: np.ndarray
    w: np.ndarray
    Z_tilde: np.ndarray
    psi: np.ndarray
    t: float | None = None

    @property
    def z_abs(self) -> float:
        return float(np.linalg.norm(self.Z))

    def norm_sq(self) -> float:
        return float(np.vdot(self.psi, self.psi).real)

    def normalized(self) -> np.ndarray:
        return unit_block_amplitudes(self.d, self.Z_tilde)

    def to_dlevel(self) -> DLevelState:
        return DLevelState(self.d, 0.0 if self.t is None else self.t, self.psi)


def _check_dim(d):
    if int(d) != d or d < 1:
        raise DomainError(f"dimension must be a positive integer, got {d!r}")
    return int(d)


def amcs_amplitudes(d: int, Z, w=None, t: float | None = None) -> AmcsState:
    """Coherent-state block of dimension ``d`` for label ``Z`` and unitary ``w``.

    ``w`` defaults to the identity (the state at the initial time).  Raises
    :class:`ContractError` if ``w`` is not unitary within ``1e-6``.
    """
    d = _check_dim(d)
    Z = np.asarray(Z, dtype=np.complex128)
    w = np.eye(2, dtype=np.complex128) if w is None else check_unitary(w)
    zt = tilde_Z(Z, w)
    z2 = float(np.vdot(Z, Z).real)
    return AmcsState(d, Z, w, zt, block_amplitudes(d, zt, z2), t)


def amcs_trajectory(d: int, Z, traj: WTrajectory) -> np.ndarray:
    """Amplitudes at every sample of a w-trajectory, shape ``(n, d)``."""
    Z = np.asarray(Z, dtype=np.complex128)
    zt = np.einsum("nba,b->na", traj.w.conj(), Z)
    return block_amplitudes(_check_dim(d), zt, float(np.vdot(Z, Z).real))


def amcs_norm_sq(d: int, Z) -> float:
    """``exp(-|Z|^2) |Z|^(2(d-1)) / (d-1)!``, the squared norm of every block ``d``."""
    d = _check_dim(d)
    r2 = float(np.vdot(np.asarray(Z, dtype=np.complex128), np.asarray(Z, dtype=np.complex128)).real)
    if r2 == 0:
        return 1.0 if d == 1 else 0.0
    return float(np.exp(-r2 + (d - 1) * np.log(r2) - gammaln(d)))


def annihilators(d: int) -> tuple[np.ndarray, np.ndarray]:
    """Block matrices of ``a1`` and ``a2`` mapping dimension ``d`` to ``d - 1``.

    ``a1 |d-a, a-1> = sqrt(d-a) |d-a-1, a-1>`` keeps the label ``a``;
    ``a2`` lowers it by one with factor ``sqrt(a-1)``.
    """
    d = _check_dim(d)
    a1 = np.zeros((d - 1, d))
    a2 = np.zeros((d - 1, d))
    for a in range(1, d):
        a1[a - 1, a - 1] = np.sqrt(d - a)
        a2[a - 1, a] = np.sqrt(a)
    return a1, a2


def apply_annihilator(state: AmcsState, alpha: int) -> np.ndarray:
    """Apply ``A_alpha(t) = w_alpha,beta a_beta`` to the block state.

    The result lives in the block of dimension ``d - 1`` and equals
    ``Z_alpha`` times the coherent-state block there.  For ``d = 1`` the vacuum
    is annihilated and an empty vector is returned.
    """
    if alpha not in (1, 2):
        raise DomainError("mode index alpha must be 1 or 2")
    if state.d == 1:
        return np.zeros(0, dtype=np.complex128)
    a1, a2 = annihilators(state.d)
    row = state.w[alpha - 1]
    return (row[0] * a1 + row[1] * a2) @ state.psi


def cs_representation(z, Z, w=None) -> complex:
    """Overlap ``<z|Z,t>`` with a two-mode Glauber state ``|z>``.

    ``exp(-(|z|^2 + |Z|^2)/2 + sum_alpha conj(z_alpha) Z~_alpha)``.
    """
    z = np.asarray(z, dtype=np.complex128)
    Z = np.asarray(Z, dtype=np.complex128)
    w = np.eye(2) if w is None else w
    zt = tilde_Z(Z, w)
    return complex(np.exp(-0.5 * (np.vdot(z, z).real + np.vdot(Z, Z).real) + np.vdot(z, zt)))


def glauber_block(d: int, z) -> np.ndarray:
    """Components ``<a|z>`` of the two-mode Glauber state ``|z>`` in block ``d``."""
    z = np.asarray(z, dtype=np.complex128)
    return block_amplitudes(_check_dim(d), z, float(np.vdot(z, z).real))
