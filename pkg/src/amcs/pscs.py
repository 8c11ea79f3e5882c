"""Perelomov spin coherent states and their relation to the AMCS blocks.

``|zeta>^(d) = D^(d)(zeta) |j,-j>``, where ``|j,-j>`` is the last basis vector
(``a = d``).  A coherent-state block is, up to a scalar, the Perelomov state
at ``zeta = Z~_1 / Z~_2``:

    |Z,t>^(d) = |Z|^(d-1) exp(-|Z|^2/2) / sqrt((d-1)!) * exp(i (d-1) arg Z~_2) |zeta>^(d).

The chart ``zeta = -tan(theta/2) exp(-i phi)`` covers the sphere minus the
south pole ``theta = pi`` (``zeta = infinity``, the state ``a = 1``).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .coherent import AmcsState
from .dlevel import expectations
from .errors import ChartSingularityError, DomainError
from .spin_ops import displacement, displacement_inverse, spin_matrices

CHART_FLOOR = 1e-12
MIN_RESOLUTION = 64


class QuadratureAccuracyWarning(UserWarning):
    pass


@dataclass(frozen=True)
class PscsState:
    d: int
    zeta: complex
    psi: np.ndarray

    @property
    def j(self) -> float:
        return (self.d - 1) / 2


def pscs_state(d: int, zeta: complex) -> PscsState:
    """``D(zeta)`` applied to the lowest-weight vector."""
    disp = displacement(d, zeta)
    return PscsState(disp.d, disp.zeta, disp.matrix[:, -1].copy())


def stereographic(theta: float, phi: float) -> complex:
    """``-tan(theta/2) exp(-i phi)``; ``theta = pi`` is the excluded pole."""
    if not 0 <= theta < math.pi:
        raise ChartSingularityError(f"theta={theta!r} is outside [0, pi)")
    return -math.tan(theta / 2) * complex(math.cos(phi), -math.sin(phi))


def _zeta_and_phase(state: AmcsState) -> tuple[complex, complex]:
    z1, z2 = complex(state.Z_tilde[0]), complex(state.Z_tilde[1])
    if abs(z2) < CHART_FLOOR:
        raise ChartSingularityError("Z~_2 vanishes; zeta = Z~_1/Z~_2 is at infinity")
    return z1 / z2, z2 / abs(z2)


def bridge_prefactor(d: int, Z, z2_phase: complex) -> complex:
    """``|Z|^(d-1) exp(-|Z|^2/2) / sqrt((d-1)!) * phase^(d-1)``."""
    r2 = float(np.vdot(Z, Z).real)
    if r2 == 0:
        mag = 1.0 if d == 1 else 0.0
    else:
        mag = math.exp(0.5 * (d - 1) * math.log(r2) - 0.5 * r2 - 0.5 * gammaln(d))
    return mag * z2_phase ** (d - 1)


def amcs_to_pscs(state: AmcsState) -> tuple[complex, complex]:
    """Return ``(zeta, prefactor)`` with ``state.psi == prefactor * pscs_state(d, zeta).psi``.

    Raises
    ------
    ChartSingularityError
        If ``|Z~_2| < 1e-12``.
    """
    zeta, phase = _zeta_and_phase(state)
    return zeta, bridge_prefactor(state.d, state.Z, phase)


def dinverse_reduction(state: AmcsState) -> tuple[complex, float]:
    """Rotate the block back to the lowest-weight vector with ``D(zeta)^-1``.

    Returns the component along ``|j,-j>`` and the norm of everything else
    (zero up to rounding).
    """
    zeta, _ = _zeta_and_phase(state)
    v = displacement_inverse(state.d, zeta).matrix @ state.psi
    return complex(v[-1]), float(np.linalg.norm(v[:-1]))


def dinverse_coefficient(state: AmcsState) -> complex:
    """Closed form of the surviving component,
    ``|Z|^(d-1) exp(-|Z|^2/2) (Z~_2 / Z~_2^*)^((d-1)/2) / sqrt((d-1)!)``.

    The half-integer power is taken as ``exp(i (d-1) arg Z~_2)``, which is
    single valued.
    """
    _, phase = _zeta_and_phase(state)
    return bridge_prefactor(state.d, state.Z, phase)


# ---------------------------------------------------------------------------
# completeness


def planar_density(d: int, zeta) -> np.ndarray:
    """Invariant measure density ``(2j+1)/pi / (1+|zeta|^2)^2`` w.r.t. ``dRe dIm``."""
    return d / math.pi / (1 + np.abs(zeta) ** 2) ** 2


def spherical_density(d: int, theta) -> np.ndarray:
    """The same measure pulled back to the sphere: ``(2j+1)/(4 pi) sin(theta)`` w.r.t. ``dtheta dphi``.

    With ``|zeta| = tan(theta/2)``: ``dRe dIm = |zeta| d|zeta| dphi`` and
    ``d|zeta| = dtheta / (2 cos^2(theta/2))``, so
    ``dRe dIm / (1+|zeta|^2)^2 = sin(theta)/4 dtheta dphi``.
    """
    return d / (4 * math.pi) * np.sin(theta)


def orbit_vectors(d: int, theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Perelomov states at sphere points, shape ``theta.shape + (d,)``.

    Component ``a`` is ``sqrt(C(d-1, a-1)) (-sin(theta/2) e^{-i phi})^(d-a) cos(theta/2)^(a-1)``,
    the last column of ``D(zeta)`` written in angles.
    """
    theta = np.asarray(theta, dtype=float)[..., None]
    phi = np.asarray(phi, dtype=float)[..., None]
    a = np.arange(1, d + 1)
    coef = np.exp(0.5 * (gammaln(d) - gammaln(a) - gammaln(d - a + 1)))
    up = -np.sin(theta / 2) * np.exp(-1j * phi)
    down = np.cos(theta / 2)
    return coef * up ** (d - a) * down ** (a - 1)


@dataclass(frozen=True)
class IdentityResolution:
    matrix: np.ndarray
    n_theta: int
    n_phi: int
    warning: str | None = None

    @property
    def deviation(self) -> float:
        """``max |M - I|`` entrywise."""
        return float(np.max(np.abs(self.matrix - np.eye(self.matrix.shape[0]))))


def resolution_of_identity(d: int, n_theta: int, n_phi: int) -> IdentityResolution:
    """Quadrature of ``int |zeta><zeta| dmu(zeta)`` over the sphere.

    Gauss-Legendre nodes in ``theta`` and the periodic trapezoid rule in
    ``phi``.  Meant for small blocks (``d <= 8``); resolutions below 64 attach
    a :class:`QuadratureAccuracyWarning` to the result.
    """
    if int(d) != d or d < 1:
        raise DomainError(f"dimension must be a positive integer, got {d!r}")
    if n_theta < 1 or n_phi < 1:
        raise DomainError("quadrature resolutions must be positive")
    note = None
    if min(n_theta, n_phi) < MIN_RESOLUTION:
        note = f"resolution {n_theta}x{n_phi} below {MIN_RESOLUTION}; result may be inaccurate"
        warnings.warn(note, QuadratureAccuracyWarning, stacklevel=2)
    x, wx = np.polynomial.legendre.leggauss(int(n_theta))
    theta = 0.5 * math.pi * (x + 1)
    w_theta = 0.5 * math.pi * wx * spherical_density(d, theta)
    phi = 2 * math.pi * np.arange(n_phi) / n_phi
    w_phi = 2 * math.pi / n_phi
    vec = orbit_vectors(int(d), theta[:, None], phi[None, :])  # (nt, np, d)
    m = np.einsum("t,tpa,tpb->ab", w_theta * w_phi, vec, vec.conj())
    return IdentityResolution(m, int(n_theta), int(n_phi), note)


def dispersion_saturation(d: int, zeta: complex) -> tuple[float, float]:
    """``(var(s~1) var(s~2), <s~3>^2 / 4)`` in ``|zeta>``, with ``s~k = D s_k D^-1``.

    Perelomov states saturate the uncertainty relation, so both equal ``(j/2)^2``.
    """
    if d < 2:
        raise DomainError("saturation needs d >= 2")
    ops = spin_matrices(d)
    dm = displacement(d, zeta).matrix
    dinv = displacement_inverse(d, zeta).matrix
    psi = dm[:, -1]

    def avg(m):
        return np.vdot(psi, m @ psi).real

    rotated = [dm @ s @ dinv for s in ops.components()]
    var = [avg(s @ s) - avg(s) ** 2 for s in rotated]
    return var[0] * var[1], 0.25 * avg(rotated[2]) ** 2


def casimir_dispersion(d: int) -> float:
    """``<S^2> - |<S>|^2`` in the lowest-weight state; equals ``j``."""
    e = np.zeros(d, dtype=np.complex128)
    e[-1] = 1
    return expectations(e).casimir_dispersion
