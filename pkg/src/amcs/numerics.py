"""Dense complex linear algebra and unitary time stepping.

Everything here integrates equations of the form ``i dy/dt = G(t) y`` with
``G`` Hermitian.  Steps are exponentials of anti-Hermitian matrices, so a
unitary ``y`` stays unitary up to rounding no matter how coarse the step.

Two one-step schemes are offered:

* ``order=2``: exponential midpoint, ``y <- exp(-i h G(t + h/2)) y``.
* ``order=4``: fourth-order Magnus with two Gauss-Legendre nodes.

Both only ever form linear combinations and commutators of ``G`` values, which
matters downstream: the discrete propagator of a spin-j system is then exactly
the spin-j image of the discrete 2x2 propagator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg
from numpy.typing import ArrayLike, NDArray

from .errors import DimensionError, DomainError, IntegrationError, NumericDomainError

MAX_DIM = 4096
HERMITIAN_TOL = 1e-14

ComplexArray = NDArray[np.complex128]
Generator = Callable[[float], np.ndarray]

_GAUSS_OFFSET = math.sqrt(3.0) / 6.0
_MAGNUS4_COMM = math.sqrt(3.0) / 12.0


def as_square(a: ArrayLike, name: str = "matrix") -> ComplexArray:
    """Return ``a`` as a finite square complex array or raise."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NumericDomainError(f"{name} has non-finite entries")
    return m


def hermitian(a: ArrayLike) -> ComplexArray:
    """Symmetrize ``a`` into an exactly Hermitian matrix.

    Raises if ``a`` is further than ``HERMITIAN_TOL`` (entrywise) from its
    adjoint, i.e. if it was not Hermitian to begin with.
    """
    m = as_square(a)
    if m.size and np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL * max(1.0, np.max(np.abs(m))):
        raise DomainError("matrix is not Hermitian")
    return 0.5 * (m + m.conj().T)


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(a, -1, -2))


def unitarity_defect(u: np.ndarray) -> float:
    """Frobenius norm of ``u u^dagger - I``."""
    u = np.asarray(u)
    return float(np.linalg.norm(u @ dagger(u) - np.eye(u.shape[-1])))


def polar_unitary(u: np.ndarray) -> np.ndarray:
    """Closest unitary matrix to ``u`` (unitary factor of the polar decomposition)."""
    left, _, right = np.linalg.svd(u)
    return left @ right


def mat_exp(a: ArrayLike) -> ComplexArray:
    """Matrix exponential ``e^A`` of a dense square matrix.

    Scaling and squaring with a Pade approximant whose degree is picked from
    the 1-norm of ``A`` (delegates to :func:`scipy.linalg.expm`).

    Raises
    ------
    DimensionError
        ``A`` is not square or is larger than ``MAX_DIM``.
    NumericDomainError
        ``A`` has NaN or infinite entries.
    """
    m = as_square(a, "A")
    if m.shape[0] > MAX_DIM:
        raise DimensionError(f"dimension {m.shape[0]} exceeds supported {MAX_DIM}")
    if m.shape[0] == 0:
        return m.copy()
    return np.asarray(scipy.linalg.expm(m), dtype=np.complex128)


def _eval_generator(generator: Generator, t: float) -> np.ndarray:
    g = np.asarray(generator(t), dtype=np.complex128)
    if not np.all(np.isfinite(g)):
        raise NumericDomainError(f"generator is non-finite at t={t!r}")
    return g


def step_unitary(generator: Generator, y: ArrayLike, t: float, h: float, order: int = 2) -> ComplexArray:
    """Advance ``i dy/dt = G(t) y`` from ``t`` to ``t + h``.

    Parameters
    ----------
    generator : callable
        ``t -> G(t)``, a Hermitian ``n x n`` matrix.
    y : array_like
        State, ``n`` vector or ``n x k`` matrix.
    t, h : float
        Start time and step (``h > 0``).
    order : {2, 4}
        Exponential midpoint (local error O(h^3)) or two-node Magnus
        (local error O(h^5)).
    """
    if not h > 0:
        raise DomainError(f"step must be positive, got {h!r}")
    y = np.asarray(y, dtype=np.complex128)
    if order == 2:
        g = _eval_generator(generator, t + 0.5 * h)
        exponent = -1j * h * g
    elif order == 4:
        g1 = _eval_generator(generator, t + (0.5 - _GAUSS_OFFSET) * h)
        g2 = _eval_generator(generator, t + (0.5 + _GAUSS_OFFSET) * h)
        exponent = -0.5j * h * (g1 + g2) - _MAGNUS4_COMM * h * h * commutator(g2, g1)
    else:
        raise DomainError(f"order must be 2 or 4, got {order!r}")
    return mat_exp(exponent) @ y


@dataclass(frozen=True)
class TimeGrid:
    """Strictly increasing sample times, both endpoints included."""

    samples: np.ndarray

    def __post_init__(self):
        s = np.array(self.samples, dtype=float)
        if s.ndim != 1 or s.size < 2:
            raise DomainError("a time grid needs at least two samples")
        if not np.all(np.isfinite(s)):
            raise NumericDomainError("time grid has non-finite samples")
        if not np.all(np.diff(s) > 0):
            raise DomainError("time grid must be strictly increasing")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @classmethod
    def linspace(cls, t0: float, t1: float, n: int) -> "TimeGrid":
        if not t1 > t0:
            raise DomainError("t1 must exceed t0")
        return cls(np.linspace(t0, t1, int(n)))

    @property
    def t0(self) -> float:
        return float(self.samples[0])

    @property
    def t1(self) -> float:
        return float(self.samples[-1])

    def __len__(self):
        return self.samples.size


def substeps(dt: float, h: float) -> int:
    """Number of equal substeps of size at most ``h`` covering ``dt``."""
    return max(1, math.ceil(dt / h - 1e-9))


def propagate(
    generator: Generator,
    y0: ArrayLike,
    grid: TimeGrid,
    h: float,
    order: int = 2,
    reproject_every: int | None = None,
    reproject_tol: float = 1e-11,
) -> ComplexArray:
    """Integrate ``i dy/dt = G(t) y`` and return ``y`` at every grid sample.

    Each grid interval is cut into the fewest equal substeps not exceeding
    ``h``, so samples are hit exactly and results are reproducible bit for bit.
    With ``reproject_every`` set (square unitary ``y`` only) the state is
    replaced by its polar unitary factor every that many steps whenever the
    unitarity defect exceeds ``reproject_tol``.

    Returns an array of shape ``(len(grid),) + y0.shape``.
    """
    if not h > 0:
        raise DomainError(f"step must be positive, got {h!r}")
    y = np.array(y0, dtype=np.complex128)
    out = np.empty((len(grid),) + y.shape, dtype=np.complex128)
    out[0] = y
    taken = 0
    times = grid.samples
    for k in range(1, times.size):
        ta, tb = times[k - 1], times[k]
        n = substeps(tb - ta, h)
        dt = (tb - ta) / n
        for i in range(n):
            t = ta + i * dt
            try:
                y = step_unitary(generator, y, t, dt, order)
            except NumericDomainError as exc:
                raise IntegrationError(str(exc), float(t), out[:k].copy(), times[:k].copy()) from exc
            taken += 1
            if reproject_every and taken % reproject_every == 0:
                if unitarity_defect(y) > reproject_tol:
                    y = polar_unitary(y)
        if not np.all(np.isfinite(y)):
            raise IntegrationError(
                "integration produced non-finite values", float(tb), out[:k].copy(), times[:k].copy()
            )
        out[k] = y
    return out


def doubling_error(
    generator: Generator, y0: ArrayLike, grid: TimeGrid, h: float, order: int = 2, **kwargs
) -> tuple[ComplexArray, float]:
    """Propagate with steps ``h`` and ``h/2``; return the finer result and the
    largest entrywise difference between the two, an estimate of the error of
    the coarse run.
    """
    coarse = propagate(generator, y0, grid, h, order=order, **kwargs)
    fine = propagate(generator, y0, grid, h / 2, order=order, **kwargs)
    return fine, float(np.max(np.abs(fine - coarse)))
