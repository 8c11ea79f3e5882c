"""Spin-j operator matrices, the d-level Hamiltonian and SU(2) displacements.

Basis convention: index ``a = 1..d`` labels the Fock state
``|d - a, a - 1>`` (``n1 = d - a`` quanta in mode 1, ``n2 = a - 1`` in mode 2),
so ``a = 1`` is the highest weight ``m = +j`` and ``a = d`` the lowest
``m = -j``.  Arrays are stored 0-based: row ``a - 1`` holds level ``a``.

With this labeling ``s_plus`` is strictly upper triangular.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import DomainError, NumericDomainError
from .numerics import ComplexArray


def _check_dim(d) -> int:
    if int(d) != d or d < 1:
        raise DomainError(f"dimension must be a positive integer, got {d!r}")
    return int(d)


@dataclass(frozen=True)
class SpinOperatorSet:
    """Angular momentum ``j = (d-1)/2`` in the ``d``-dimensional block."""

    d: int
    s1: ComplexArray
    s2: ComplexArray
    s3: ComplexArray
    s_plus: ComplexArray
    s_minus: ComplexArray

    @property
    def j(self) -> float:
        return (self.d - 1) / 2

    def components(self) -> tuple[ComplexArray, ComplexArray, ComplexArray]:
        return self.s1, self.s2, self.s3


def spin_matrices(d: int) -> SpinOperatorSet:
    """Matrices of ``S1, S2, S3`` restricted to the block of dimension ``d``.

    ``(S1)_ab = [sqrt(a(d-a)) delta_{a+1,b} + sqrt(b(d-b)) delta_{a,b+1}] / 2``,
    ``(S2)_ab = i [sqrt(b(d-b)) delta_{a,b+1} - sqrt(a(d-a)) delta_{a+1,b}] / 2``,
    ``(S3)_ab = (d - 2a + 1) delta_ab / 2``.
    """
    d = _check_dim(d)
    a = np.arange(1, d)
    off = np.sqrt(a * (d - a)).astype(np.complex128)
    s_plus = np.diag(off, 1)
    s_minus = np.diag(off, -1)
    s1 = 0.5 * (s_plus + s_minus)
    s2 = -0.5j * (s_plus - s_minus)
    s3 = np.diag(0.5 * (d - 2 * np.arange(1, d + 1) + 1)).astype(np.complex128)
    for m in (s1, s2, s3, s_plus, s_minus):
        m.setflags(write=False)
    return SpinOperatorSet(d, s1, s2, s3, s_plus, s_minus)


def casimir(ops: SpinOperatorSet) -> ComplexArray:
    """``s1^2 + s2^2 + s3^2``; equals ``j(j+1) I``."""
    return ops.s1 @ ops.s1 + ops.s2 @ ops.s2 + ops.s3 @ ops.s3


def hamiltonian_d(ops: SpinOperatorSet, field) -> ComplexArray:
    """``H = s1 F1 + s2 F2 + s3 F3`` for a real field vector ``F``.

    Tridiagonal: diagonal ``(d - 2a + 1) F0``, superdiagonal
    ``sqrt(a(d-a)) F(-)``, subdiagonal ``sqrt(a(d-a)) F(+)`` with
    ``F0 = F3/2`` and ``F(+-) = (F1 +- i F2)/2``.
    """
    f = np.asarray(field, dtype=float)
    if f.shape != (3,):
        raise DomainError(f"field must be a real 3-vector, got shape {f.shape}")
    if not np.all(np.isfinite(f)):
        raise NumericDomainError("field vector is non-finite")
    # via s_plus/s_minus to keep the result exactly Hermitian
    f_minus = 0.5 * (f[0] - 1j * f[1])
    h = f[2] * ops.s3 + f_minus * ops.s_plus + np.conj(f_minus) * ops.s_minus
    return h


# ---------------------------------------------------------------------------
# spin-j image of 2x2 matrices


def _log_factorial(n):
    return gammaln(np.asarray(n, dtype=float) + 1.0)


def su2_rep(u, d: int) -> ComplexArray:
    """Image of a 2x2 matrix under the ``d``-dimensional (spin-j) representation.

    The block basis vector ``a`` is ``(a1^+)^(d-a) (a2^+)^(a-1) |0,0> / norm``;
    a linear map ``a_b^+ -> sum_a a_a^+ u_ab`` of the creation operators acts
    on it as a matrix, which is what this returns.  Valid for any complex
    ``u`` (not only unitary ones); ``su2_rep(u @ v) == su2_rep(u) @ su2_rep(v)``
    and ``su2_rep(expm(-i h s.F)) == expm(-i h s^(d).F)``.
    """
    d = _check_dim(d)
    u = np.asarray(u, dtype=np.complex128)
    if u.shape != (2, 2):
        raise DomainError("su2_rep expects a 2x2 matrix")
    n = d - 1
    if n == 0:
        return np.ones((1, 1), dtype=np.complex128)
    # column b (0-based) is (u11 x + u21 y)^(n-b) (u12 x + u22 y)^b in the
    # monomial basis x^(n-a) y^a, then rescaled to the orthonormal Fock basis
    out = np.zeros((d, d), dtype=np.complex128)
    pw = [[np.ones(1, dtype=np.complex128)], [np.ones(1, dtype=np.complex128)]]
    # coefficient lists of (u11 x + u21 y)^k and (u12 x + u22 y)^k, descending in x
    for k in range(1, d):
        pw[0].append(np.convolve(pw[0][-1], [u[0, 0], u[1, 0]]))
        pw[1].append(np.convolve(pw[1][-1], [u[0, 1], u[1, 1]]))
    lf = _log_factorial(np.arange(d))
    norm_a = 0.5 * (lf[n - np.arange(d)] + lf[np.arange(d)])
    for b in range(d):
        poly = np.convolve(pw[0][n - b], pw[1][b])
        scale = np.exp(norm_a - 0.5 * (lf[n - b] + lf[b]))
        out[:, b] = poly * scale
    return out


# ---------------------------------------------------------------------------
# closed-form exponentials of the generators


def exp_raising(d: int, z: complex) -> ComplexArray:
    """``exp(z s_plus)`` from its closed-form matrix elements.

    ``<a| exp(z S+) |a+k> = sqrt((a+k-1)! (d-a)! / ((d-k-a)! (a-1)!)) z^k / k!``.
    """
    d = _check_dim(d)
    out = np.zeros((d, d), dtype=np.complex128)
    a = np.arange(1, d + 1)
    for k in range(d):
        rows = a[: d - k]
        logc = 0.5 * (
            _log_factorial(rows + k - 1) + _log_factorial(d - rows) - _log_factorial(d - k - rows) - _log_factorial(rows - 1)
        ) - _log_factorial(k)
        out[rows - 1, rows - 1 + k] = np.exp(logc) * complex(z) ** k
    return out


def exp_lowering(d: int, z: complex) -> ComplexArray:
    """``exp(z s_minus)``; the transpose pattern of :func:`exp_raising`."""
    return exp_raising(d, z).T.copy()


def exp_weight(d: int, x: complex) -> ComplexArray:
    """``exp(x s3)``, diagonal ``exp(x (d - 2a + 1)/2)``.

    ``x = ln(zeta)`` on the principal branch gives ``zeta^((d-2a+1)/2)``.
    """
    d = _check_dim(d)
    return np.diag(np.exp(complex(x) * 0.5 * (d - 2 * np.arange(1, d + 1) + 1)))


@dataclass(frozen=True)
class DisplacementMatrix:
    """``D(zeta) = exp(zeta s+) exp(ln(1+|zeta|^2) s3) exp(-zeta* s-)``."""

    d: int
    zeta: complex
    matrix: ComplexArray


def displacement_2x2(zeta: complex) -> ComplexArray:
    """Two-level displacement ``(1+|zeta|^2)^(-1/2) [[1, zeta], [-zeta*, 1]]``.

    This is the product of the three 2x2 factors, simplified by hand.
    """
    z = complex(zeta)
    r = math.sqrt(1.0 + abs(z) ** 2)
    return np.array([[1.0, z], [-z.conjugate(), 1.0]], dtype=np.complex128) / r


def displacement(d: int, zeta: complex) -> DisplacementMatrix:
    """Perelomov displacement ``D^(d)(zeta)`` for the spin-j block.

    Computed as the spin-j image of the 2x2 factor product.  Algebraically this
    equals :func:`displacement_factored`, but the triangular factors have
    entries up to ``(1+|zeta|^2)^j`` that cancel in the product; going
    through the (unitary) 2x2 matrix avoids that cancellation.
    """
    d = _check_dim(d)
    z = complex(zeta)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise NumericDomainError("zeta must be finite")
    return DisplacementMatrix(d, z, su2_rep(displacement_2x2(z), d))


def displacement_factored(d: int, zeta: complex) -> ComplexArray:
    """Literal product of the three closed-form factors.

    Only well conditioned for moderate ``|zeta|`` and ``d``; kept as an
    independent cross-check of :func:`displacement`.
    """
    z = complex(zeta)
    return exp_raising(d, z) @ exp_weight(d, math.log1p(abs(z) ** 2)) @ exp_lowering(d, -z.conjugate())


def displacement_inverse(d: int, zeta: complex) -> DisplacementMatrix:
    """Inverse of ``D^(d)(zeta)``.

    ``D(zeta)^-1 = D(zeta)^dagger = exp(-zeta s+) exp(ln(1+|zeta|^2) s3) exp(zeta* s-)``,
    which is ``D(-zeta)``.
    """
    d = _check_dim(d)
    z = complex(zeta)
    return DisplacementMatrix(d, z, su2_rep(displacement_2x2(-z), d))


def dinverse_elements(d: int, zeta: complex) -> ComplexArray:
    """Matrix elements of ``D(zeta)^-1`` from the explicit finite triple sum.

    ``(1+|zeta|^2)^(-(d+1)/2) sum_c (d-c)!/(c-1)! sqrt((a-1)!(b-1)!/((d-a)!(d-b)!))
    (-(1+|zeta|^2)/|zeta|^2)^c (zeta*)^a (-zeta)^b / ((a-c)! (b-c)!)``,
    summed over ``c <= min(a, b)``.  Needs ``zeta != 0``; slow and only meant
    as an oracle for small ``d``.
    """
    d = _check_dim(d)
    z = complex(zeta)
    if z == 0:
        raise DomainError("the triple-sum form is singular at zeta = 0")
    big = 1.0 + abs(z) ** 2
    f = math.factorial
    out = np.zeros((d, d), dtype=np.complex128)
    for a in range(1, d + 1):
        for b in range(1, d + 1):
            acc = 0j
            for c in range(1, min(a, b) + 1):
                acc += (
                    f(d - c) / f(c - 1)
                    * math.sqrt(f(a - 1) * f(b - 1) / (f(d - a) * f(d - b)))
                    * (-big / abs(z) ** 2) ** c
                    * z.conjugate() ** a * (-z) ** b
                    / (f(a - c) * f(b - c))
                )
            out[a - 1, b - 1] = big ** (-(d + 1) / 2) * acc
    return out
