"""Truncated two-mode Fock space (Schwinger bosons).

Used as a brute-force oracle: every operator is assembled from the ladder
actions ``a1|n1,n2> = sqrt(n1)|n1-1,n2>`` etc., never from the closed-form
spin matrices.

Basis ordering: ascending total quanta ``N = n1 + n2``, then ascending ``n2``.
The block of total quanta ``N`` therefore lists ``|N,0>, |N-1,1>, ..., |0,N>``,
which is the ``a = 1..d`` labeling with ``d = N + 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DomainError
from .spin_ops import SpinOperatorSet

MAX_QUANTA = 60


@dataclass(frozen=True)
class FockBasis:
    n_max: int
    states: tuple[tuple[int, int], ...]
    index: dict = field(repr=False, compare=False)

    @classmethod
    def truncated(cls, n_max: int) -> "FockBasis":
        states = tuple((n - n2, n2) for n in range(n_max + 1) for n2 in range(n + 1))
        return cls(n_max, states, {s: i for i, s in enumerate(states)})

    def __len__(self):
        return len(self.states)

    def block(self, d: int) -> list[int]:
        """Indices of the total-quanta ``d - 1`` states, in ``a = 1..d`` order."""
        n = d - 1
        return [self.index[(n - k, k)] for k in range(d)]


@dataclass(frozen=True)
class FockOperators:
    basis: FockBasis
    a1: np.ndarray
    a2: np.ndarray
    a1_dag: np.ndarray
    a2_dag: np.ndarray
    S1: np.ndarray
    S2: np.ndarray
    S3: np.ndarray
    S_plus: np.ndarray
    S_minus: np.ndarray
    N_op: np.ndarray
    d_op: np.ndarray

    def interior(self) -> np.ndarray:
        """Mask of basis states with total quanta below the truncation."""
        return np.array([n1 + n2 < self.basis.n_max for n1, n2 in self.basis.states])


_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
)


def build_fock(n_max: int) -> FockOperators:
    """Ladder, spin and number operators on states with at most ``n_max`` quanta."""
    if int(n_max) != n_max or not 1 <= n_max <= MAX_QUANTA:
        raise DomainError(f"n_max must be an integer in 1..{MAX_QUANTA}, got {n_max!r}")
    basis = FockBasis.truncated(int(n_max))
    dim = len(basis)
    a1 = np.zeros((dim, dim), dtype=np.complex128)
    a2 = np.zeros((dim, dim), dtype=np.complex128)
    for col, (n1, n2) in enumerate(basis.states):
        if n1 > 0:
            a1[basis.index[(n1 - 1, n2)], col] = np.sqrt(n1)
        if n2 > 0:
            a2[basis.index[(n1, n2 - 1)], col] = np.sqrt(n2)
    ann = (a1, a2)
    cre = (a1.conj().T, a2.conj().T)
    # S_i = a_alpha^+ (sigma_i / 2)^{alpha beta} a_beta; normal order keeps it exact
    bilinear = [[cre[al] @ ann[be] for be in range(2)] for al in range(2)]
    spins = []
    for sigma in _PAULI:
        s = np.zeros((dim, dim), dtype=np.complex128)
        for al in range(2):
            for be in range(2):
                if sigma[al, be] != 0:
                    s += 0.5 * sigma[al, be] * bilinear[al][be]
        spins.append(s)
    n_op = bilinear[0][0] + bilinear[1][1]
    return FockOperators(
        basis=basis,
        a1=a1,
        a2=a2,
        a1_dag=cre[0],
        a2_dag=cre[1],
        S1=spins[0],
        S2=spins[1],
        S3=spins[2],
        S_plus=bilinear[0][1],
        S_minus=bilinear[1][0],
        N_op=n_op,
        d_op=n_op + np.eye(dim),
    )


def project_block(ops: FockOperators, d: int) -> SpinOperatorSet:
    """Restrict the Fock spin operators to the ``d``-dimensional block."""
    if int(d) != d or d < 1:
        raise DomainError(f"dimension must be a positive integer, got {d!r}")
    if d > ops.basis.n_max + 1:
        raise DomainError(f"d={d} needs n_max >= {d - 1}, truncation is {ops.basis.n_max}")
    idx = np.array(ops.basis.block(int(d)))
    sub = np.ix_(idx, idx)
    return SpinOperatorSet(
        int(d), ops.S1[sub].copy(), ops.S2[sub].copy(), ops.S3[sub].copy(), ops.S_plus[sub].copy(), ops.S_minus[sub].copy()
    )


def sm_basis_map(s, m) -> tuple[int, int]:
    """Occupation numbers ``(s + m, s - m)`` of the state with spin ``s``, projection ``m``."""
    s, m = Fraction(s), Fraction(m)
    n1, n2 = s + m, s - m
    if (2 * s).denominator != 1 or s < 0 or abs(m) > s or n1.denominator != 1 or n2.denominator != 1:
        raise DomainError(f"invalid spin quantum numbers s={s}, m={m}")
    return int(n1), int(n2)


def level_of(n1: int, n2: int) -> tuple[int, int]:
    """``(d, a)`` of the occupation state ``|n1, n2>``."""
    if n1 < 0 or n2 < 0:
        raise DomainError("occupation numbers must be non-negative")
    return n1 + n2 + 1, n2 + 1
