"""Seeded identity suite spanning every module.

Each check records the identity it tests (as formula text), its tolerance,
the measured deviation, and whether it passed.  Given ``(d_max, seed)`` the
report is byte-for-byte reproducible.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .coherent import amcs_amplitudes, amcs_norm_sq, amcs_trajectory, apply_annihilator
from .dlevel import axial_solution, evolve_d, recurrence_residual
from .errors import DomainError
from .fields import AxialField, RotatingField
from .fock import build_fock, project_block
from .numerics import TimeGrid, commutator, unitarity_defect
from .pscs import (
    amcs_to_pscs,
    casimir_dispersion,
    dinverse_coefficient,
    dinverse_reduction,
    dispersion_saturation,
    pscs_state,
    resolution_of_identity,
)
from .spin2 import solve_w
from .spin_ops import casimir, displacement, spin_matrices

MAX_VERIFY_DIM = 15
STEP = 1e-3
ROI_RESOLUTION = 256
ROI_MAX_DIM = 8


@dataclass(frozen=True)
class Check:
    name: str
    reference: str
    tolerance: float
    measured: float

    @property
    def passed(self) -> bool:
        return bool(self.measured <= self.tolerance)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["pass"] = self.passed
        return out


@dataclass(frozen=True)
class VerificationReport:
    d_max: int
    seed: int
    checks: tuple[Check, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> str:
        doc = {
            "d_max": self.d_max,
            "seed": self.seed,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }
        return json.dumps(doc, indent=2) + "\n"

    def summary(self) -> str:
        lines = [f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.measured:.3e} <= {c.tolerance:.0e}"
                 for c in self.checks]
        return "\n".join(lines)


def _random_inputs(rng, d_max):
    radius = rng.uniform(0.5, 2.0)
    z = rng.normal(size=2) + 1j * rng.normal(size=2)
    Z = radius * z / np.linalg.norm(z)
    rotating = RotatingField(
        amplitude=rng.uniform(0.5, 1.5),
        frequency=rng.uniform(0.5, 2.0),
        phase=rng.uniform(0, 2 * math.pi),
        bz=rng.uniform(-1.0, 1.0),
    )
    axial = AxialField(
        offset=rng.uniform(-1.0, 1.0),
        amplitude=rng.uniform(0.2, 1.0),
        frequency=rng.uniform(0.5, 2.0),
        phase=rng.uniform(0, 2 * math.pi),
    )
    times = np.sort(rng.uniform(0.2, 3.0, size=10))
    zetas = rng.normal(size=4) + 1j * rng.normal(size=4)
    return Z, rotating, axial, times, zetas


def _max(values) -> float:
    values = list(values)
    return float(max(values)) if values else 0.0


def verify(d_max: int, seed: int = 0) -> VerificationReport:
    """Run the identity suite for blocks ``d = 1..d_max``.

    Checks that need ``d >= 2`` are omitted when ``d_max = 1``.
    """
    if int(d_max) != d_max or not 1 <= d_max <= MAX_VERIFY_DIM:
        raise DomainError(f"d_max must be an integer in [1, {MAX_VERIFY_DIM}], got {d_max!r}")
    d_max = int(d_max)
    rng = np.random.default_rng(seed)
    Z, rotating, axial, times, zetas = _random_inputs(rng, d_max)
    dims = range(1, d_max + 1)
    grid = TimeGrid(np.concatenate([[0.0], times]))
    traj = solve_w(rotating, grid, STEP)
    states = {d: [amcs_amplitudes(d, Z, w, t) for t, w in zip(grid.samples, traj.w)] for d in dims}
    checks = []

    def add(name, ref, tol, measured):
        checks.append(Check(name, ref, tol, float(measured)))

    fock = build_fock(d_max)
    add("fock oracle", "S_k restricted to N = d-1 quanta equals s_k^(d)", 1e-13, _max(
        np.max(np.abs(a - b))
        for d in dims
        for a, b in zip(project_block(fock, d).components(), spin_matrices(d).components())
    ))

    def algebra_defect(d):
        s = spin_matrices(d).components()
        return max(
            np.max(np.abs(commutator(s[i], s[(i + 1) % 3]) - 1j * s[(i + 2) % 3])) for i in range(3)
        )

    add("commutation relations", "[s_i, s_j] = i eps_ijk s_k", 1e-12, _max(algebra_defect(d) for d in dims))
    add("casimir", "s1^2 + s2^2 + s3^2 = j(j+1) I", 1e-12, _max(
        np.max(np.abs(casimir(spin_matrices(d)) - (d * d - 1) / 4 * np.eye(d))) for d in dims
    ))
    add("w unitarity", "w(t) w(t)^+ = I", 1e-10, traj.max_unitarity_defect())

    def ladder(d, alpha):
        for st in states[d]:
            lowered = apply_annihilator(st, alpha)
            if d == 1:
                yield float(np.linalg.norm(lowered))
            else:
                lower = amcs_amplitudes(d - 1, Z, st.w).psi
                yield float(np.linalg.norm(lowered - Z[alpha - 1] * lower))

    add("ladder property", "A_alpha(t) |Z,t>^(d) = Z_alpha |Z,t>^(d-1)", 1e-12,
        _max(v for d in dims for alpha in (1, 2) for v in ladder(d, alpha)))
    add("block norm", "<Z,t|Z,t>^(d) = exp(-|Z|^2) |Z|^(2(d-1)) / (d-1)!", 1e-12, _max(
        abs(st.norm_sq() - amcs_norm_sq(d, Z)) for d in dims for st in states[d]
    ))

    total, d = 0.0, 1
    while True:
        term = amcs_norm_sq(d, Z)
        total += term
        if d > np.vdot(Z, Z).real and term < 1e-12 * 1e-3:
            break
        d += 1
    add("norm completeness", "sum_d exp(-|Z|^2) |Z|^(2(d-1)) / (d-1)! = 1", 1e-11, abs(total - 1.0))

    def infidelity(d):
        direct = evolve_d(rotating, states[d][0].psi, grid, STEP).psi
        amcs = amcs_trajectory(d, Z, traj)
        for a, b in zip(amcs, direct):
            yield 1.0 - abs(np.vdot(a, b)) / (np.linalg.norm(a) * np.linalg.norm(b))

    add("coherent path vs direct integration", "1 - |<psi_coherent|psi_direct>|", 1e-8,
        _max(v for d in dims for v in infidelity(d)))

    def bridge(d):
        for st in states[d]:
            zeta, pref = amcs_to_pscs(st)
            yield np.linalg.norm(st.psi - pref * pscs_state(d, zeta).psi), abs(abs(pref) ** 2 - amcs_norm_sq(d, Z))

    bridged = [b for d in dims for b in bridge(d)]
    add("coherent block to Perelomov state", "|Z,t>^(d) = |Z|^(d-1) e^(-|Z|^2/2) e^(i(d-1) arg Z~2) / sqrt((d-1)!) |zeta>^(d)",
        1e-10, _max(b[0] for b in bridged))
    add("bridge prefactor modulus", "|prefactor|^2 = <Z,t|Z,t>^(d)", 1e-12, _max(b[1] for b in bridged))

    reduced = [(dinverse_reduction(st), dinverse_coefficient(st)) for d in dims for st in states[d]]
    add("inverse displacement remainder", "D(zeta)^-1 |Z,t>^(d) is proportional to |j,-j>", 1e-10,
        _max(r[0][1] for r in reduced))
    add("inverse displacement coefficient",
        "coefficient = |Z|^(d-1) e^(-|Z|^2/2) (Z~2 / Z~2*)^((d-1)/2) / sqrt((d-1)!)", 1e-10,
        _max(abs(r[0][0] - r[1]) for r in reduced))
    add("displacement unitarity", "D(zeta) D(zeta)^+ = I", 1e-11,
        _max(unitarity_defect(displacement(d, z).matrix) for d in dims for z in zetas))
    add("resolution of identity", "int |zeta><zeta| (2j+1)/pi d^2zeta / (1+|zeta|^2)^2 = I", 1e-6, _max(
        resolution_of_identity(d, ROI_RESOLUTION, ROI_RESOLUTION).deviation
        for d in dims if d <= ROI_MAX_DIM
    ))
    add("casimir dispersion", "<S^2> - <S>^2 = j in |j,-j>", 1e-12,
        _max(abs(casimir_dispersion(d) - (d - 1) / 2) for d in dims))

    if d_max >= 2:
        def saturation(d):
            target = ((d - 1) / 4) ** 2
            for z in zetas:
                lhs, rhs = dispersion_saturation(d, z)
                yield max(abs(lhs - rhs), abs(lhs - target))

        add("uncertainty saturation", "var(s~1) var(s~2) = <s~3>^2 / 4 = (j/2)^2", 1e-10,
            _max(v for d in range(2, d_max + 1) for v in saturation(d)))

    def axial_defect(d):
        c = rng.normal(size=d) + 1j * rng.normal(size=d)
        c /= np.linalg.norm(c)
        tr = evolve_d(axial, c, grid, STEP)
        for state in tr:
            yield np.max(np.abs(state.psi - axial_solution(d, c, axial, state.t).psi))

    add("axial closed form", "psi_a(t) = c_a exp(-i (d-2a+1) Xi(t))", 1e-9,
        _max(v for d in dims for v in axial_defect(d)))

    if d_max >= 2:
        fine = TimeGrid.linspace(0.0, 1.0, 1001)

        def recurrence(d):
            psi0 = amcs_amplitudes(d, Z).normalized()
            return _max(recurrence_residual(evolve_d(rotating, psi0, fine, STEP), rotating))

        add("recurrence", "psi_(a+1) from psi_a, psi_(a-1) and d psi_a/dt", 1e-6,
            _max(recurrence(d) for d in range(2, d_max + 1)))

    return VerificationReport(d_max, int(seed), tuple(checks))
