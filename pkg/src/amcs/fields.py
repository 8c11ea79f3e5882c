"""Driving field profiles ``F(t) = (F1, F2, F3)``.

A profile is a small immutable object; calling it evaluates the field at a
scalar time (shape ``(3,)``) or at an array of times (shape ``(n, 3)``).
Units are angular frequency: for an electron in a magnetic field
``F = (e / m_e) B``.

Presets are smooth by construction.  Tabulated profiles are interpolated by a
not-a-knot cubic spline, so they are only C^2 between knots, and they refuse
to extrapolate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import ConfigError, ContractError, DomainError, NumericDomainError


class FieldProfile:
    kind = "abstract"
    domain = (-math.inf, math.inf)

    @property
    def is_axial(self) -> bool:
        """True when ``F1 = F2 = 0`` identically, i.e. ``F(+-) = 0``."""
        raise NotImplementedError

    def _eval(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, t):
        tt = np.asarray(t, dtype=float)
        lo, hi = self.domain
        if np.any(tt < lo) or np.any(tt > hi):
            raise DomainError(f"t outside the field domain [{lo}, {hi}]")
        out = self._eval(np.atleast_1d(tt))
        if not np.all(np.isfinite(out)):
            raise NumericDomainError("field evaluated to non-finite values")
        return out[0] if tt.ndim == 0 else out

    def to_config(self) -> dict[str, Any]:
        raise NotImplementedError


@dataclass(frozen=True)
class ConstantField(FieldProfile):
    vector: tuple[float, float, float] = (0.0, 0.0, 0.0)
    kind = "constant"

    def __post_init__(self):
        v = tuple(float(x) for x in self.vector)
        if len(v) != 3 or not all(math.isfinite(x) for x in v):
            raise DomainError("constant field needs three finite components")
        object.__setattr__(self, "vector", v)

    @classmethod
    def from_omega0(cls, omega0: float) -> "ConstantField":
        """Field ``(0, 0, 2 omega0)`` along z; ``omega0`` is the Larmor frequency ``eB / 2 m_e``."""
        return cls((0.0, 0.0, 2.0 * omega0))

    @classmethod
    def from_magnetic(cls, b, charge_to_mass: float) -> "ConstantField":
        return cls(tuple(charge_to_mass * np.asarray(b, dtype=float)))

    @property
    def is_axial(self):
        return self.vector[0] == 0 and self.vector[1] == 0

    @property
    def omega0(self) -> float:
        return self.vector[2] / 2

    def _eval(self, t):
        return np.broadcast_to(np.array(self.vector), (t.size, 3)).copy()

    def to_config(self):
        return {"kind": "constant", "vector": list(self.vector)}


def zero_field() -> ConstantField:
    return ConstantField((0.0, 0.0, 0.0))


@dataclass(frozen=True)
class AxialField(FieldProfile):
    """``F = (0, 0, offset + amplitude cos(frequency t + phase))``."""

    offset: float = 0.0
    amplitude: float = 0.0
    frequency: float = 0.0
    phase: float = 0.0
    kind = "axial"

    @property
    def is_axial(self):
        return True

    def _eval(self, t):
        out = np.zeros((t.size, 3))
        out[:, 2] = self.offset + self.amplitude * np.cos(self.frequency * t + self.phase)
        return out

    def to_config(self):
        return {"kind": "axial", "offset": self.offset, "amplitude": self.amplitude,
                "frequency": self.frequency, "phase": self.phase}


@dataclass(frozen=True)
class RotatingField(FieldProfile):
    """Transverse field of fixed magnitude rotating about z, plus a static ``bz``.

    ``F = (A cos(w t + p), A sin(w t + p), bz)``.
    """

    amplitude: float = 1.0
    frequency: float = 1.0
    phase: float = 0.0
    bz: float = 0.0
    kind = "rotating"

    @property
    def is_axial(self):
        return self.amplitude == 0

    def _eval(self, t):
        arg = self.frequency * t + self.phase
        out = np.empty((t.size, 3))
        out[:, 0] = self.amplitude * np.cos(arg)
        out[:, 1] = self.amplitude * np.sin(arg)
        out[:, 2] = self.bz
        return out

    def to_config(self):
        return {"kind": "rotating", "amplitude": self.amplitude, "frequency": self.frequency,
                "phase": self.phase, "bz": self.bz}


@dataclass(frozen=True, eq=False)
class TabulatedField(FieldProfile):
    """Cubic-spline interpolation of sampled field values.

    ``values`` has shape ``(n, 3)``.  Evaluation outside ``[times[0], times[-1]]``
    raises :class:`DomainError`.
    """

    times: np.ndarray
    values: np.ndarray
    _spline: Any = field(init=False, repr=False)
    kind = "tabulated"

    def __post_init__(self):
        t = np.array(self.times, dtype=float)
        v = np.array(self.values, dtype=float)
        if t.ndim != 1 or t.size < 4:
            raise DomainError("tabulated field needs at least four sample times")
        if v.shape != (t.size, 3):
            raise DomainError(f"values must have shape ({t.size}, 3), got {v.shape}")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(v))):
            raise NumericDomainError("tabulated field has non-finite entries")
        if not np.all(np.diff(t) > 0):
            raise DomainError("tabulated times must be strictly increasing")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "_spline", CubicSpline(t, v, axis=0, extrapolate=False))

    @property
    def domain(self):
        return (float(self.times[0]), float(self.times[-1]))

    @property
    def is_axial(self):
        return bool(np.all(self.values[:, :2] == 0))

    def _eval(self, t):
        out = self._spline(t)
        if self.is_axial:
            out[:, :2] = 0.0
        return out

    def to_config(self):
        return {"kind": "tabulated", "times": self.times.tolist(), "values": self.values.tolist()}


@dataclass(frozen=True)
class SumField(FieldProfile):
    terms: tuple[FieldProfile, ...] = ()
    kind = "sum"

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.terms:
            raise DomainError("a sum field needs at least one term")

    @property
    def domain(self):
        return (max(p.domain[0] for p in self.terms), min(p.domain[1] for p in self.terms))

    @property
    def is_axial(self):
        return all(p.is_axial for p in self.terms)

    def _eval(self, t):
        return sum(p._eval(t) for p in self.terms)

    def to_config(self):
        return {"kind": "sum", "terms": [p.to_config() for p in self.terms]}


def evaluate(profile: FieldProfile, t):
    """Field vector ``(F1, F2, F3)`` at ``t``."""
    return profile(t)


def circular_components(f):
    """``(F0, F(+), F(-))`` with ``F0 = F3/2``, ``F(+-) = (F1 +- i F2)/2``.

    Accepts a single vector or an ``(n, 3)`` array.
    """
    f = np.asarray(f, dtype=float)
    f0 = 0.5 * f[..., 2]
    fp = 0.5 * (f[..., 0] + 1j * f[..., 1])
    return f0, fp, np.conj(fp)


def is_axial(profile: FieldProfile) -> bool:
    return profile.is_axial


def _simpson(fun, a: float, b: float, n: int) -> float:
    x = np.linspace(a, b, n + 1)
    y = fun(x)
    w = np.ones(n + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return float((b - a) / (3 * n) * np.dot(w, y))


def primitive_xi(profile: FieldProfile, t: float, tol: float = 1e-12) -> float:
    """``Xi(t) = int_0^t F3(s)/2 ds`` for an axial profile.

    Exact for constant fields (``omega0 t``); otherwise composite Simpson with
    the panel count doubled until two successive estimates differ by less
    than ``tol``.
    """
    if not profile.is_axial:
        raise ContractError("primitive_xi needs an axial field (F1 = F2 = 0)")
    t = float(t)
    if t == 0.0:
        return 0.0
    if isinstance(profile, ConstantField):
        return profile.vector[2] / 2 * t

    def half_f3(x):
        return 0.5 * profile(x)[:, 2]

    n = 16
    prev = _simpson(half_f3, 0.0, t, n)
    while n < 2**22:
        n *= 2
        cur = _simpson(half_f3, 0.0, t, n)
        if abs(cur - prev) < tol:
            return cur
        prev = cur
    return cur


def field_from_config(cfg: dict, path: str = "field") -> FieldProfile:
    """Build a profile from its configuration mapping (see ``to_config``)."""
    if not isinstance(cfg, dict) or "kind" not in cfg:
        raise ConfigError("field block must be an object with a 'kind'", path)
    kind = cfg["kind"]
    try:
        if kind == "zero":
            return zero_field()
        if kind == "constant":
            if "omega0" in cfg:
                return ConstantField.from_omega0(float(cfg["omega0"]))
            return ConstantField(tuple(cfg["vector"]))
        if kind == "axial":
            return AxialField(*(float(cfg.get(k, 0.0)) for k in ("offset", "amplitude", "frequency", "phase")))
        if kind == "rotating":
            return RotatingField(
                float(cfg.get("amplitude", 1.0)), float(cfg.get("frequency", 1.0)),
                float(cfg.get("phase", 0.0)), float(cfg.get("bz", 0.0)),
            )
        if kind == "tabulated":
            return TabulatedField(np.asarray(cfg["times"]), np.asarray(cfg["values"]))
        if kind == "sum":
            return SumField(tuple(field_from_config(c, f"{path}.terms[{i}]") for i, c in enumerate(cfg["terms"])))
    except KeyError as exc:
        raise ConfigError(f"missing key {exc.args[0]!r}", path) from exc
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc), path) from exc
    raise ConfigError(f"unknown field kind {kind!r}", f"{path}.kind")
