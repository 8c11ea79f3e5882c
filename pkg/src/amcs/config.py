"""Experiment configuration: one JSON document, validated against ``config_schema.json``."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema
import numpy as np

from .errors import ConfigError
from .fields import FieldProfile, field_from_config
from .numerics import TimeGrid

SCHEMA_VERSION = 1
DEFAULT_OUTPUTS = ("amplitudes", "verify")


def load_schema() -> dict:
    return json.loads(resources.files("amcs").joinpath("config_schema.json").read_text())


_VALIDATOR = jsonschema.Draft202012Validator(load_schema())


@dataclass(frozen=True)
class ExperimentConfig:
    field: FieldProfile
    d_list: tuple[int, ...]
    Z: np.ndarray
    grid: TimeGrid
    step: float
    order: int = 4
    outputs: tuple[str, ...] = DEFAULT_OUTPUTS
    seed: int = 0
    output_dir: str | None = None
    raw: dict[str, Any] = field(default_factory=dict, repr=False)

    def wants(self, name: str) -> bool:
        return name in self.outputs


def _json_path(parts) -> str:
    out = "$"
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def parse_config(doc: Any) -> ExperimentConfig:
    """Validate a decoded document and build the config.

    Raises
    ------
    ConfigError
        With ``location`` set to a JSON path such as ``$.grid.samples``.
    """
    errors = sorted(_VALIDATOR.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        parts = list(err.absolute_path)
        if err.validator == "required":
            parts += [p for p in err.validator_value if p not in err.instance][:1]
        raise ConfigError(err.message, _json_path(parts))

    fld = field_from_config(doc["field"], "$.field")
    g = doc["grid"]
    t0, t1, n = float(g["t0"]), float(g["t1"]), int(g["samples"])
    if not t1 > t0:
        raise ConfigError("grid.t1 must exceed grid.t0", "$.grid")
    step = float(doc["step"])
    if step > (t1 - t0) / n:
        raise ConfigError(f"step {step} exceeds (t1 - t0)/samples = {(t1 - t0) / n}", "$.step")
    lo, hi = fld.domain
    if t0 < lo or t1 > hi:
        raise ConfigError(f"grid [{t0}, {t1}] leaves the field domain [{lo}, {hi}]", "$.grid")
    Z = np.array([complex(re, im) for re, im in doc["Z"]])
    return ExperimentConfig(
        field=fld,
        d_list=tuple(int(d) for d in doc["d_list"]),
        Z=Z,
        grid=TimeGrid.linspace(t0, t1, n),
        step=step,
        order=int(doc.get("order", 4)),
        outputs=tuple(doc.get("outputs", DEFAULT_OUTPUTS)),
        seed=int(doc.get("seed", 0)),
        output_dir=doc.get("output_dir"),
        raw=doc,
    )


def load_config(path) -> ExperimentConfig:
    """Read and validate a config file; syntax errors report line and column."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(exc.msg, f"line {exc.lineno} column {exc.colno}") from exc
    return parse_config(doc)
