"""Verification configuration: flat ``key = value`` files with dotted keys.

Example::

    # positive curvature, inverse-sqrt family
    chart.n = 3
    chart.c = 1
    family.kind = inverse-sqrt
    family.B = 1
    A = 1
    points = 50
    t_max = 2
    seed = 7
    tol.local-symmetry = 1e-5
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from ..bundle import NaturalStructure
from ..errors import ConfigError
from ..params import LambdaFamily
from ..spaceform import SpaceFormChart

KNOWN_KEYS = {
    "chart.n", "chart.c", "family.kind", "family.m", "family.B", "A", "points", "t_max",
    "seed", "h", "directions", "admissibility.samples", "include_eq28_literal", "jobs",
}


@dataclass(frozen=True)
class VerificationConfig:
    n: int = 3
    c: float = 0.0
    family_kind: str = "constant"
    m: float = 2.0
    B: float = 1.0
    A: float = 1.0
    points: int = 10
    t_max: float = 1.0
    seed: int = 0
    h: float | None = None
    directions: int = 100
    admissibility_samples: int = 201
    include_eq28_literal: bool = False
    jobs: int = 1
    tolerances: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.points < 1:
            raise ConfigError(f"points must be >= 1, got {self.points}")
        if not self.t_max > 0:
            raise ConfigError(f"t_max must be positive, got {self.t_max}")
        if self.directions < 2:
            raise ConfigError("directions must be >= 2")

    def family(self) -> LambdaFamily:
        try:
            if self.family_kind == "constant":
                return LambdaFamily.constant(B=self.B, A=self.A)
            if self.family_kind == "power":
                return LambdaFamily.power(self.m, self.B, A=self.A)
            if self.family_kind == "inverse-sqrt":
                return LambdaFamily.inverse_sqrt(self.c, self.B, A=self.A)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        raise ConfigError(f"family.kind {self.family_kind!r} is not available from config files")

    def structure(self) -> NaturalStructure:
        try:
            chart = SpaceFormChart(self.n, self.c)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        return NaturalStructure(chart, self.family())

    def echo(self) -> dict:
        out = {
            "chart": {"n": self.n, "c": self.c},
            "family": self.family().describe(),
            "A": self.A,
            "points": self.points,
            "t_max": self.t_max,
            "seed": self.seed,
            "h": self.h,
            "directions": self.directions,
            "include_eq28_literal": self.include_eq28_literal,
        }
        if self.tolerances:
            out["tolerances"] = dict(sorted(self.tolerances.items()))
        return out


def parse_text(text: str) -> dict[str, str]:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in KNOWN_KEYS and not key.startswith("tol."):
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        values[key] = value
    return values


def _bool(s: str) -> bool:
    s = str(s).strip().lower()
    if s in ("1", "true", "yes", "on"):
        return True
    if s in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {s!r}")


def from_mapping(values: dict) -> VerificationConfig:
    conv = {
        "chart.n": ("n", int), "chart.c": ("c", float), "family.kind": ("family_kind", str),
        "family.m": ("m", float), "family.B": ("B", float), "A": ("A", float),
        "points": ("points", int), "t_max": ("t_max", float), "seed": ("seed", int),
        "h": ("h", float), "directions": ("directions", int),
        "admissibility.samples": ("admissibility_samples", int),
        "include_eq28_literal": ("include_eq28_literal", _bool), "jobs": ("jobs", int),
    }
    kwargs, tolerances = {}, {}
    for key, value in values.items():
        try:
            if key.startswith("tol."):
                tolerances[key[4:]] = float(value)
            elif key in conv:
                name, fn = conv[key]
                kwargs[name] = fn(value)
            else:
                raise ConfigError(f"unknown key {key!r}")
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"bad value for {key}: {value!r}") from exc
    return VerificationConfig(tolerances=tolerances, **kwargs)


def load_config(path: str | Path, overrides: dict | None = None) -> VerificationConfig:
    values = parse_text(Path(path).read_text())
    values.update(overrides or {})
    return from_mapping(values)
