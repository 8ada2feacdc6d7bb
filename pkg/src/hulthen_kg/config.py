"""Run configuration shared by the CLI, stored as ``key = value`` text."""
from __future__ import annotations

from dataclasses import dataclass, fields

from .model import CouplingLimit, PotentialParams
from .solver import RootFindConfig


@dataclass(frozen=True)
class RunConfig:
    limit: str = "emes"
    dim: int = 3
    a: float = 1.0
    v0: float | None = None
    s0: float | None = None
    delta: float = 0.01
    q: float = 1.0
    mass: float = 1.0
    nmax: int = 4
    lmax: int | None = None
    format: str = "table"
    output: str | None = None
    tol: float = 1e-12
    scan_points: int = 20001
    energy_sign: str = "all"

    def potential(self) -> PotentialParams:
        limit = CouplingLimit(self.limit)
        kw = dict(a=self.a, q=self.q, delta=self.delta, mass=self.mass)
        if limit is CouplingLimit.GENERAL:
            if self.v0 is None or self.s0 is None:
                raise ValueError("the general limit needs both --v0 and --s0")
            return PotentialParams(self.v0, self.s0, limit=limit, **kw)
        if limit is CouplingLimit.PURE_SCALAR:
            depth = self.s0 if self.s0 is not None else 2.0
            if self.v0 not in (None, 0):
                raise ValueError("the scalar limit has v0 = 0")
        else:
            depth = self.v0 if self.v0 is not None else 2.0
        p = PotentialParams.for_limit(limit, depth, **kw)
        if self.s0 is not None and self.s0 != p.s0:
            raise ValueError(f"s0={self.s0} is inconsistent with the {limit.value} limit")
        return p

    def root_config(self) -> RootFindConfig:
        return RootFindConfig(scan_points=self.scan_points, tol_residual=self.tol)

    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            v = getattr(self, f.name)
            if v is not None:
                lines.append(f"{f.name.replace('_', '-')} = {v}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_mapping(cls, data: dict) -> "RunConfig":
        types = {f.name: f.type for f in fields(cls)}
        kw = {}
        for key, raw in data.items():
            name = key.replace("-", "_")
            if name not in types:
                raise KeyError(f"unknown config key {key!r}")
            t = types[name]
            if raw is None or raw == "None":
                kw[name] = None
            elif "int" in t:
                kw[name] = int(raw)
            elif "float" in t:
                kw[name] = float(raw)
            else:
                kw[name] = str(raw)
        return cls(**kw)

    @classmethod
    def from_text(cls, text: str) -> "RunConfig":
        return cls.from_mapping(parse_key_values(text))


def parse_key_values(text: str) -> dict[str, str]:
    out = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {n}: expected 'key = value', got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key] = value
    return out
