"""Physical configuration, quantum numbers and the deformed Hulthen potentials.

Everything is in natural units (hbar = c = 1); energies, depths and the
screening parameter share one energy unit, lengths are reciprocal energies.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np


class PoleError(ArithmeticError):
    """Raised when ``1 - q exp(-delta r)`` vanishes."""


class CouplingLimit(str, enum.Enum):
    EMES = "emes"
    EMOS = "emos"
    PURE_VECTOR = "vector"
    PURE_SCALAR = "scalar"
    GENERAL = "general"


@dataclass(frozen=True)
class PotentialParams:
    """Depths, energy slope and deformation of the mixed vector/scalar well.

    ``v0`` and ``s0`` are stored signed; ``limit`` only records which coupling
    relation the pair was built to satisfy and is checked on construction.
    """

    v0: float
    s0: float
    a: float = 0.0
    q: float = 1.0
    delta: float = 0.01
    mass: float = 1.0
    limit: CouplingLimit = CouplingLimit.GENERAL

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if not self.mass > 0:
            raise ValueError(f"mass must be positive, got {self.mass}")
        if not 0 < self.q <= 1:
            raise ValueError(f"q must lie in (0, 1], got {self.q}")
        limit = CouplingLimit(self.limit)
        object.__setattr__(self, "limit", limit)
        ok = {
            CouplingLimit.EMES: self.s0 == self.v0,
            CouplingLimit.EMOS: self.s0 == -self.v0,
            CouplingLimit.PURE_VECTOR: self.s0 == 0,
            CouplingLimit.PURE_SCALAR: self.v0 == 0,
            CouplingLimit.GENERAL: True,
        }[limit]
        if not ok:
            raise ValueError(f"v0={self.v0}, s0={self.s0} violate the {limit.value} limit")

    @classmethod
    def for_limit(cls, limit, depth: float = 2.0, **kw) -> "PotentialParams":
        """Build parameters for one of the coupling limits from a single depth.

        For ``general`` the keyword arguments must supply ``v0`` and ``s0``.
        """
        limit = CouplingLimit(limit)
        if limit is CouplingLimit.GENERAL:
            return cls(limit=limit, **kw)
        v0, s0 = {
            CouplingLimit.EMES: (depth, depth),
            CouplingLimit.EMOS: (depth, -depth),
            CouplingLimit.PURE_VECTOR: (depth, 0.0),
            CouplingLimit.PURE_SCALAR: (0.0, depth),
        }[limit]
        return cls(v0=v0, s0=s0, limit=limit, **kw)

    def greene_aldrich_valid(self, r: float) -> bool:
        """True where the centrifugal approximation is meant to hold (delta r < 1)."""
        return self.delta * r < 1 and self.q > 0.9


def centrifugal_gamma(dim: int, l: int) -> float:
    if dim < 1 or l < 0:
        raise ValueError(f"need dim >= 1 and l >= 0, got dim={dim}, l={l}")
    k = dim + 2 * l
    return (k - 1) * (k - 3) / 4


@dataclass(frozen=True)
class QuantumNumbers:
    n: int
    l: int
    dim: int

    def __post_init__(self):
        if self.n < 0 or self.l < 0 or self.dim < 1:
            raise ValueError(f"invalid quantum numbers {self}")

    @property
    def gamma(self) -> float:
        return centrifugal_gamma(self.dim, self.l)


def _hulthen_shape(r, delta, q):
    r = np.asarray(r, dtype=float)
    x = np.exp(-delta * r)
    den = 1.0 - q * x
    if np.any(den == 0):
        raise PoleError(f"1 - q exp(-delta r) vanishes at r={r}")
    return x / den


def vector_potential(r, E: float, params: PotentialParams):
    """-V0 (1 + aE) e^{-delta r} / (1 - q e^{-delta r})."""
    return -params.v0 * (1 + params.a * E) * _hulthen_shape(r, params.delta, params.q)


def scalar_potential(r, E: float, params: PotentialParams):
    """Scalar well entering the mass term; same shape as the vector one with S0."""
    return -params.s0 * (1 + params.a * E) * _hulthen_shape(r, params.delta, params.q)


def greene_aldrich_centrifugal(r, delta: float, q: float = 1.0):
    """Approximation of 1/r^2: delta^2 e^{-2 delta r} / (1 - q e^{-delta r})^2."""
    return delta**2 * _hulthen_shape(r, delta, q) ** 2
