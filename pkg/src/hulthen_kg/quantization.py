"""Auxiliary quantities and the transcendental quantization residual.

The bound-state energies are the zeros in (-m, m) of

    f(E) = sqrt(m^2 - E^2) - (delta/2) [ (Sigma - n) + (beta^2 - sigma^2) / (Sigma - n) ]

where every auxiliary quantity depends on E through epsilon = 1 + aE.
All functions here accept scalars or numpy arrays of energies.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .model import PotentialParams, QuantumNumbers

POLE_GUARD = 1e-9


class Validity(enum.Flag):
    NONE = 0
    BOUND_DOMAIN = enum.auto()
    SIGMA_REAL = enum.auto()
    SIGMA_MINUS_N_NONZERO = enum.auto()
    RHS_POSITIVE = enum.auto()

    # RHS_POSITIVE is diagnostic only: f stays finite where the right-hand side
    # is negative, and masking those points would hide genuine sign changes.
    EVALUABLE = BOUND_DOMAIN | SIGMA_REAL | SIGMA_MINUS_N_NONZERO


@dataclass(frozen=True)
class ValidityReport:
    flags: Validity
    detail: dict = field(default_factory=dict)

    @property
    def evaluable(self) -> bool:
        return Validity.EVALUABLE in self.flags


class DomainError(ValueError):
    """The residual cannot be evaluated at the requested energy."""

    def __init__(self, report: ValidityReport):
        missing = [f.name for f in (Validity.BOUND_DOMAIN, Validity.SIGMA_REAL,
                                    Validity.SIGMA_MINUS_N_NONZERO) if f not in report.flags]
        super().__init__(f"residual not evaluable ({', '.join(missing)} failed): {report.detail}")
        self.report = report


@dataclass(frozen=True)
class AuxiliaryQuantities:
    epsilon: float
    alpha2: float
    sigma2: float
    beta2: float
    mu2: float
    mu: float
    nu: float
    theta2: float
    theta: float
    sigma_cap: float


def _aux_arrays(E, qn: QuantumNumbers, p: PotentialParams):
    E = np.asarray(E, dtype=float)
    g = qn.gamma
    q, d, m = p.q, p.delta, p.mass
    d2 = d * d
    eps = 1.0 + p.a * E
    coupling = p.v0**2 - p.s0**2
    alpha2 = (m * m - E * E) / d2
    sigma2 = 2.0 * eps * (E * p.v0 + m * p.s0) / (q * d2)
    beta2 = (coupling * eps * eps / d2 - g) / (q * q)
    mu2 = alpha2 + sigma2 - beta2
    theta2 = 0.25 - beta2
    radicand = 0.25 - coupling * eps * eps / (q * q * d2) + g / (q * q)
    with np.errstate(invalid="ignore"):
        sigma_cap = np.sqrt(radicand) - 0.5
        nu = np.sqrt(alpha2)
        mu = np.sqrt(mu2)
        theta = np.sqrt(theta2)
    return dict(epsilon=eps, alpha2=alpha2, sigma2=sigma2, beta2=beta2, mu2=mu2, mu=mu,
                nu=nu, theta2=theta2, theta=theta, sigma_cap=sigma_cap, radicand=radicand)


def aux_at(E: float, qn: QuantumNumbers, params: PotentialParams) -> AuxiliaryQuantities:
    """Auxiliary quantities at a trial energy; negative radicands give NaN."""
    arr = _aux_arrays(E, qn, params)
    arr.pop("radicand")
    return AuxiliaryQuantities(**{k: float(v) for k, v in arr.items()})


def _flags_arrays(E, qn, params, pole_guard):
    E = np.asarray(E, dtype=float)
    aux = _aux_arrays(E, qn, params)
    s_n = aux["sigma_cap"] - qn.n
    bound = np.abs(E) < params.mass
    sig_real = aux["radicand"] >= 0
    with np.errstate(invalid="ignore"):
        nonpole = np.abs(s_n) >= pole_guard
        ok = bound & sig_real & nonpole
        with np.errstate(divide="ignore"):
            rhs = 0.5 * params.delta * (s_n + (aux["beta2"] - aux["sigma2"]) / s_n)
        lhs = np.sqrt(np.where(bound, params.mass**2 - E * E, np.nan))
    return aux, s_n, bound, sig_real, nonpole, ok, lhs, rhs


def validity(E: float, qn: QuantumNumbers, params: PotentialParams,
             pole_guard: float = POLE_GUARD) -> ValidityReport:
    aux, s_n, bound, sig_real, nonpole, ok, lhs, rhs = _flags_arrays(E, qn, params, pole_guard)
    flags = Validity.NONE
    if bound:
        flags |= Validity.BOUND_DOMAIN
    if sig_real:
        flags |= Validity.SIGMA_REAL
    if nonpole:
        flags |= Validity.SIGMA_MINUS_N_NONZERO
    if ok and rhs > 0:
        flags |= Validity.RHS_POSITIVE
    detail = {"E": float(E), "sigma_radicand": float(aux["radicand"]),
              "sigma_minus_n": float(s_n), "rhs": float(rhs) if ok else float("nan")}
    return ValidityReport(flags, detail)


def residual_values(E, qn: QuantumNumbers, params: PotentialParams,
                    pole_guard: float = POLE_GUARD) -> np.ndarray:
    """Vectorised residual; points outside the evaluable domain are NaN."""
    *_, ok, lhs, rhs = _flags_arrays(E, qn, params, pole_guard)
    return np.where(ok, lhs - rhs, np.nan)


def quantization_residual(E: float, qn: QuantumNumbers, params: PotentialParams,
                          pole_guard: float = POLE_GUARD) -> float:
    """f(E); raises DomainError carrying the validity report when not evaluable."""
    val = float(residual_values(E, qn, params, pole_guard))
    if np.isnan(val):
        raise DomainError(validity(E, qn, params, pole_guard))
    return val


def derivative_step(E: float) -> float:
    return max(1e-8, 1e-8 * abs(E))


def residual_derivative(E: float, qn: QuantumNumbers, params: PotentialParams,
                        h: float | None = None, stencil: int = 3,
                        pole_guard: float = POLE_GUARD) -> float:
    """df/dE by central differences (3- or 5-point stencil)."""
    if h is None:
        h = derivative_step(E)
    if stencil == 3:
        offsets, weights, scale = (-1, 1), (-1.0, 1.0), 2 * h
    elif stencil == 5:
        offsets, weights, scale = (-2, -1, 1, 2), (1.0, -8.0, 8.0, -1.0), 12 * h
    else:
        raise ValueError("stencil must be 3 or 5")
    pts = E + h * np.asarray(offsets, dtype=float)
    vals = residual_values(pts, qn, params, pole_guard)
    if np.any(np.isnan(vals)):
        bad = pts[np.isnan(vals)][0]
        raise DomainError(validity(bad, qn, params, pole_guard))
    return float(np.dot(weights, vals) / scale)
