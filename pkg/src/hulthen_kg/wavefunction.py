"""Unnormalised radial wave functions and the energy-dependent normalisation.

With z = 1 / (1 - q e^{-delta r}) the radial function is

    R(r) = (1/r) z^mu (z - 1)^nu 2F1(-n, n + 2 mu + 2 nu + 1; 1 + 2 mu; z),

(z - 1 = q / (e^{delta r} - q)), and the terminating 2F1 is a degree-n
polynomial in z, so it is summed directly for any z.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .model import PoleError, PotentialParams, QuantumNumbers
from .quantization import aux_at


class IntegrationError(RuntimeError):
    pass


class NonNormalizableError(IntegrationError):
    """The normalisation integral diverges at the origin for this state."""


def hyp2f1_terminating(neg_n: int, b: float, c: float, z):
    """Sum_{k=0}^{n} (-n)_k (b)_k / (c)_k z^k / k! by forward term recurrence."""
    n = -int(neg_n)
    if n < 0 or neg_n != -n:
        raise ValueError(f"first parameter must be a non-positive integer, got {neg_n}")
    z = np.asarray(z, dtype=float)
    term = np.ones_like(z)
    total = np.ones_like(z)
    for k in range(n):
        if c + k == 0:
            raise PoleError(f"(c)_k vanishes at k={k + 1} for c={c}")
        term = term * ((k - n) * (b + k) / ((c + k) * (k + 1))) * z
        total = total + term
    return total if total.ndim else float(total)


@dataclass(frozen=True)
class RadialWaveParams:
    mu: float
    nu: float
    n: int
    eigen_e: float
    params: PotentialParams
    sigma_cap: float = 0.0

    @classmethod
    def from_state(cls, energy: float, qn: QuantumNumbers, params: PotentialParams):
        """Exponents at a solved eigenvalue.

        nu is the decaying root of nu^2 = alpha^2.  mu is the branch the
        quantization condition selects, mu = Sigma - n - nu, which squares to
        alpha^2 + sigma^2 - beta^2 at a root but is usually negative.
        """
        aux = aux_at(energy, qn, params)
        if not aux.nu > 0:
            raise ValueError(f"E={energy} is not a bound state (alpha^2={aux.alpha2})")
        if np.isnan(aux.sigma_cap):
            raise ValueError(f"Sigma is not real at E={energy}")
        mu = aux.sigma_cap - qn.n - aux.nu
        return cls(mu=mu, nu=aux.nu, n=qn.n, eigen_e=energy, params=params,
                   sigma_cap=aux.sigma_cap)

    @property
    def hyp_b(self) -> float:
        return self.n + 2 * self.mu + 2 * self.nu + 1

    @property
    def hyp_c(self) -> float:
        return 1 + 2 * self.mu


def _z(r, p: PotentialParams):
    x = p.q * np.exp(-p.delta * np.asarray(r, dtype=float))
    if np.any(x == 1):
        raise PoleError("1 - q exp(-delta r) vanishes")
    return 1.0 / (1.0 - x), x / (1.0 - x)


def log_abs_chi(r, wp: RadialWaveParams):
    """(sign, log|r R(r)|); stays finite where R itself would overflow."""
    z, zm1 = _z(r, wp.params)
    poly = hyp2f1_terminating(-wp.n, wp.hyp_b, wp.hyp_c, z)
    with np.errstate(divide="ignore"):
        logv = wp.mu * np.log(z) + wp.nu * np.log(zm1) + np.log(np.abs(poly))
    return np.sign(poly), logv


def radial_wavefunction(r, wp: RadialWaveParams):
    """Unnormalised R(r) (overall constant set to 1)."""
    r = np.asarray(r, dtype=float)
    sign, logv = log_abs_chi(r, wp)
    return sign * np.exp(logv) / r


def normalization_weight(r, energy: float, params: PotentialParams):
    """Density factor 1 + 4 a V0 h + 2 a^2 (V0^2 - S0^2) h^2, h = e^{-dr}/(1 - q e^{-dr})."""
    _, h = _z(r, params)
    a = params.a
    return 1 + 4 * a * params.v0 * h + 2 * a * a * (params.v0**2 - params.s0**2) * h * h


def origin_exponent(wp: RadialWaveParams) -> float:
    """Power p with r^2 w |R|^2 ~ r^p as r -> 0 (q = 1 only; q < 1 is regular)."""
    if wp.params.q < 1:
        return 0.0
    p = wp.params
    # chi = r R grows like z^(mu + nu + n) with z ~ 1/(delta r)
    order = wp.mu + wp.nu + wp.n
    if p.a != 0 and p.v0**2 != p.s0**2:
        w_order = 2
    elif p.a != 0 and p.v0 != 0:
        w_order = 1
    else:
        w_order = 0
    return -2 * order - w_order


def normalization_constant(wp: RadialWaveParams, rel_tol: float = 1e-8,
                           max_segments: int = 400, limit: int = 200) -> float:
    """1 / sqrt( int_0^inf r^2 w(r, E) |R(r)|^2 dr ) by segmented adaptive quadrature.

    Segments have width 1/delta; once a segment is negligible the remainder is
    closed with the exponential tail int_R^inf g(R) e^{-2 nu delta (r - R)} dr.
    """
    if origin_exponent(wp) <= -1:
        raise NonNormalizableError(
            f"integrand ~ r^{origin_exponent(wp):.3g} at the origin for E={wp.eigen_e}")
    p = wp.params
    width = 1.0 / p.delta
    probe = np.linspace(1e-3 * width, 10 * width, 2001)
    _, logs = log_abs_chi(probe, wp)
    shift = float(np.nanmax(2 * logs))

    def g(r):
        _, lc = log_abs_chi(r, wp)
        return float(normalization_weight(r, wp.eigen_e, p) * np.exp(2 * lc - shift))

    total = err = 0.0
    kappa = 2 * wp.nu * p.delta
    for k in range(max_segments):
        lo, hi = k * width, (k + 1) * width
        val, e = quad(g, lo, hi, epsrel=rel_tol / 10, epsabs=0.0, limit=limit)
        total += val
        err += e
        tail = g(hi) / kappa
        if k > 0 and abs(tail) <= rel_tol * abs(total) * 1e-2:
            total += tail
            break
    else:
        raise IntegrationError(f"tail not negligible after {max_segments} segments")
    if not total > 0 or err > rel_tol * abs(total):
        raise IntegrationError(f"quadrature error {err:g} vs integral {total:g}")
    return float(np.exp(-0.5 * (np.log(total) + shift)))
