"""Canonical partition function and thermodynamic functions of a finite spectrum.

Two derivative conventions are supported:

* ``BETA`` differentiates F and U with respect to beta itself,
  S = -k_B dF/dbeta and C_v = k_B dU/dbeta (finite differences on the grid);
* ``STANDARD`` uses temperature derivatives, S = k_B (ln Z + beta U) and
  C_v = k_B beta^2 Var(E), both evaluated in closed form.

Both pairs are related by the chain rule d/dT = -beta^2 d/dbeta (k_B = 1):
S_std = -beta^2 S_beta and C_v,std = -beta^2 C_v,beta.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np


class EmptySpectrumError(ValueError):
    pass


class GridTooSmallError(ValueError):
    pass


class Convention(str, enum.Enum):
    BETA = "beta"
    STANDARD = "standard"


def _energies(energies) -> np.ndarray:
    e = np.asarray(energies, dtype=float).ravel()
    if e.size == 0:
        raise EmptySpectrumError("no energies to sum over")
    return e


def _weights(energies, beta):
    """Boltzmann weights shifted by the ground state: (weights, E_min) with weights[b, i]."""
    e = _energies(energies)
    beta = np.atleast_1d(np.asarray(beta, dtype=float))
    e_min = e.min()
    return np.exp(-np.outer(beta, e - e_min)), e, e_min, beta


def log_partition_function(energies, beta):
    w, e, e_min, b = _weights(energies, beta)
    out = -b * e_min + np.log(w.sum(axis=1))
    return out if np.ndim(beta) else float(out[0])


def partition_function(energies, beta):
    """Z = sum_i exp(-beta E_i), returned as (ln Z, Z)."""
    lz = log_partition_function(energies, beta)
    return lz, np.exp(lz)


def helmholtz(log_z, beta):
    return -np.asarray(log_z) / np.asarray(beta)


def _moments(energies, beta):
    w, e, _, b = _weights(energies, beta)
    z = w.sum(axis=1)
    mean = (w @ e) / z
    var = (w @ (e - e.mean()) ** 2) / z - (mean - e.mean()) ** 2
    return mean, np.maximum(var, 0.0)


def internal_energy(energies, beta):
    """U = -d ln Z / d beta, evaluated exactly as the Boltzmann-weighted mean energy."""
    mean, _ = _moments(energies, beta)
    return mean if np.ndim(beta) else float(mean[0])


def energy_variance(energies, beta):
    _, var = _moments(energies, beta)
    return var if np.ndim(beta) else float(var[0])


def _grad(y, beta):
    if np.size(beta) < 3:
        raise GridTooSmallError("finite-difference derivatives need at least 3 beta points")
    return np.gradient(y, beta, edge_order=2)


def entropy(f_series, beta, convention=Convention.BETA, kb: float = 1.0,
            log_z=None, u_series=None):
    """S on a beta grid.  The standard form needs ``log_z`` and ``u_series``."""
    beta = np.asarray(beta, dtype=float)
    if Convention(convention) is Convention.BETA:
        return -kb * _grad(np.asarray(f_series), beta)
    return kb * (np.asarray(log_z) + beta * np.asarray(u_series))


def specific_heat(u_series, beta, convention=Convention.BETA, kb: float = 1.0,
                  variance=None):
    """C_v on a beta grid.  The standard form needs the energy ``variance``."""
    beta = np.asarray(beta, dtype=float)
    if Convention(convention) is Convention.BETA:
        return kb * _grad(np.asarray(u_series), beta)
    return kb * beta**2 * np.asarray(variance)


@dataclass(frozen=True)
class ThermoSeries:
    beta: np.ndarray
    z: np.ndarray
    f: np.ndarray
    s: np.ndarray
    u: np.ndarray
    cv: np.ndarray
    convention: Convention
    kb: float = 1.0

    @property
    def temperature(self) -> np.ndarray:
        return 1.0 / self.beta

    def rows(self):
        for i in range(self.beta.size):
            yield (self.beta[i], 1.0 / self.beta[i], self.z[i], self.f[i], self.s[i],
                   self.u[i], self.cv[i], self.convention.value)


def beta_grid(beta_min: float = 0.05, beta_max: float = 50.0, steps: int = 200,
              spacing: str = "log") -> np.ndarray:
    if not 0 < beta_min < beta_max:
        raise ValueError("need 0 < beta_min < beta_max")
    if steps < 2:
        raise ValueError("need at least 2 beta points")
    if spacing == "log":
        return np.geomspace(beta_min, beta_max, steps)
    if spacing == "lin":
        return np.linspace(beta_min, beta_max, steps)
    raise ValueError(f"unknown grid spacing {spacing!r}")


def thermo_series(energies, beta, convention=Convention.BETA, kb: float = 1.0,
                  degeneracy=None) -> ThermoSeries:
    """All five functions on ``beta``.

    ``degeneracy`` optionally repeats each energy that many times; by default
    every eigenvalue counts once.
    """
    e = _energies(energies)
    if degeneracy is not None:
        e = np.repeat(e, np.asarray(degeneracy, dtype=int))
    beta = np.asarray(beta, dtype=float)
    if np.any(beta <= 0):
        raise ValueError("beta must be positive")
    convention = Convention(convention)
    lz = log_partition_function(e, beta)
    u, var = _moments(e, beta)
    f = helmholtz(lz, beta)
    s = entropy(f, beta, convention, kb, log_z=lz, u_series=u)
    cv = specific_heat(u, beta, convention, kb, variance=var)
    return ThermoSeries(beta, np.exp(lz), f, s, u, cv, convention, kb)
