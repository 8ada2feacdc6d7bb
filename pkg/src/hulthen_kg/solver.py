"""Eigenvalue search: uniform scan, sign-change bracketing, safeguarded Newton polish.

The quantum number ``n`` that enters the residual is the table row index
directly (n = 1, 2, ...).  With n = 0 the EMES s-wave residual has a pole
at every energy, and n = row reproduces the tabulated spectra without any
offset; ``Spectrum.provenance`` records this as ``n_offset = 0``.
"""
from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .model import PotentialParams, QuantumNumbers
from .quantization import (DomainError, _aux_arrays, quantization_residual,
                           residual_derivative, residual_values)

log = logging.getLogger(__name__)

N_OFFSET = 0
DEDUPE_TOL = 1e-9


class ConvergenceError(RuntimeError):
    def __init__(self, msg, n=None, l=None):
        if n is not None:
            msg = f"(n={n}, l={l}) {msg}"
        super().__init__(msg)
        self.n, self.l = n, l


@dataclass(frozen=True)
class RootFindConfig:
    scan_points: int = 20001
    e_margin: float = 1e-9  # in units of the mass
    tol_residual: float = 1e-12
    tol_step: float = 1e-12
    max_newton_iters: int = 60
    pole_guard: float = 1e-9

    def __post_init__(self):
        if self.scan_points < 3:
            raise ValueError("scan_points must be >= 3")
        for name in ("e_margin", "tol_residual", "tol_step", "pole_guard"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.max_newton_iters < 1:
            raise ValueError("max_newton_iters must be >= 1")


@dataclass(frozen=True)
class PolishResult:
    root: float
    iterations: int
    residual: float
    bisection_steps: int = 0


@dataclass(frozen=True)
class NearMiss:
    """A local minimum of |f| that does not reach zero."""
    energy: float
    residual: float


@dataclass(frozen=True)
class SpectrumEntry:
    n: int
    l: int
    dim: int
    roots: tuple[float, ...] = ()
    diagnostics: tuple[PolishResult, ...] = ()

    @property
    def none_marker(self) -> bool:
        return not self.roots

    def to_dict(self) -> dict:
        return {"n": self.n, "l": self.l, "roots": list(self.roots), "none": self.none_marker}


@dataclass
class Spectrum:
    params: PotentialParams
    dim: int
    entries: list[SpectrumEntry]
    provenance: dict = field(default_factory=dict)

    def energies(self, sign: str = "all") -> list[float]:
        """Every root of every cell, optionally restricted by sign ('neg' / 'pos')."""
        out = [r for e in self.entries for r in e.roots]
        if sign == "neg":
            out = [r for r in out if r < 0]
        elif sign == "pos":
            out = [r for r in out if r > 0]
        elif sign != "all":
            raise ValueError(f"unknown energy sign filter {sign!r}")
        return out

    def entry(self, n: int, l: int) -> SpectrumEntry:
        for e in self.entries:
            if e.n == n and e.l == l:
                return e
        raise KeyError((n, l))

    def to_dict(self) -> dict:
        params = asdict(self.params)
        params["limit"] = self.params.limit.value
        return {"params": params, "dim": self.dim,
                "entries": [e.to_dict() for e in self.entries],
                "provenance": self.provenance}


def energy_grid(params: PotentialParams, points: int, margin: float) -> np.ndarray:
    m = params.mass
    return np.linspace(-m + margin * m, m - margin * m, points)


def _sigma_minus_n(E, qn, params):
    return _aux_arrays(E, qn, params)["sigma_cap"] - qn.n


def _split_at_pole(lo, hi, f_lo, f_hi, qn, params, config):
    """Brackets [lo, hi] with the Sigma = n pole removed, if one lies inside."""
    s_lo, s_hi = _sigma_minus_n(lo, qn, params), _sigma_minus_n(hi, qn, params)
    if np.sign(s_lo) == np.sign(s_hi):
        return [(lo, hi)]
    pole = brentq(lambda e: float(_sigma_minus_n(e, qn, params)), lo, hi, xtol=1e-15)
    eta = max(1e-13, 1e-9 * (hi - lo))
    out = []
    # (outer end, its residual, inner end next to the pole)
    for outer, f_outer, inner in ((lo, f_lo, pole - eta), (hi, f_hi, pole + eta)):
        if not lo < inner < hi:
            continue
        f_inner = residual_values(inner, qn, params, config.pole_guard)
        if np.isfinite(f_inner) and np.sign(f_inner) != np.sign(f_outer):
            out.append((min(outer, inner), max(outer, inner)))
    return out


def scan_and_bracket(qn: QuantumNumbers, params: PotentialParams,
                     config: RootFindConfig = RootFindConfig(),
                     scan_points: int | None = None) -> list[tuple[float, float]]:
    """Sign-change brackets of the residual on a uniform grid over (-m, m).

    Grid points where the residual is not evaluable are skipped; a sign change
    produced by the Sigma = n pole is discarded.
    """
    E = energy_grid(params, scan_points or config.scan_points, config.e_margin)
    f = residual_values(E, qn, params, config.pole_guard)
    finite = np.isfinite(f)
    skipped = int((~finite).sum())
    if skipped:
        log.debug("n=%d l=%d D=%d: %d of %d grid points not evaluable",
                  qn.n, qn.l, qn.dim, skipped, E.size)
    idx = np.nonzero(finite[:-1] & finite[1:] & (np.sign(f[:-1]) * np.sign(f[1:]) < 0))[0]
    brackets = []
    for i in idx:
        brackets.extend(_split_at_pole(E[i], E[i + 1], f[i], f[i + 1], qn, params, config))
    # exact zeros on grid points
    for i in np.nonzero(finite & (f == 0))[0]:
        brackets.append((E[i], E[i]))
    return sorted(brackets)


def bisect_root(bracket, qn: QuantumNumbers, params: PotentialParams,
                pole_guard: float = 1e-9, max_iter: int = 200) -> float:
    """Plain bisection to adjacent floats; the independent check on newton_polish."""
    lo, hi = bracket
    f_lo = quantization_residual(lo, qn, params, pole_guard)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        f_mid = quantization_residual(mid, qn, params, pole_guard)
        if f_mid == 0:
            return mid
        if np.sign(f_mid) == np.sign(f_lo):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def newton_polish(E0: float, qn: QuantumNumbers, params: PotentialParams,
                  config: RootFindConfig = RootFindConfig(),
                  bracket: tuple[float, float] | None = None) -> PolishResult:
    """Newton-Raphson from E0, falling back to bisection on ``bracket``.

    Newton steps that leave the bracket or the evaluable domain, or meet a
    vanishing derivative, are replaced by bisection steps.
    """
    def f(e):
        return quantization_residual(e, qn, params, config.pole_guard)

    x = float(E0)
    if bracket is not None:
        lo, hi = map(float, bracket)
        if lo == hi:
            return PolishResult(lo, 0, f(lo))
        f_lo = f(lo)
    fx = f(x)
    it = bis = 0
    while True:
        if abs(fx) <= config.tol_residual:
            return PolishResult(x, it, fx, bis)
        if bracket is not None:
            if np.sign(fx) == np.sign(f_lo):
                lo, f_lo = x, fx
            else:
                hi = x
        if it >= config.max_newton_iters:
            break
        it += 1
        try:
            d = residual_derivative(x, qn, params, pole_guard=config.pole_guard)
        except DomainError:
            d = 0.0
        x_new = x - fx / d if abs(d) >= 1e-14 else None
        if x_new is not None and bracket is not None and not lo <= x_new <= hi:
            x_new = None
        if x_new is not None:
            try:
                f_new = f(x_new)
            except DomainError:
                x_new = None
        if x_new is None:
            if bracket is None:
                raise ConvergenceError(f"Newton left the evaluable domain from E={x!r}")
            x_new = 0.5 * (lo + hi)
            f_new = f(x_new)
            bis += 1
        step = abs(x_new - x)
        x, fx = x_new, f_new
        if step <= config.tol_step:
            return PolishResult(x, it, fx, bis)
    if bracket is None:
        raise ConvergenceError(f"no convergence in {config.max_newton_iters} Newton steps")
    # Newton budget exhausted: finish by bisection
    while hi - lo > config.tol_step:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        f_mid = f(mid)
        bis += 1
        if abs(f_mid) <= config.tol_residual:
            return PolishResult(mid, it, f_mid, bis)
        if np.sign(f_mid) == np.sign(f_lo):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    if hi - lo > 4 * np.spacing(abs(x)) and hi - lo > config.tol_step:
        raise ConvergenceError(f"bisection stalled with bracket width {hi - lo:g}")
    return PolishResult(x, it, f(x), bis)


def _dedupe(results: list[PolishResult]) -> list[PolishResult]:
    out: list[PolishResult] = []
    for r in sorted(results, key=lambda r: r.root):
        if out and abs(r.root - out[-1].root) <= DEDUPE_TOL:
            continue
        out.append(r)
    return out


def solve_cell(qn: QuantumNumbers, params: PotentialParams,
               config: RootFindConfig = RootFindConfig()) -> SpectrumEntry:
    results = []
    for lo, hi in scan_and_bracket(qn, params, config):
        try:
            results.append(newton_polish(0.5 * (lo + hi), qn, params, config, (lo, hi)))
        except ConvergenceError as exc:
            raise ConvergenceError(str(exc), qn.n, qn.l) from exc
    results = _dedupe(results)
    return SpectrumEntry(qn.n, qn.l, qn.dim, tuple(r.root for r in results), tuple(results))


def solve_spectrum(params: PotentialParams, dim: int, n_values, l_values,
                   config: RootFindConfig = RootFindConfig(),
                   l_below_n: bool = False) -> Spectrum:
    """Solve every (n, l) cell; ``l_below_n`` keeps only l < n."""
    n_values, l_values = list(n_values), list(l_values)
    if not n_values or not l_values:
        raise ValueError("n and l ranges must be non-empty")
    entries = []
    for n in n_values:
        for l in l_values:
            if l_below_n and l >= n:
                continue
            entries.append(solve_cell(QuantumNumbers(n, l, dim), params, config))
    provenance = {"config": asdict(config), "n_offset": N_OFFSET, "method": "scan+newton"}
    return Spectrum(params, dim, entries, provenance)


def root_census(qn: QuantumNumbers, params: PotentialParams,
                config: RootFindConfig = RootFindConfig(), refine_factor: int = 10) -> list[float]:
    """Roots found on a grid refined by ``refine_factor``.

    The refined grid contains the original one, so every original sign change
    survives; extra roots here mean the default scan missed something.
    """
    if refine_factor < 2:
        raise ValueError("refine_factor must be >= 2")
    points = (config.scan_points - 1) * refine_factor + 1
    roots = []
    for lo, hi in scan_and_bracket(qn, params, config, scan_points=points):
        roots.append(newton_polish(0.5 * (lo + hi), qn, params, config, (lo, hi)))
    return [r.root for r in _dedupe(roots)]


def _edge_refined_grid(params, config):
    m = params.mass
    core = energy_grid(params, config.scan_points, config.e_margin)
    dist = m * np.geomspace(config.e_margin, 1e-2, 400)
    return np.unique(np.concatenate([core, -m + dist, m - dist]))


def near_misses(qn: QuantumNumbers, params: PotentialParams,
                config: RootFindConfig = RootFindConfig(),
                threshold: float | None = None) -> list[NearMiss]:
    """Local minima of |f| with no sign change, where |f| stays below ``threshold``.

    These are the points a merit-function-damped Newton iteration settles on
    when no root is nearby.  The default threshold is ``delta``.
    """
    threshold = params.delta if threshold is None else threshold
    E = _edge_refined_grid(params, config)
    g = np.abs(residual_values(E, qn, params, config.pole_guard))
    out = []
    for i in range(1, E.size - 1):
        if not (np.isfinite(g[i - 1:i + 2]).all() and g[i] <= g[i - 1] and g[i] <= g[i + 1]):
            continue
        if g[i] > threshold:
            continue
        f_lo, f_hi = residual_values(E[[i - 1, i + 1]], qn, params, config.pole_guard)
        if np.sign(f_lo) != np.sign(f_hi):
            continue
        res = minimize_scalar(
            lambda e: abs(float(residual_values(e, qn, params, config.pole_guard))),
            bounds=(E[i - 1], E[i + 1]), method="bounded", options={"xatol": 1e-14})
        fx = float(residual_values(res.x, qn, params, config.pole_guard))
        if np.isfinite(fx) and fx != 0:
            out.append(NearMiss(float(res.x), fx))
    return out
