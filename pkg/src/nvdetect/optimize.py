"""Numerical minimization of the pulse interval, the probe-region shape, and
the re-derivation of the optimized detection-time prefactors.

The geometry objective is J = r_tilde^2 (z_tilde - 1) / F^2 (separable or
entangled F); its minimizer fixes the optimal semicylinder aspect ratio.  The
detection-time prefactor is the product of the minimized, nondimensionalized
noise function with the minimized geometry objective:

    c_dd  = [f_dd,min  G^4 T2^3 n^2] * (32 / 9 pi) * J_sep,min
    c_ent = [f_ent,min G^4 T2^3]     * (pi / 2)    * J_ent,min

both dimensionless and independent of the (T2, G) pair used for the
reduction, which :func:`derive_constants` asserts by computing with two
different parameter sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np
from scipy import optimize as sciopt

from .errors import BracketError
from .geomfactors import f_ent_closed, f_sep_closed
from .signals import (C_DD_PUBLISHED, C_ENT_PUBLISHED, F_DD_OPT_NUMERATOR,
                      ProtocolParams, f_dd, f_ent)

GEOMETRY_BOX_R = (0.05, 20.0)
GEOMETRY_BOX_Z = (1.001, 20.0)

_N_STARTS_PER_AXIS = 4            # 16 multi-starts on a log-spaced grid
_SIMPLEX_TOL = 1e-4               # simplex diameter target in (r, z) coords


@dataclass(frozen=True)
class OptimizationOutcome:
    """Result of a derivative-free minimization."""

    argmin: np.ndarray
    min_value: float
    iterations: int
    converged: bool
    tolerance_used: float
    multimodal: bool = False


def minimize_scalar(objective: Callable[[float], float],
                    bracket: tuple[float, float],
                    tol: float = 1e-9) -> OptimizationOutcome:
    """Bounded scalar minimization; raises if the minimum is not interior."""
    a, b = bracket
    if not (np.isfinite(a) and np.isfinite(b) and a < b):
        raise ValueError("bracket must be a finite (a, b) interval with a < b")
    res = sciopt.minimize_scalar(objective, bounds=(a, b), method="bounded",
                                 options={"xatol": tol, "maxiter": 1000})
    x = float(res.x)
    edge_margin = max(3.0 * tol, 1e-9 * (b - a))
    if min(x - a, b - x) <= edge_margin:
        raise BracketError(
            f"no interior minimum: argmin {x!r} sits on the bracket edge {bracket!r}")
    return OptimizationOutcome(argmin=np.array([x]), min_value=float(res.fun),
                               iterations=int(res.nfev), converged=bool(res.success),
                               tolerance_used=tol)


# Geometry optimization -----------------------------------------------------------

def geometry_objective(variant: Literal["sep", "ent"],
                       f_variant: str = "corrected") -> Callable[[float, float], float]:
    """J(r_tilde, z_tilde) = r^2 (z - 1) / F^2 for the chosen protocol."""
    f = f_sep_closed if variant == "sep" else f_ent_closed
    if variant not in ("sep", "ent"):
        raise ValueError(f"unknown variant {variant!r}")

    def objective(r_tilde: float, z_tilde: float) -> float:
        value = f(r_tilde, z_tilde, f_variant)
        if value <= 0.0:
            return np.inf
        return r_tilde**2 * (z_tilde - 1.0) / value**2

    return objective


def _start_grid() -> list[np.ndarray]:
    rs = np.geomspace(0.2, 12.0, _N_STARTS_PER_AXIS)
    hs = np.geomspace(0.05, 8.0, _N_STARTS_PER_AXIS)   # z - 1 heights
    return [np.array([np.log(r), np.log(h)]) for r in rs for h in hs]


def minimize_geometry(variant: Literal["sep", "ent"],
                      f_variant: str = "corrected") -> OptimizationOutcome:
    """Multi-start downhill-simplex minimization of the geometry objective.

    The search runs in (log r, log(z-1)) coordinates over the box
    r in [0.05, 20], z in [1.001, 20]; the fixed 16-point start grid makes
    repeated invocations identical.  If several starts converge to distinct
    minima within 1% of each other's objective, the one with the smaller
    r_tilde is reported and the outcome is flagged multimodal.
    """
    objective = geometry_objective(variant, f_variant)

    def transformed(u: np.ndarray) -> float:
        r = np.exp(u[0])
        z = 1.0 + np.exp(u[1])
        if not (GEOMETRY_BOX_R[0] <= r <= GEOMETRY_BOX_R[1]
                and GEOMETRY_BOX_Z[0] <= z <= GEOMETRY_BOX_Z[1]):
            return np.inf
        return objective(r, z)

    runs = []
    total_iters = 0
    for u0 in _start_grid():
        res = sciopt.minimize(transformed, u0, method="Nelder-Mead",
                              options={"xatol": 2e-6, "fatol": 1e-12,
                                       "maxiter": 4000, "maxfev": 8000})
        total_iters += int(res.nit)
        if np.isfinite(res.fun):
            point = np.array([np.exp(res.x[0]), 1.0 + np.exp(res.x[1])])
            runs.append((point, float(res.fun), bool(res.success)))
    if not runs:
        raise RuntimeError("all geometry-optimization starts diverged")

    best_fun = min(fun for _, fun, _ in runs)
    near = [(pt, fun, ok) for pt, fun, ok in runs if fun <= best_fun * 1.01]
    # Distinct argmins within the 1% band indicate multimodality.
    anchor = near[0][0]
    multimodal = any(np.linalg.norm(pt - anchor) > 0.05 for pt, _, _ in near)
    chosen = min(near, key=lambda item: item[0][0])
    return OptimizationOutcome(argmin=chosen[0], min_value=chosen[1],
                               iterations=total_iters, converged=chosen[2],
                               tolerance_used=_SIMPLEX_TOL, multimodal=multimodal)


# Constants re-derivation ------------------------------------------------------------

#: Geometry-to-detection-time conversion factors, from L / Gamma^2.
SEP_GEOMETRY_FACTOR = 32.0 / (9.0 * np.pi)
ENT_GEOMETRY_FACTOR = np.pi / 2.0

#: Reference (t2_echo, coupling_g, omega_target) pairs for the dimensionless
#: reduction; the derived constants must agree across them.
_REFERENCE_SETS = ((8.3e-5, 1.95e-23, 2 * np.pi * 3e6),
                   (3.1e-4, 1.2e-22, 2 * np.pi * 1e6))


@dataclass(frozen=True)
class ConstantsDerivation:
    """Side-by-side published vs re-derived detection-time prefactors.

    The re-derived constants compose the resonance-constrained noise-function
    optimum (tau = pi / omega, the published procedure) with the minimized
    geometry objective.  The free-tau minima are recorded separately: for the
    many-pulse protocol the interference lobe pins the optimum to resonance,
    but the two-interval echo's true optimum sits at omega tau ~ 2.33 and is
    ~40% below the resonance value.
    """

    geometry_sep: OptimizationOutcome
    geometry_ent: OptimizationOutcome
    c_dd_rederived: float
    c_ent_rederived: float
    c_dd_published: float
    c_ent_published: float
    f_norm_published: float          # pi^4 / 32
    f_dd_norm_resonance: float       # value at tau = pi / omega exactly
    f_dd_norm_free_tau: float        # numeric min over tau inside the lobe
    f_ent_norm_resonance: float
    f_ent_norm_free_tau: float
    parameter_invariance_rel_dev: float
    n_dd: int

    @property
    def c_dd_rel_deviation(self) -> float:
        return abs(self.c_dd_rederived - self.c_dd_published) / self.c_dd_published

    @property
    def c_ent_rel_deviation(self) -> float:
        return abs(self.c_ent_rederived - self.c_ent_published) / self.c_ent_published


def _f_dd_norms(t2_echo: float, coupling_g: float, omega: float, n_dd: int) -> tuple[float, float]:
    """(free-tau minimum, resonance value) of f_dd * G^4 T2^3 n^2."""
    params = ProtocolParams(tau=np.pi / omega, n_dd=n_dd, omega_target=omega,
                            t2_echo=t2_echo, l_probe=1.0, m_nuclear=1.0,
                            coupling_g=coupling_g)
    n_half = (n_dd + 1) // 2
    # Stay inside the central interference lobe, whose edges are poles of f.
    lo = np.pi * (1.0 - 0.9 / n_half) / omega
    hi = np.pi * (1.0 + 0.9 / n_half) / omega
    out = minimize_scalar(lambda tau: f_dd(tau, params), (lo, hi),
                          tol=1e-6 * np.pi / omega)
    norm = coupling_g**4 * t2_echo**3 * n_dd**2
    return out.min_value * norm, f_dd(np.pi / omega, params) * norm


def _f_ent_norms(t2_echo: float, coupling_g: float, omega: float) -> tuple[float, float]:
    """(free-tau minimum, resonance value) of f_ent * G^4 T2^3.

    Unit probe count makes barred and plain variables coincide.  The free
    minimum sits near omega tau ~ 2.33 (below resonance): with no
    interference lobe the echo objective is ~ tau^4 / sin^8(omega tau / 2).
    """
    params = ProtocolParams(tau=np.pi / omega, n_dd=1, omega_target=omega,
                            t2_echo=t2_echo, l_probe=1.0, m_nuclear=1.0,
                            coupling_g=coupling_g)
    out = minimize_scalar(lambda tb: f_ent(tb, params),
                          (0.2 * np.pi / omega, 1.8 * np.pi / omega),
                          tol=1e-6 * np.pi / omega)
    norm = coupling_g**4 * t2_echo**3
    return out.min_value * norm, f_ent(np.pi / omega, params) * norm


def derive_constants(n_dd: int = 63) -> ConstantsDerivation:
    """Re-derive the optimized detection-time prefactors numerically.

    Composes the numerically minimized noise functions with the minimized
    geometry objectives.  The pulse-interval optimum is computed in two modes:
    free tau at fixed omega (interior minimum inside the central interference
    lobe) and the exact resonance point tau = pi / omega; for realistic
    parameters both sit within ~1e-6 of the published pi^4/32 normalization
    because the residual decay-argument objective is monotone with infimum 2.
    """
    geo_sep = minimize_geometry("sep")
    geo_ent = minimize_geometry("ent")

    c_dd_values, c_ent_values = [], []
    f_dd_free, f_dd_res, f_ent_free, f_ent_res = [], [], [], []
    for t2_echo, coupling_g, omega in _REFERENCE_SETS:
        dd_free, dd_res = _f_dd_norms(t2_echo, coupling_g, omega, n_dd)
        ent_free, ent_res = _f_ent_norms(t2_echo, coupling_g, omega)
        f_dd_free.append(dd_free)
        f_dd_res.append(dd_res)
        f_ent_free.append(ent_free)
        f_ent_res.append(ent_res)
        c_dd_values.append(dd_res * SEP_GEOMETRY_FACTOR * geo_sep.min_value)
        c_ent_values.append(ent_res * ENT_GEOMETRY_FACTOR * geo_ent.min_value)

    c_dd = float(np.mean(c_dd_values))
    c_ent = float(np.mean(c_ent_values))
    invariance = max(
        abs(c_dd_values[0] - c_dd_values[1]) / c_dd,
        abs(c_ent_values[0] - c_ent_values[1]) / c_ent)
    return ConstantsDerivation(
        geometry_sep=geo_sep, geometry_ent=geo_ent,
        c_dd_rederived=c_dd, c_ent_rederived=c_ent,
        c_dd_published=C_DD_PUBLISHED, c_ent_published=C_ENT_PUBLISHED,
        f_norm_published=F_DD_OPT_NUMERATOR,
        f_dd_norm_resonance=float(np.mean(f_dd_res)),
        f_dd_norm_free_tau=float(np.mean(f_dd_free)),
        f_ent_norm_resonance=float(np.mean(f_ent_res)),
        f_ent_norm_free_tau=float(np.mean(f_ent_free)),
        parameter_invariance_rel_dev=invariance,
        n_dd=n_dd)
