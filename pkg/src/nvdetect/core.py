"""Physical constants, coupling conventions, ensemble geometry, and dipole coefficients.

Everything downstream (geometric factors, signal formulas, the dense quantum
oracle) consumes the vocabulary defined here: a :class:`PhysicalScenario`
(gyromagnetic ratios and the effective dipole coupling G), an
:class:`EnsembleGeometry` (semicylindrical probe region above the sample),
:class:`SpinSite` collections, and the per-pair dipole coefficients (A, B, C).

Units are SI throughout: metres, seconds, rad/s, tesla.  Probe densities are
accepted in cm^-3 at the interfaces and converted once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, NamedTuple, Sequence

import numpy as np

from .errors import SingularityError

# Module constants ------------------------------------------------------------

MU0_SI = 4e-7 * np.pi            # vacuum permeability, T m / A
HBAR_SI = 1.054571817e-34        # reduced Planck constant, J s

# Gyromagnetic ratios as ordinary (cyclic) frequencies, Hz/T.  The proton value
# follows the reference parameter set (42 MHz/T); the probe electron-spin value
# is the standard NV figure and is overridable everywhere it is consumed.
GAMMA_PROTON_HZ_PER_T = 42e6
GAMMA_NV_HZ_PER_T = 28.024e9

ANGULAR = "angular"
CYCLIC = "cyclic"

#: Nominal probe resonance scale (rad/s).  Stored for documentation of the
#: rotating frame only; no computed quantity reads it.
OMEGA_PROBE_NOMINAL = 2 * np.pi * 2.87e9

GammaConvention = Literal["angular", "cyclic"]
SiteRole = Literal["nuclear", "probe"]


def rho_from_cm3(rho_per_cm3: float) -> float:
    """Convert a number density from cm^-3 to m^-3."""
    return float(rho_per_cm3) * 1e6


# Coupling --------------------------------------------------------------------

def coupling_from_gammas(gamma_target: float, gamma_probe: float,
                         gamma_convention: GammaConvention = CYCLIC,
                         mu0: float = MU0_SI, hbar: float = HBAR_SI) -> float:
    """Effective dipole coupling G = mu0 hbar gamma_T gamma_P / (16 pi).

    ``gamma_target``/``gamma_probe`` are angular gyromagnetic ratios
    (rad s^-1 T^-1).  With ``gamma_convention='angular'`` the result is the
    angular-frequency coupling (rad s^-1 m^3).  With ``'cyclic'`` the coupling
    is expressed as an ordinary (cyclic) frequency, i.e. divided by one factor
    of 2*pi; this is the convention under which the published detection-time
    prefactors reproduce the headline detection times, and it is the default.
    """
    if gamma_target <= 0 or gamma_probe <= 0:
        raise ValueError("gyromagnetic ratios must be positive")
    if mu0 <= 0 or hbar <= 0:
        raise ValueError("mu0 and hbar must be positive")
    g = mu0 * hbar * gamma_target * gamma_probe / (16 * np.pi)
    if gamma_convention == ANGULAR:
        return g
    if gamma_convention == CYCLIC:
        return g / (2 * np.pi)
    raise ValueError(f"unknown gamma_convention {gamma_convention!r}")


@dataclass(frozen=True)
class PhysicalScenario:
    """Gyromagnetic ratios, unit convention, and the derived coupling G.

    ``gamma_target``/``gamma_probe`` are stored as angular frequencies per
    tesla (rad s^-1 T^-1).  ``coupling_G`` is cached and checked against the
    value recomputed from the other fields.
    """

    gamma_target: float
    gamma_probe: float
    omega_target: float
    gamma_convention: GammaConvention = CYCLIC
    mu0: float = MU0_SI
    hbar: float = HBAR_SI
    omega_probe: float = OMEGA_PROBE_NOMINAL
    coupling_G: float = field(default=0.0)

    def __post_init__(self):
        if self.gamma_target <= 0 or self.gamma_probe <= 0:
            raise ValueError("gyromagnetic ratios must be positive")
        if self.omega_target <= 0:
            raise ValueError("omega_target must be positive")
        expected = coupling_from_gammas(self.gamma_target, self.gamma_probe,
                                        self.gamma_convention, self.mu0, self.hbar)
        if self.coupling_G == 0.0:
            object.__setattr__(self, "coupling_G", expected)
        elif not np.isclose(self.coupling_G, expected, rtol=1e-12, atol=0.0):
            raise ValueError(
                f"cached coupling_G={self.coupling_G!r} inconsistent with fields "
                f"(recomputed {expected!r})")

    @classmethod
    def create(cls, gamma_target_hz_per_t: float = GAMMA_PROTON_HZ_PER_T,
               gamma_probe_hz_per_t: float = GAMMA_NV_HZ_PER_T,
               gamma_convention: GammaConvention = CYCLIC,
               omega_target: float = 2 * np.pi * 1e6) -> "PhysicalScenario":
        """Build a scenario from cyclic-frequency gyromagnetic ratios (Hz/T)."""
        return cls(gamma_target=2 * np.pi * gamma_target_hz_per_t,
                   gamma_probe=2 * np.pi * gamma_probe_hz_per_t,
                   omega_target=omega_target,
                   gamma_convention=gamma_convention)


def coupling_constant(scenario: PhysicalScenario) -> float:
    """Recompute G from the scenario fields (pure; ignores the cached value)."""
    return coupling_from_gammas(scenario.gamma_target, scenario.gamma_probe,
                                scenario.gamma_convention, scenario.mu0,
                                scenario.hbar)


# Geometry --------------------------------------------------------------------

@dataclass(frozen=True)
class EnsembleGeometry:
    """Semicylindrical probe region: x >= 0, x^2+y^2 <= r_max^2, z in [z_min, z_max].

    ``rho_nv`` is the probe density in m^-3 (use :func:`rho_from_cm3` or
    ``from_cm3`` for cm^-3 inputs).  ``z_max == z_min`` is allowed as the
    degenerate zero-height region (zero probes).
    """

    z_min: float
    z_max: float
    r_max: float
    rho_nv: float

    def __post_init__(self):
        if not (0 < self.z_min <= self.z_max):
            raise ValueError("require 0 < z_min <= z_max")
        if self.r_max <= 0:
            raise ValueError("r_max must be positive")
        if self.rho_nv <= 0:
            raise ValueError("rho_nv must be positive")

    @property
    def r_tilde(self) -> float:
        """Dimensionless radius r_max / z_min."""
        return self.r_max / self.z_min

    @property
    def z_tilde(self) -> float:
        """Dimensionless top z_max / z_min."""
        return self.z_max / self.z_min

    @property
    def volume(self) -> float:
        """Semicylinder volume (pi/2) r_max^2 (z_max - z_min), m^3."""
        return 0.5 * np.pi * self.r_max**2 * (self.z_max - self.z_min)

    @classmethod
    def from_dimensionless(cls, z_min: float, r_tilde: float, z_tilde: float,
                           rho_nv: float) -> "EnsembleGeometry":
        return cls(z_min=z_min, z_max=z_tilde * z_min, r_max=r_tilde * z_min,
                   rho_nv=rho_nv)

    @classmethod
    def from_cm3(cls, z_min: float, z_max: float, r_max: float,
                 rho_nv_per_cm3: float) -> "EnsembleGeometry":
        return cls(z_min=z_min, z_max=z_max, r_max=r_max,
                   rho_nv=rho_from_cm3(rho_nv_per_cm3))

    def contains(self, position: np.ndarray, atol: float = 0.0) -> bool:
        """Whether a point lies inside the semicylinder (inclusive)."""
        x, y, z = position
        return (x >= -atol
                and x * x + y * y <= self.r_max**2 + atol
                and self.z_min - atol <= z <= self.z_max + atol)


def probe_count(geom: EnsembleGeometry) -> float:
    """Continuum probe count L = rho_nv (pi/2) r_max^2 (z_max - z_min).

    Deliberately not rounded: the continuum model treats L as real.
    """
    return geom.rho_nv * geom.volume


# Spin sites ------------------------------------------------------------------

@dataclass(frozen=True)
class SpinSite:
    """A spin location with its role (nuclear spin or NV probe)."""

    position: np.ndarray
    role: SiteRole

    def __post_init__(self):
        pos = np.asarray(self.position, dtype=float)
        if pos.shape != (3,):
            raise ValueError("position must be a 3-vector")
        object.__setattr__(self, "position", pos)
        if self.role not in ("nuclear", "probe"):
            raise ValueError(f"unknown role {self.role!r}")


def sample_probe_sites(geom: EnsembleGeometry, n: int, seed: int) -> list[SpinSite]:
    """Draw ``n`` i.i.d. uniform probe sites inside the semicylinder.

    Deterministic for a fixed seed.  ``n = 0`` returns an empty list.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    rng = np.random.default_rng(seed)
    # Uniform in area -> radius via sqrt; phi restricted to x >= 0 half-range.
    s = geom.r_max * np.sqrt(rng.random(n))
    phi = -0.5 * np.pi + np.pi * rng.random(n)
    z = geom.z_min + (geom.z_max - geom.z_min) * rng.random(n)
    return [SpinSite(position=np.array([si * np.cos(p), si * np.sin(p), zi]),
                     role="probe")
            for si, p, zi in zip(s, phi, z)]


def positions_of(sites: Sequence[SpinSite] | np.ndarray) -> np.ndarray:
    """Stack site positions into an (n, 3) array (accepts raw arrays too)."""
    if isinstance(sites, np.ndarray):
        arr = np.atleast_2d(np.asarray(sites, dtype=float))
    else:
        arr = np.array([np.asarray(s.position, dtype=float) for s in sites])
    if arr.size == 0:
        return arr.reshape(0, 3)
    if arr.shape[1] != 3:
        raise ValueError("positions must be 3-vectors")
    return arr


# Dipole coefficients ----------------------------------------------------------

class DipoleCoefficients(NamedTuple):
    """Secular dipole coefficients (A, B, C) of a relative vector, m^-3."""

    a: float
    b: float
    c: float


def dipole_coefficients(rel: np.ndarray) -> DipoleCoefficients:
    """Coefficients A = -3xz/r^5, B = -3yz/r^5, C = (1 - 3z^2/r^2)/r^3.

    ``rel`` is the relative vector between a nucleus and a probe; all three
    coefficients are even under rel -> -rel, so the orientation convention
    does not matter.
    """
    rel = np.asarray(rel, dtype=float)
    x, y, z = rel
    r2 = float(x * x + y * y + z * z)
    if r2 == 0.0:
        raise SingularityError("probe coincident with nucleus (zero relative vector)")
    r = np.sqrt(r2)
    r3 = r2 * r
    r5 = r2 * r3
    return DipoleCoefficients(a=-3.0 * x * z / r5,
                              b=-3.0 * y * z / r5,
                              c=(1.0 - 3.0 * z * z / r2) / r3)


def dipole_components(rel: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized (A, B, C) for an (n, 3) array of relative vectors."""
    rel = np.atleast_2d(np.asarray(rel, dtype=float))
    r2 = np.einsum("ij,ij->i", rel, rel)
    if np.any(r2 == 0.0):
        raise SingularityError("probe coincident with nucleus (zero relative vector)")
    r = np.sqrt(r2)
    r3 = r2 * r
    r5 = r2 * r3
    a = -3.0 * rel[:, 0] * rel[:, 2] / r5
    b = -3.0 * rel[:, 1] * rel[:, 2] / r5
    c = (1.0 - 3.0 * rel[:, 2] ** 2 / r2) / r3
    return a, b, c


# Reference NV parameter presets ------------------------------------------------

@dataclass(frozen=True)
class NVPreset:
    """A named (T2_echo, probe density) operating point."""

    name: str
    t2_echo: float      # s
    rho_nv: float       # m^-3

    @property
    def rho_nv_per_cm3(self) -> float:
        return self.rho_nv / 1e6


NV1 = NVPreset("NV1", t2_echo=8.3e-5, rho_nv=rho_from_cm3(1.1e17))
NV2 = NVPreset("NV2", t2_echo=4.5e-6, rho_nv=rho_from_cm3(1.1e18))
NV3 = NVPreset("NV3", t2_echo=3.1e-4, rho_nv=rho_from_cm3(1.8e18))

PRESETS = {p.name: p for p in (NV1, NV2, NV3)}

#: Reference nuclear-spin count (1e22 cm^-3 protons in a 50 nm cube).
M_NUCLEAR_DEFAULT = 1.25e6
