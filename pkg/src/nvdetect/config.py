"""Scenario configuration: JSON schema, validation, and preset expansion.

A config is a single JSON object.  Unknown keys are errors; every violation is
reported at once.  Schema (all keys optional unless noted):

    preset                  "NV1" | "NV2" | "NV3" | "custom"   (default "NV1")
    t2_echo_s               float  (required for custom, forbidden otherwise)
    rho_nv_per_cm3          float  (required for custom, forbidden otherwise)
    gamma_target_hz_per_t   float  (default 42e6)
    gamma_probe_hz_per_t    float  (default 28.024e9)
    gamma_convention        "angular" | "cyclic"               (default "cyclic")
    m_nuclear               float  (default 1.25e6)
    n_dd                    odd int (default 63)
    z_min_sweep             {"start_m", "stop_m", "points", "spacing"}
                            (default: log, 50 points, 100 nm to 2 um)
    output                  path for CSV output
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import (GAMMA_NV_HZ_PER_T, GAMMA_PROTON_HZ_PER_T, M_NUCLEAR_DEFAULT,
                   PRESETS, PhysicalScenario, rho_from_cm3)
from .errors import ConfigError

_KNOWN_KEYS = {"preset", "t2_echo_s", "rho_nv_per_cm3", "gamma_target_hz_per_t",
               "gamma_probe_hz_per_t", "gamma_convention", "m_nuclear", "n_dd",
               "z_min_sweep", "output"}
_SWEEP_KEYS = {"start_m", "stop_m", "points", "spacing"}


@dataclass(frozen=True)
class SweepSpec:
    """z_min sweep: endpoints in metres, point count, and spacing."""

    start_m: float = 100e-9
    stop_m: float = 2e-6
    points: int = 50
    spacing: str = "log"

    def values(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.start_m, self.stop_m, self.points)
        return np.linspace(self.start_m, self.stop_m, self.points)


@dataclass(frozen=True)
class ScenarioConfig:
    """A validated scenario: preset values expanded, SI units resolved."""

    preset: str = "NV1"
    t2_echo_s: float = PRESETS["NV1"].t2_echo
    rho_nv_per_cm3: float = PRESETS["NV1"].rho_nv_per_cm3
    gamma_target_hz_per_t: float = GAMMA_PROTON_HZ_PER_T
    gamma_probe_hz_per_t: float = GAMMA_NV_HZ_PER_T
    gamma_convention: str = "cyclic"
    m_nuclear: float = M_NUCLEAR_DEFAULT
    n_dd: int = 63
    sweep: SweepSpec = field(default_factory=SweepSpec)
    output: Optional[str] = None

    def __post_init__(self):
        if self.preset in PRESETS:
            fixed = PRESETS[self.preset]
            if (self.t2_echo_s != fixed.t2_echo
                    or self.rho_nv_per_cm3 != fixed.rho_nv_per_cm3):
                raise ValueError(f"preset {self.preset} fixes t2_echo_s and "
                                 "rho_nv_per_cm3; use preset='custom' to override")

    @property
    def rho_nv(self) -> float:
        return rho_from_cm3(self.rho_nv_per_cm3)

    def scenario(self) -> PhysicalScenario:
        return PhysicalScenario.create(
            gamma_target_hz_per_t=self.gamma_target_hz_per_t,
            gamma_probe_hz_per_t=self.gamma_probe_hz_per_t,
            gamma_convention=self.gamma_convention)


def _validate(raw: dict) -> tuple[ScenarioConfig, list[str]]:
    problems: list[str] = []
    if not isinstance(raw, dict):
        return ScenarioConfig(), ["top-level config must be a JSON object"]
    unknown = sorted(set(raw) - _KNOWN_KEYS)
    problems += [f"unknown key {k!r}" for k in unknown]

    preset = raw.get("preset", "NV1")
    if preset not in (*PRESETS, "custom"):
        problems.append(f"preset must be one of {sorted(PRESETS)} or 'custom', "
                        f"got {preset!r}")
        preset = "NV1"

    def positive(key, default):
        value = raw.get(key, default)
        if not isinstance(value, (int, float)) or value <= 0:
            problems.append(f"{key} must be a positive number, got {value!r}")
            return default
        return float(value)

    if preset == "custom":
        for key in ("t2_echo_s", "rho_nv_per_cm3"):
            if key not in raw:
                problems.append(f"custom preset requires field {key!r}")
        t2 = positive("t2_echo_s", PRESETS["NV1"].t2_echo)
        rho = positive("rho_nv_per_cm3", PRESETS["NV1"].rho_nv_per_cm3)
    else:
        for key in ("t2_echo_s", "rho_nv_per_cm3"):
            if key in raw:
                problems.append(f"{key!r} conflicts with preset {preset!r}, "
                                "which fixes it")
        t2 = PRESETS[preset].t2_echo
        rho = PRESETS[preset].rho_nv_per_cm3

    gamma_t = positive("gamma_target_hz_per_t", GAMMA_PROTON_HZ_PER_T)
    gamma_p = positive("gamma_probe_hz_per_t", GAMMA_NV_HZ_PER_T)

    convention = raw.get("gamma_convention", "cyclic")
    if convention not in ("angular", "cyclic"):
        problems.append("gamma_convention must be 'angular' or 'cyclic', "
                        f"got {convention!r}")
        convention = "cyclic"

    m_nuclear = positive("m_nuclear", M_NUCLEAR_DEFAULT)

    n_dd = raw.get("n_dd", 63)
    if not isinstance(n_dd, int) or n_dd < 1 or n_dd % 2 == 0:
        problems.append(f"n_dd must be an odd integer >= 1, got {n_dd!r}")
        n_dd = 63

    sweep = SweepSpec()
    if "z_min_sweep" in raw:
        sw = raw["z_min_sweep"]
        if not isinstance(sw, dict):
            problems.append("z_min_sweep must be an object")
        else:
            problems += [f"unknown z_min_sweep key {k!r}"
                         for k in sorted(set(sw) - _SWEEP_KEYS)]
            start = sw.get("start_m", sweep.start_m)
            stop = sw.get("stop_m", sweep.stop_m)
            points = sw.get("points", sweep.points)
            spacing = sw.get("spacing", sweep.spacing)
            if not isinstance(start, (int, float)) or start <= 0:
                problems.append(f"z_min_sweep.start_m must be positive, got {start!r}")
            if not isinstance(stop, (int, float)) or stop <= start:
                problems.append("z_min_sweep requires start_m < stop_m, got "
                                f"start={start!r} stop={stop!r}")
            if not isinstance(points, int) or points < 2:
                problems.append(f"z_min_sweep.points must be an int >= 2, got {points!r}")
            if spacing not in ("linear", "log"):
                problems.append("z_min_sweep.spacing must be 'linear' or 'log', "
                                f"got {spacing!r}")
            if not problems:
                sweep = SweepSpec(start_m=float(start), stop_m=float(stop),
                                  points=points, spacing=spacing)

    output = raw.get("output")
    if output is not None and not isinstance(output, str):
        problems.append(f"output must be a path string, got {output!r}")
        output = None

    cfg = ScenarioConfig(preset=preset, t2_echo_s=t2, rho_nv_per_cm3=rho,
                         gamma_target_hz_per_t=gamma_t,
                         gamma_probe_hz_per_t=gamma_p,
                         gamma_convention=convention, m_nuclear=m_nuclear,
                         n_dd=n_dd, sweep=sweep, output=output)
    return cfg, problems


def load_config(path: str) -> ScenarioConfig:
    """Parse and validate a JSON config file; raise ConfigError listing every
    violation (parse errors carry the line/column from the JSON decoder)."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config parse error at line {exc.lineno}, "
                          f"column {exc.colno}: {exc.msg}")
    cfg, problems = _validate(raw)
    if problems:
        raise ConfigError("invalid config:\n  " + "\n  ".join(problems))
    return cfg
