"""Validation suite and discrepancy reporting.

``build_validation_report`` runs every normative check (quadrature vs closed
forms, oracle-vs-analytic residual order, channel sanity, protocol
identities, geometry optima, figure-level anchors, exact scaling laws,
constants re-derivation) and attaches the informational rows that quantify
each documented discrepancy between published expressions and the validated
ones.  Informational rows never fail the suite.

Every design decision with a published-vs-computed numeric consequence has
exactly one named row here; the row set is the machine-readable ledger.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Literal, Optional

import numpy as np

from . import geomfactors, oracle, signals
from .errors import PerturbativeRegimeWarning
from .core import (EnsembleGeometry, GAMMA_NV_HZ_PER_T, M_NUCLEAR_DEFAULT, NV1,
                   PhysicalScenario)
from .optimize import ConstantsDerivation, derive_constants

Verdict = Literal["pass", "fail", "info"]

#: Published optimal dimensionless geometries (r_tilde, z_tilde).
GEOMETRY_OPT_SEP_PUBLISHED = (1.16, 1.29)
GEOMETRY_OPT_ENT_PUBLISHED = (5.05, 4.96)
GEOMETRY_TOL_SEP = 0.05
GEOMETRY_TOL_ENT = 0.10

#: Published figure-level anchors.
T_ENT_ANCHOR_S = 60.0
RATIO_ANCHOR = 1e7


@dataclass(frozen=True)
class DiscrepancyEntry:
    name: str
    computed: float
    published: Optional[float] = None
    rel_deviation: Optional[float] = None
    verdict: Verdict = "info"
    note: str = ""

    def format(self) -> str:
        pub = "-" if self.published is None else f"{self.published:.6g}"
        dev = "-" if self.rel_deviation is None else f"{self.rel_deviation:.3g}"
        line = (f"{self.verdict.upper():<5} {self.name:<42} "
                f"published={pub:<12} computed={self.computed:<14.8g} rel_dev={dev}")
        return line + (f"  [{self.note}]" if self.note else "")


@dataclass
class DiscrepancyReport:
    entries: list[DiscrepancyEntry] = field(default_factory=list)

    def add(self, *args, **kwargs) -> None:
        self.entries.append(DiscrepancyEntry(*args, **kwargs))

    @property
    def failures(self) -> list[DiscrepancyEntry]:
        return [e for e in self.entries if e.verdict == "fail"]

    @property
    def exit_code(self) -> int:
        return 1 if self.failures else 0

    def to_text(self) -> str:
        lines = [e.format() for e in self.entries]
        lines.append(f"-- {len(self.entries)} checks, {len(self.failures)} failures")
        return "\n".join(lines)


def _verdict(ok: bool) -> Verdict:
    return "pass" if ok else "fail"


# Closed form vs quadrature -----------------------------------------------------------

def _quadrature_grid_checks(report: DiscrepancyReport, points: int) -> None:
    rs = np.linspace(0.2, 8.0, points)
    zs = np.linspace(1.05, 8.0, points)
    dev_sep = 0.0
    dev_ent = 0.0
    for r in rs:
        for z in zs:
            quad_sep = 8.0 / (3.0 * np.pi) * geomfactors.quadrature_sep_tilde(r, z)[0]
            closed_sep = geomfactors.f_sep_closed(r, z)
            dev_sep = max(dev_sep, abs(closed_sep - quad_sep) / quad_sep)
            (int_a, _), _ = geomfactors.quadrature_ent_tilde(r, z)
            closed_ent = geomfactors.f_ent_closed(r, z)
            dev_ent = max(dev_ent, abs(closed_ent - int_a**2) / int_a**2)
    report.add("f-sep-corrected-vs-quadrature", computed=dev_sep,
               verdict=_verdict(dev_sep <= 1e-8),
               note=f"max rel dev over {points}x{points} grid, tol 1e-8")
    report.add("f-ent-corrected-vs-quadrature", computed=dev_ent,
               verdict=_verdict(dev_ent <= 1e-8),
               note=f"max rel dev over {points}x{points} grid, tol 1e-8")

    # Printed-variant findings (informational by design).
    r_opt, z_opt = GEOMETRY_OPT_SEP_PUBLISHED
    quad = 8.0 / (3.0 * np.pi) * geomfactors.quadrature_sep_tilde(r_opt, z_opt)[0]
    printed = geomfactors.f_sep_closed(r_opt, z_opt, "printed")
    report.add("f-sep-printed-vs-quadrature", computed=printed, published=quad,
               rel_deviation=abs(printed - quad) / quad,
               note="printed separable closed form disagrees with the volume integral")
    printed_zero = geomfactors.f_ent_closed(1.0, 1.0, "printed")
    report.add("f-ent-printed-zero-height", computed=printed_zero, published=0.0,
               note="printed entangled form does not vanish for a zero-height region")
    re_, ze_ = GEOMETRY_OPT_ENT_PUBLISHED
    printed_ent = geomfactors.f_ent_closed(re_, ze_, "printed")
    corrected_ent = geomfactors.f_ent_closed(re_, ze_)
    report.add("f-ent-printed-vs-corrected-at-optimum", computed=printed_ent,
               published=corrected_ent,
               rel_deviation=abs(printed_ent - corrected_ent) / corrected_ent)


# Oracle vs analytic ------------------------------------------------------------------

def _random_cluster(rng, m_nuclear):
    return rng.normal(0.0, 0.02, size=(m_nuclear, 3))


def _random_probes(rng, l_probe, r_tilde=1.5, z_tilde=2.0):
    s = r_tilde * np.sqrt(rng.random(l_probe))
    phi = -0.5 * np.pi + np.pi * rng.random(l_probe)
    z = 1.0 + (z_tilde - 1.0) * rng.random(l_probe)
    return np.column_stack([s * np.cos(phi), s * np.sin(phi), z])


def _dd_residual(nuc, prb, omega, g, tau, n_dd):
    sys = oracle.QuantumSystem.create(nuc, prb, omega, g)
    # t2_echo >> t makes the analytic decay factor exactly 1.0 (noiseless).
    params = signals.ProtocolParams(tau=tau, n_dd=n_dd, omega_target=omega,
                                    t2_echo=1e9, l_probe=prb.shape[0],
                                    m_nuclear=nuc.shape[0], coupling_g=g)
    simulated = oracle.run_dd_protocol(sys, params, noiseless=True)
    gamma = geomfactors.gamma_sep_discrete(nuc, prb).value
    analytic = signals.expectation_mx(params, gamma)
    return abs(simulated - analytic)


def _ghz_residual(nuc, prb, omega, g, tau):
    sys = oracle.QuantumSystem.create(nuc, prb, omega, g)
    params = signals.ProtocolParams(tau=tau, n_dd=1, omega_target=omega,
                                    t2_echo=1e9, l_probe=prb.shape[0],
                                    m_nuclear=nuc.shape[0], coupling_g=g)
    simulated = oracle.run_ghz_protocol(sys, params, noiseless=True)
    gamma = geomfactors.gamma_ent_discrete(nuc, prb).value
    analytic = signals.p_ghz(params, gamma)
    return abs(simulated - analytic)


def _oracle_checks(report: DiscrepancyReport, lm_pairs) -> None:
    rng = np.random.default_rng(20240901)
    omega, tau, n_dd = 1.0, 0.9, 3
    g_hi, g_mid, g_small = 1.6e-2, 8e-3, 1e-3
    ratios_dd, ratios_ghz = [], []
    small_dd, small_ghz = [], []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", PerturbativeRegimeWarning)
        for l_probe, m_nuclear in lm_pairs:
            nuc = _random_cluster(rng, m_nuclear)
            prb = _random_probes(rng, l_probe)
            r_hi = _dd_residual(nuc, prb, omega, g_hi, tau, n_dd)
            r_mid = _dd_residual(nuc, prb, omega, g_mid, tau, n_dd)
            ratios_dd.append(r_hi / r_mid)
            small_dd.append(_dd_residual(nuc, prb, omega, g_small, tau, n_dd))
            r_hi = _ghz_residual(nuc, prb, omega, g_hi, tau)
            r_mid = _ghz_residual(nuc, prb, omega, g_mid, tau)
            ratios_ghz.append(r_hi / r_mid)
            small_ghz.append(_ghz_residual(nuc, prb, omega, g_small, tau))
    report.add("oracle-dd-residual-order-bound", computed=min(ratios_dd),
               published=8.0, verdict=_verdict(min(ratios_dd) >= 7.0),
               note="halving-G shrink factor must be >= the claimed third-order "
                    "bound rate; measured ~16 (fourth order)")
    report.add("oracle-ghz-residual-order-bound", computed=min(ratios_ghz),
               published=8.0, verdict=_verdict(min(ratios_ghz) >= 7.0),
               note="same bound for the entangled echo")
    report.add("oracle-dd-second-order-agreement", computed=max(small_dd),
               verdict=_verdict(max(small_dd) <= 1e-10),
               note="max |simulated - analytic| at G/omega = 1e-3, tol 1e-10")
    report.add("oracle-ghz-second-order-agreement", computed=max(small_ghz),
               verdict=_verdict(max(small_ghz) <= 1e-10),
               note="max |simulated - analytic| at G/omega = 1e-3, tol 1e-10")
    order = math.log2(ratios_dd[0]) / math.log2(2.0)
    report.add("residual-order-measured", computed=order, published=3.0,
               note="protocol observables are even in G (probe-sector bit-flip "
                    "symmetry), so the first correction is fourth order; the "
                    "third-order value is an error bound, not the rate")

    # Interference-count convention: the pulse-count formula errs at second order.
    nuc = _random_cluster(rng, 1)
    prb = _random_probes(rng, 2)
    gamma = geomfactors.gamma_sep_discrete(nuc, prb).value

    def pulse_count_residual(g):
        sys = oracle.QuantumSystem.create(nuc, prb, omega, g)
        params = signals.ProtocolParams(tau=tau, n_dd=n_dd, omega_target=omega,
                                        t2_echo=1.0, l_probe=2, m_nuclear=1,
                                        coupling_g=g)
        simulated = oracle.run_dd_protocol(sys, params, noiseless=True)
        ratio = math.sin(omega * (n_dd + 1) * tau) / math.sin(omega * tau)
        analytic = (2.0 - 32.0 * g**2 / omega**2
                    * math.sin(0.5 * omega * tau) ** 4 * ratio**2 * gamma)
        return abs(simulated - analytic)

    shrink = pulse_count_residual(g_hi) / pulse_count_residual(g_hi / 2.0)
    report.add("interference-count-convention", computed=shrink,
               note="residual shrink factor of the published pulse-count "
                    "interference argument: 4 = a second-order error; the "
                    "half-period (echo-unit) count is the validated convention")


# Channel and identity checks ----------------------------------------------------------

def _random_density(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def _channel_checks(report: DiscrepancyReport) -> None:
    rng = np.random.default_rng(7)
    channel = oracle.DephasingChannel(t=1.3e-3, t2=2.0e-3)
    worst_trace, worst_eig = 0.0, 0.0
    for _ in range(100):
        rho = _random_density(rng, 4)
        out = oracle.apply_dephasing_channel(oracle.DensityState(rho), channel, [0, 1])
        worst_trace = max(worst_trace, abs(np.trace(out.matrix).real - 1.0),
                          abs(np.trace(out.matrix).imag))
        worst_eig = max(worst_eig, -float(np.min(np.linalg.eigvalsh(out.matrix))))
    ok = worst_trace <= 1e-12 and worst_eig <= 1e-10
    report.add("dephasing-channel-cptp", computed=max(worst_trace, worst_eig),
               verdict=_verdict(ok),
               note="100 random 2-qubit states; trace drift tol 1e-12, "
                    "eigenvalue floor -1e-10")

    dev = 0.0
    for _ in range(20):
        rho = _random_density(rng, 2)
        out = oracle.apply_dephasing_channel(oracle.DensityState(rho), channel, [0])
        sx_in = np.real(np.trace(rho @ np.array([[0, 1], [1, 0]])))
        sx_out = np.real(np.trace(out.matrix @ np.array([[0, 1], [1, 0]])))
        dev = max(dev, abs(sx_out - channel.attenuation * sx_in))
    report.add("dephasing-sx-attenuation", computed=dev,
               verdict=_verdict(dev <= 1e-15),
               note="single-qubit sigma_x attenuates by exactly exp(-(t/T2)^3)")

    obs = oracle.dephased_ghz_observable(3, t=1.3e-3, t2=2.0e-3)
    coh_dev = abs(obs[0, -1].real - 0.5 * np.exp(-3 * (1.3e-3 / 2.0e-3) ** 3))
    report.add("dephased-ghz-coherence", computed=coh_dev,
               verdict=_verdict(coh_dev <= 1e-16),
               note="GHZ observable coherence is exactly exp(-L (t/T2)^3)/2")


def _identity_checks(report: DiscrepancyReport) -> None:
    rng = np.random.default_rng(11)
    omega, g, tau = 1.0, 2e-2, 0.9

    # sign independence: M=1 minus vs mixed; M=2 all-plus vs all-minus
    nuc1 = _random_cluster(rng, 1)
    prb = _random_probes(rng, 2)
    sys1 = oracle.QuantumSystem.create(nuc1, prb, omega, g)
    params1 = signals.ProtocolParams(tau=tau, n_dd=3, omega_target=omega,
                                     t2_echo=1.0, l_probe=2, m_nuclear=1,
                                     coupling_g=g)
    dev = abs(oracle.run_dd_protocol(sys1, params1, nuclear_state="minus")
              - oracle.run_dd_protocol(sys1, params1, nuclear_state="mixed"))
    nuc2 = _random_cluster(rng, 2)
    sys2 = oracle.QuantumSystem.create(nuc2, prb, omega, g)
    params2 = signals.ProtocolParams(tau=tau, n_dd=3, omega_target=omega,
                                     t2_echo=1.0, l_probe=2, m_nuclear=2,
                                     coupling_g=g)
    dev = max(dev, abs(oracle.run_dd_protocol(sys2, params2, nuclear_state="plus")
                       - oracle.run_dd_protocol(sys2, params2, nuclear_state="minus")))
    report.add("nuclear-sign-independence", computed=dev,
               verdict=_verdict(dev <= 1e-10),
               note="protocol results do not depend on the nuclear |+/-> choice")

    state = oracle.initial_dd_state(sys1)
    twice = oracle.pi_pulse_probes(oracle.pi_pulse_probes(state, sys1), sys1)
    inv_dev = float(np.max(np.abs(twice.matrix - state.matrix)))
    report.add("pi-pulse-involution", computed=inv_dev,
               verdict=_verdict(inv_dev <= 1e-10))

    sys_flip = oracle.QuantumSystem.create(nuc1, prb, omega, -g)
    u = oracle._propagator(sys1.hamiltonian, tau)
    x = oracle._pi_pulse_operator(sys1)
    u_flip = oracle._propagator(sys_flip.hamiltonian, tau)
    flip_dev = float(np.max(np.abs(x @ u @ x - u_flip)))
    report.add("pulse-frame-flip-identity", computed=flip_dev,
               verdict=_verdict(flip_dev <= 1e-10),
               note="pulse-evolve-pulse equals evolution under the "
                    "probe-flipped Hamiltonian")

    # Noise-placement modes (qualitative comparison; informational)
    params_noise = signals.ProtocolParams(tau=0.4, n_dd=3, omega_target=omega,
                                          t2_echo=2.2, l_probe=2, m_nuclear=1,
                                          coupling_g=g)
    analytic_mode = oracle.run_dd_protocol(sys1, params_noise, noiseless=False)
    channel_mode = oracle.run_dd_protocol(sys1, params_noise, noiseless=False,
                                          noise_mode="per_step_channel")
    report.add("noise-placement-modes", computed=channel_mode,
               published=analytic_mode,
               rel_deviation=abs(channel_mode - analytic_mode) / abs(analytic_mode),
               note="literal per-interval channel (bare T2_echo) vs normative "
                    "analytic attenuation with the decoupling-rescaled T2; the "
                    "channel model cannot express the n_dd^(2/3) rescaling")


# Figure anchors, scaling laws, constants ----------------------------------------------

def _anchor_checks(report: DiscrepancyReport) -> None:
    geom = EnsembleGeometry.from_dimensionless(1e-6, *GEOMETRY_OPT_SEP_PUBLISHED,
                                               rho_nv=NV1.rho_nv)
    m, n_dd = M_NUCLEAR_DEFAULT, 63
    cyclic = PhysicalScenario.create(gamma_convention="cyclic")
    angular = PhysicalScenario.create(gamma_convention="angular")
    t_ent = signals.t_detect_ent_published(cyclic, geom, m, NV1.t2_echo).t_detect
    t_dd = signals.t_detect_dd_published(cyclic, geom, m, n_dd, NV1.t2_echo).t_detect
    report.add("detection-time-entangled-anchor", computed=t_ent,
               published=T_ENT_ANCHOR_S,
               rel_deviation=abs(t_ent - T_ENT_ANCHOR_S) / T_ENT_ANCHOR_S,
               verdict=_verdict(abs(t_ent - T_ENT_ANCHOR_S) <= 0.1 * T_ENT_ANCHOR_S),
               note="NV1, z_min = 1 um, cyclic coupling, tol 10%")
    ratio = t_dd / t_ent
    ok = RATIO_ANCHOR / 2.0 <= ratio <= RATIO_ANCHOR * 2.0
    report.add("detection-time-ratio-anchor", computed=ratio, published=RATIO_ANCHOR,
               rel_deviation=abs(ratio - RATIO_ANCHOR) / RATIO_ANCHOR,
               verdict=_verdict(ok), note="within a factor 2, both conventions")
    t_ent_a = signals.t_detect_ent_published(angular, geom, m, NV1.t2_echo).t_detect
    t_dd_a = signals.t_detect_dd_published(angular, geom, m, n_dd, NV1.t2_echo).t_detect
    conv_dev = abs(t_dd_a / t_ent_a - ratio) / ratio
    closed = signals.t_detect_ratio(geom, n_dd)
    conv_dev = max(conv_dev, abs(closed - ratio) / ratio)
    report.add("ratio-convention-independence", computed=conv_dev,
               verdict=_verdict(conv_dev <= 1e-12),
               note="coupling and T2 cancel exactly in the ratio")
    report.add("coupling-convention-calibration", computed=t_ent,
               published=T_ENT_ANCHOR_S,
               note=f"cyclic coupling (G/2pi) gives {t_ent:.4g} s at 1 um vs the "
                    f"published ~60 s; the angular coupling gives {t_ent_a:.4g} s, "
                    "a (2pi)^4 offset in G^4")
    report.add("gamma-probe-assumed", computed=GAMMA_NV_HZ_PER_T,
               note="probe gyromagnetic ratio is never stated with the published "
                    "values; the standard NV 28.024 GHz/T is assumed and overridable")


def _scaling_checks(report: DiscrepancyReport) -> None:
    rng = np.random.default_rng(5)
    scen = PhysicalScenario.create()
    worst = 0.0
    for _ in range(20):
        z = 10 ** rng.uniform(-7, -5.5)
        rho = 10 ** rng.uniform(22, 24)
        m = 10 ** rng.uniform(4, 7)
        n_dd = int(rng.choice([3, 15, 63, 255]))
        t2 = 10 ** rng.uniform(-5, -3)
        geom = EnsembleGeometry.from_dimensionless(z, 1.16, 1.29, rho)
        geom2z = EnsembleGeometry.from_dimensionless(2 * z, 1.16, 1.29, rho)
        geom2rho = EnsembleGeometry.from_dimensionless(z, 1.16, 1.29, 2 * rho)
        t_dd = signals.t_detect_dd_published(scen, geom, m, n_dd, t2).t_detect
        t_ent = signals.t_detect_ent_published(scen, geom, m, t2).t_detect
        checks = [
            signals.t_detect_dd_published(scen, geom2z, m, n_dd, t2).t_detect / t_dd / 512.0,
            signals.t_detect_dd_published(scen, geom2rho, m, n_dd, t2).t_detect / t_dd * 2.0,
            signals.t_detect_dd_published(scen, geom, 2 * m, n_dd, t2).t_detect / t_dd * 4.0,
            signals.t_detect_ent_published(scen, geom2z, m, t2).t_detect / t_ent / 8.0,
            signals.t_detect_ent_published(scen, geom2rho, m, t2).t_detect / t_ent * 8.0,
            signals.t_detect_ent_published(scen, geom, 2 * m, t2).t_detect / t_ent * 4.0,
        ]
        worst = max(worst, max(abs(c - 1.0) for c in checks))
    report.add("scaling-laws-exact", computed=worst,
               verdict=_verdict(worst <= 1e-12),
               note="z^9/z^3, rho^-1/rho^-3, M^-2 power laws at machine precision")


def _constants_checks(report: DiscrepancyReport, derivation: ConstantsDerivation) -> None:
    geo_sep = derivation.geometry_sep.argmin
    geo_ent = derivation.geometry_ent.argmin
    dev_sep = float(np.max(np.abs(geo_sep - GEOMETRY_OPT_SEP_PUBLISHED)))
    dev_ent = float(np.max(np.abs(geo_ent - GEOMETRY_OPT_ENT_PUBLISHED)))
    report.add("geometry-optimum-sep", computed=geo_sep[0],
               published=GEOMETRY_OPT_SEP_PUBLISHED[0], rel_deviation=dev_sep,
               verdict=_verdict(dev_sep <= GEOMETRY_TOL_SEP),
               note=f"argmin ({geo_sep[0]:.4f}, {geo_sep[1]:.4f}) vs published "
                    f"{GEOMETRY_OPT_SEP_PUBLISHED}, tol +-{GEOMETRY_TOL_SEP}")
    report.add("geometry-optimum-ent", computed=geo_ent[0],
               published=GEOMETRY_OPT_ENT_PUBLISHED[0], rel_deviation=dev_ent,
               verdict=_verdict(dev_ent <= GEOMETRY_TOL_ENT),
               note=f"argmin ({geo_ent[0]:.4f}, {geo_ent[1]:.4f}) vs published "
                    f"{GEOMETRY_OPT_ENT_PUBLISHED}, tol +-{GEOMETRY_TOL_ENT}")
    ok = (derivation.c_dd_rederived > 0 and derivation.c_ent_rederived > 0
          and derivation.parameter_invariance_rel_dev <= 1e-5)
    report.add("constants-published-recorded", computed=derivation.c_dd_published,
               published=signals.C_DD_PUBLISHED, rel_deviation=0.0,
               verdict=_verdict(ok),
               note="published prefactors recorded alongside re-derived values; "
                    "re-derivation independent of the (T2, G) reduction pair to "
                    f"{derivation.parameter_invariance_rel_dev:.2g}")
    two_pi_4 = (2 * np.pi) ** 4
    report.add("constant-sep-rederived", computed=derivation.c_dd_rederived,
               published=derivation.c_dd_published,
               rel_deviation=derivation.c_dd_rel_deviation,
               note=f"rederived/(2pi)^4 = {derivation.c_dd_rederived / two_pi_4:.5f}; "
                    "the published constant absorbs one 2pi per power of G")
    report.add("constant-ent-rederived", computed=derivation.c_ent_rederived,
               published=derivation.c_ent_published,
               rel_deviation=derivation.c_ent_rel_deviation,
               note=f"rederived/(2pi)^4 = {derivation.c_ent_rederived / two_pi_4:.6f}")
    report.add("f-optimum-resonance-vs-published",
               computed=derivation.f_dd_norm_resonance,
               published=derivation.f_norm_published,
               rel_deviation=abs(derivation.f_dd_norm_resonance
                                 - derivation.f_norm_published)
               / derivation.f_norm_published,
               note="nondimensionalized noise-function optimum at resonance; "
                    f"free-tau minima: many-pulse {derivation.f_dd_norm_free_tau:.8g}, "
                    f"echo {derivation.f_ent_norm_free_tau:.8g} (the echo optimum "
                    "sits at omega tau ~ 2.33, ~40% below the resonance value "
                    "used by the published constants)")


def _formula_variant_checks(report: DiscrepancyReport) -> None:
    params = signals.ProtocolParams(tau=0.5, n_dd=3, omega_target=1.0,
                                    t2_echo=1.0, l_probe=10, m_nuclear=1,
                                    coupling_g=1e-3)
    gamma = 10.0
    exp1 = signals.expectation_mx(params, gamma, decay_exponent=1)
    exp2 = signals.expectation_mx(params, gamma, decay_exponent=2)
    report.add("expectation-decay-exponent-variant", computed=exp2, published=exp1,
               rel_deviation=abs(exp2 - exp1) / abs(exp1),
               note="squared decay prefactor vs the channel-consistent single "
                    "power (the single power also reproduces the noise algebra)")
    params_echo = signals.ProtocolParams(tau=0.35, n_dd=1, omega_target=1.0,
                                         t2_echo=1.0, l_probe=4, m_nuclear=1,
                                         coupling_g=1e-3)
    p3 = signals.p_ghz(params_echo, gamma, baseline_exponent=3)
    p2 = signals.p_ghz(params_echo, gamma, baseline_exponent=2)
    report.add("ghz-baseline-exponent-variant", computed=p2, published=p3,
               rel_deviation=abs(p2 - p3) / p3,
               note="squared baseline exponent vs the cubic channel exponent")

    # Point-nuclei approximation: spread nuclei vs a point cluster.
    rng = np.random.default_rng(17)
    prb = _random_probes(rng, 40, r_tilde=1.16, z_tilde=1.29)
    spread = rng.uniform(-0.05, 0.05, size=(4, 3))     # +-25 nm at 500 nm standoff
    point = np.zeros((4, 3))
    g_point = geomfactors.gamma_sep_discrete(point, prb).value
    g_spread = geomfactors.gamma_sep_discrete(spread, prb).value
    report.add("point-nuclei-approximation", computed=g_spread, published=g_point,
               rel_deviation=abs(g_spread - g_point) / g_point,
               note="discrete factor with nuclei spread over a 1/10-standoff "
                    "cube vs all nuclei at the origin")


def build_validation_report(depth: str = "fast") -> DiscrepancyReport:
    """Run the validation suite; ``depth`` is ``"fast"`` or ``"full"``."""
    if depth not in ("fast", "full"):
        raise ValueError("depth must be 'fast' or 'full'")
    report = DiscrepancyReport()
    grid_points = 20 if depth == "full" else 6
    lm_pairs = ([(1, 1), (2, 1), (3, 1), (1, 2), (2, 2), (3, 2)]
                if depth == "full" else [(1, 1), (2, 1), (3, 1)])
    _quadrature_grid_checks(report, grid_points)
    _oracle_checks(report, lm_pairs)
    _channel_checks(report)
    _identity_checks(report)
    _anchor_checks(report)
    _scaling_checks(report)
    _constants_checks(report, derive_constants())
    _formula_variant_checks(report)
    return report
