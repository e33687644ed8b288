"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines.  Criterion 3 is implemented exactly as stated and is expected to fail:
the protocol observables are exactly even in the coupling (a probe-sector bit
flip maps G to -G and leaves the initial probe states and observables
invariant), so the first correction beyond the second-order formulas is
fourth order and residuals shrink ~16x per halving, not 8x; at G/omega = 1e-3
several residuals additionally sit at the eigensolver noise floor.  The
``validate`` command runs the physically meaningful bound check instead (the
third-order claim is an error bound, which holds).  See the repository notes
for the full analysis.
"""

import itertools
import math
import time

import numpy as np
import pytest

from nvdetect.cli import main
from nvdetect.core import (EnsembleGeometry, NV1, PhysicalScenario,
                           M_NUCLEAR_DEFAULT)
from nvdetect.geomfactors import (f_ent_closed, f_sep_closed,
                                  gamma_ent_discrete, gamma_sep_discrete,
                                  quadrature_ent_tilde, quadrature_sep_tilde)
from nvdetect.optimize import derive_constants, minimize_geometry
from nvdetect.oracle import (DensityState, DephasingChannel, QuantumSystem,
                             apply_dephasing_channel, dephased_ghz_observable,
                             perturbation_defect, run_dd_protocol,
                             run_ghz_protocol)
from nvdetect.signals import (ProtocolParams, t_detect_dd_published,
                              t_detect_ent_published)


def report(criterion: int, ok: bool, detail: str) -> None:
    print(f"[criterion {criterion}] {'PASS' if ok else 'FAIL'}: {detail}")


def test_criterion_1_geometry_optima():
    start = time.perf_counter()
    sep = minimize_geometry("sep")
    ent = minimize_geometry("ent")
    elapsed = time.perf_counter() - start
    ok_sep = (abs(sep.argmin[0] - 1.16) <= 0.05
              and abs(sep.argmin[1] - 1.29) <= 0.05)
    ok_ent = (abs(ent.argmin[0] - 5.05) <= 0.10
              and abs(ent.argmin[1] - 4.96) <= 0.10)
    ok = ok_sep and ok_ent and elapsed < 30.0
    report(1, ok, f"sep=({sep.argmin[0]:.4f},{sep.argmin[1]:.4f}) "
                  f"ent=({ent.argmin[0]:.4f},{ent.argmin[1]:.4f}) "
                  f"elapsed={elapsed:.1f}s")
    assert ok_sep and ok_ent
    assert elapsed < 30.0


def test_criterion_2_closed_forms_vs_quadrature():
    start = time.perf_counter()
    rs = np.linspace(0.2, 8.0, 20)
    zs = np.linspace(1.05, 8.0, 20)
    dev_sep = dev_ent = 0.0
    for r in rs:
        for z in zs:
            quad = 8.0 / (3.0 * np.pi) * quadrature_sep_tilde(r, z)[0]
            dev_sep = max(dev_sep, abs(f_sep_closed(r, z) - quad) / quad)
            (int_a, _), _ = quadrature_ent_tilde(r, z)
            dev_ent = max(dev_ent,
                          abs(f_ent_closed(r, z) - int_a**2) / int_a**2)
    printed_zero = f_ent_closed(1.0, 1.0, "printed")
    elapsed = time.perf_counter() - start
    ok = dev_sep <= 1e-8 and dev_ent <= 1e-8 and printed_zero > 1.0 \
        and elapsed < 60.0
    report(2, ok, f"max rel dev: sep={dev_sep:.2e} ent={dev_ent:.2e}; "
                  f"printed ent zero-height value={printed_zero:.3f} "
                  f"(documented informational finding); elapsed={elapsed:.1f}s")
    assert dev_sep <= 1e-8
    assert dev_ent <= 1e-8
    assert printed_zero > 1.0
    assert elapsed < 60.0


def _random_probes(rng, l_probe):
    s = 1.5 * np.sqrt(rng.random(l_probe))
    phi = -0.5 * np.pi + np.pi * rng.random(l_probe)
    z = 1.0 + rng.random(l_probe)
    return np.column_stack([s * np.cos(phi), s * np.sin(phi), z])


def _residuals(nuc, prb, g):
    omega, tau, n_dd = 1.0, 0.9, 3
    sys = QuantumSystem.create(nuc, prb, omega, g)
    params = ProtocolParams(tau=tau, n_dd=n_dd, omega_target=omega, t2_echo=1e9,
                            l_probe=prb.shape[0], m_nuclear=nuc.shape[0],
                            coupling_g=g)
    mx = run_dd_protocol(sys, params, noiseless=True)
    gamma = gamma_sep_discrete(nuc, prb).value
    ratio = math.sin(params.echo_units * omega * tau) / math.sin(omega * tau)
    mx_formula = (prb.shape[0] - 32.0 * g**2 * math.sin(0.45) ** 4
                  * ratio**2 * gamma)
    params_echo = ProtocolParams(tau=tau, n_dd=1, omega_target=omega,
                                 t2_echo=1e9, l_probe=prb.shape[0],
                                 m_nuclear=nuc.shape[0], coupling_g=g)
    p = run_ghz_protocol(sys_echo(nuc, prb, g), params_echo, noiseless=True)
    p_formula = 1.0 - 16.0 * g**2 * math.sin(0.45) ** 4 \
        * gamma_ent_discrete(nuc, prb).value
    return abs(mx - mx_formula), abs(p - p_formula)


def sys_echo(nuc, prb, g):
    return QuantumSystem.create(nuc, prb, 1.0, g)


def test_criterion_3_oracle_convergence_order():
    # Stated check: at G/omega = 1e-3, halving G shrinks the noiseless
    # residuals by a factor of 8 +- 1 for every (L, M) in {1,2,3} x {1,2}.
    # The dynamics are exactly even in G, so the true shrink factor is ~16
    # (fourth order) where residuals are measurable at all; this assertion is
    # therefore expected to fail.  The error-bound form of the check (shrink
    # factor >= 7, i.e. at least third order) passes and is part of the
    # `validate` suite.
    start = time.perf_counter()
    rng = np.random.default_rng(31415)
    rows = []
    all_ok = True
    for l_probe, m_nuclear in itertools.product((1, 2, 3), (1, 2)):
        nuc = rng.normal(0.0, 0.02, size=(m_nuclear, 3))
        prb = _random_probes(rng, l_probe)
        dd_full, ghz_full = _residuals(nuc, prb, 1e-3)
        dd_half, ghz_half = _residuals(nuc, prb, 5e-4)
        shrink_dd = dd_full / dd_half if dd_half else math.inf
        shrink_ghz = ghz_full / ghz_half if ghz_half else math.inf
        ok = 7.0 <= shrink_dd <= 9.0 and 7.0 <= shrink_ghz <= 9.0
        all_ok &= ok
        rows.append(f"L={l_probe} M={m_nuclear}: dd {dd_full:.2e}->{dd_half:.2e} "
                    f"(x{shrink_dd:.2f}), ghz {ghz_full:.2e}->{ghz_half:.2e} "
                    f"(x{shrink_ghz:.2f})")
    elapsed = time.perf_counter() - start
    report(3, all_ok and elapsed < 120.0,
           "shrink factors under G halving at G/omega=1e-3 "
           "(required window [7, 9]):\n  " + "\n  ".join(rows)
           + f"\n  elapsed={elapsed:.1f}s")
    assert elapsed < 120.0
    assert all_ok, (
        "residual shrink factors are not within 8 +- 1:\n  " + "\n  ".join(rows)
        + "\n  The exact dynamics are even in the coupling (probe-sector "
          "bit-flip symmetry), so the first neglected term is fourth order: "
          "measured shrink is ~16 in the clean regime and noise-dominated at "
          "G/omega = 1e-3.  The second-order formulas themselves are verified "
          "to better than 1e-10 at this coupling (see test_oracle and the "
          "validation report); the stated 8x rate cannot be produced by any "
          "correct implementation.")


def test_criterion_4_figure_anchor():
    geom = EnsembleGeometry.from_dimensionless(1e-6, 1.16, 1.29, NV1.rho_nv)
    results = {}
    for convention in ("cyclic", "angular"):
        scen = PhysicalScenario.create(gamma_convention=convention)
        t_dd = t_detect_dd_published(scen, geom, M_NUCLEAR_DEFAULT, 63,
                                     NV1.t2_echo).t_detect
        t_ent = t_detect_ent_published(scen, geom, M_NUCLEAR_DEFAULT,
                                       NV1.t2_echo).t_detect
        results[convention] = (t_dd, t_ent, t_dd / t_ent)
    t_ent_cyclic = results["cyclic"][1]
    ok_anchor = abs(t_ent_cyclic - 60.0) <= 6.0
    ratios = [results[c][2] for c in ("cyclic", "angular")]
    ok_ratio = all(0.5e7 <= r <= 2e7 for r in ratios)
    ok_conv = abs(ratios[0] - ratios[1]) / ratios[0] <= 1e-12
    ok = ok_anchor and ok_ratio and ok_conv
    report(4, ok, f"T_ent(1um, cyclic)={t_ent_cyclic:.2f}s (target 60+-10%); "
                  f"ratio={ratios[0]:.3e} under both conventions")
    assert ok_anchor and ok_ratio and ok_conv


def test_criterion_5_scaling_laws():
    rng = np.random.default_rng(55)
    scen = PhysicalScenario.create()
    worst = 0.0
    for _ in range(25):
        z = 10 ** rng.uniform(-7, -5.5)
        rho = 10 ** rng.uniform(22, 24)
        m = 10 ** rng.uniform(4, 7)
        t2 = 10 ** rng.uniform(-5, -3)
        n_dd = int(rng.choice([3, 15, 63, 255]))
        geom = EnsembleGeometry.from_dimensionless(z, 1.16, 1.29, rho)
        gz = EnsembleGeometry.from_dimensionless(2 * z, 1.16, 1.29, rho)
        gr = EnsembleGeometry.from_dimensionless(z, 1.16, 1.29, 2 * rho)
        t_dd = t_detect_dd_published(scen, geom, m, n_dd, t2).t_detect
        t_ent = t_detect_ent_published(scen, geom, m, t2).t_detect
        deviations = [
            t_detect_dd_published(scen, gz, m, n_dd, t2).t_detect / (512 * t_dd) - 1,
            t_detect_dd_published(scen, gr, m, n_dd, t2).t_detect * 2 / t_dd - 1,
            t_detect_dd_published(scen, geom, 2 * m, n_dd, t2).t_detect * 4 / t_dd - 1,
            t_detect_ent_published(scen, gz, m, t2).t_detect / (8 * t_ent) - 1,
            t_detect_ent_published(scen, gr, m, t2).t_detect * 8 / t_ent - 1,
            t_detect_ent_published(scen, geom, 2 * m, t2).t_detect * 4 / t_ent - 1,
        ]
        worst = max(worst, max(abs(d) for d in deviations))
    ok = worst <= 1e-12
    report(5, ok, f"max power-law deviation={worst:.2e} (tol 1e-12)")
    assert ok


def test_criterion_6_channel_sanity():
    rng = np.random.default_rng(66)
    channel = DephasingChannel(t=1.3e-3, t2=2.0e-3)
    worst_trace = worst_eig = 0.0
    for _ in range(100):
        a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        rho = a @ a.conj().T
        rho /= np.trace(rho).real
        out = apply_dephasing_channel(DensityState(rho), channel, [0, 1])
        worst_trace = max(worst_trace, abs(np.trace(out.matrix).real - 1.0),
                          abs(np.trace(out.matrix).imag))
        worst_eig = max(worst_eig, -float(np.min(np.linalg.eigvalsh(out.matrix))))
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    rho1 = a @ a.conj().T
    rho1 /= np.trace(rho1).real
    out1 = apply_dephasing_channel(DensityState(rho1), channel, [0])
    atten_dev = abs(np.real(np.trace(out1.matrix @ sx))
                    - channel.attenuation * np.real(np.trace(rho1 @ sx)))
    obs = dephased_ghz_observable(4, t=1.3e-3, t2=2.0e-3)
    coh_dev = abs(obs[0, -1].real - 0.5 * math.exp(-4 * (1.3e-3 / 2.0e-3) ** 3))
    ok = (worst_trace <= 1e-12 and worst_eig <= 1e-10
          and atten_dev <= 1e-15 and coh_dev == 0.0)
    report(6, ok, f"trace drift={worst_trace:.1e} eig floor={worst_eig:.1e} "
                  f"sx attenuation dev={atten_dev:.1e} coherence dev={coh_dev:.1e}")
    assert worst_trace <= 1e-12
    assert worst_eig <= 1e-10
    assert atten_dev <= 1e-15
    assert coh_dev == 0.0


def test_criterion_7_perturbation_identities():
    rng = np.random.default_rng(77)
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    a = 0.5 * (a + a.conj().T)
    b = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    b = 0.5 * (b + b.conj().T)
    shrink = perturbation_defect(a, b, 1e-2, 0.8) / perturbation_defect(a, b, 5e-3, 0.8)
    ok_pert = abs(shrink - 8.0) <= 0.15 * 8.0

    nuc = rng.normal(0.0, 0.02, size=(1, 3))
    prb = _random_probes(rng, 2)
    sys = QuantumSystem.create(nuc, prb, 1.0, 2e-2)
    params = ProtocolParams(tau=0.9, n_dd=3, omega_target=1.0, t2_echo=1e9,
                            l_probe=2, m_nuclear=1, coupling_g=2e-2)
    pm_dev = abs(run_dd_protocol(sys, params, nuclear_state="minus")
                 - run_dd_protocol(sys, params, nuclear_state="mixed"))
    from nvdetect.oracle import (_pi_pulse_operator, _propagator,
                                 initial_dd_state, pi_pulse_probes)
    state = initial_dd_state(sys)
    inv_dev = float(np.max(np.abs(
        pi_pulse_probes(pi_pulse_probes(state, sys), sys).matrix - state.matrix)))
    sys_flip = QuantumSystem.create(nuc, prb, 1.0, -2e-2)
    u = _propagator(sys.hamiltonian, 0.9)
    x = _pi_pulse_operator(sys)
    flip_dev = float(np.max(np.abs(x @ u @ x
                                   - _propagator(sys_flip.hamiltonian, 0.9))))
    ok = ok_pert and pm_dev <= 1e-10 and inv_dev <= 1e-10 and flip_dev <= 1e-10
    report(7, ok, f"defect shrink={shrink:.3f} (target 8+-15%), "
                  f"|+/-> dev={pm_dev:.1e}, involution={inv_dev:.1e}, "
                  f"frame flip={flip_dev:.1e}")
    assert ok_pert
    assert pm_dev <= 1e-10
    assert inv_dev <= 1e-10
    assert flip_dev <= 1e-10


def test_criterion_8_constants_ledger(capsys):
    der = derive_constants()
    assert main(["constants"]) == 0
    out = capsys.readouterr().out
    ok_published = "0.0536" in out and "0.0107" in out
    ok_values = der.c_dd_rederived > 0 and der.c_ent_rederived > 0
    ok_dev = der.c_dd_rel_deviation > 0 and "rel_deviation" in out
    # the sweep command keeps emitting the published forms
    geom = EnsembleGeometry.from_dimensionless(1e-6, 1.16, 1.29, NV1.rho_nv)
    scen = PhysicalScenario.create()
    emitted = t_detect_ent_published(scen, geom, M_NUCLEAR_DEFAULT,
                                     NV1.t2_echo).t_detect
    expected = (0.0107 * (1e-6) ** 3
                / (NV1.t2_echo**3 * scen.coupling_G**4 * NV1.rho_nv**3
                   * M_NUCLEAR_DEFAULT**2))
    ok_form = emitted == pytest.approx(expected, rel=1e-14)
    ok = ok_published and ok_values and ok_dev and ok_form
    report(8, ok, f"c_dd rederived={der.c_dd_rederived:.4g} "
                  f"(published 0.0536, rel dev {der.c_dd_rel_deviation:.3g}); "
                  f"c_ent rederived={der.c_ent_rederived:.4g} "
                  f"(published 0.0107, rel dev {der.c_ent_rel_deviation:.3g})")
    assert ok


def test_criterion_9_full_validation_suite(capsys):
    start = time.perf_counter()
    code = main(["validate", "--depth", "full"])
    elapsed = time.perf_counter() - start
    out = capsys.readouterr().out
    ok = code == 0 and elapsed < 300.0
    report(9, ok, f"exit={code} elapsed={elapsed:.1f}s (budget 300s); "
                  f"{out.strip().splitlines()[-2]}")
    assert code == 0
    assert elapsed < 300.0
