"""Validate the second-order protocol formulas against exact dense simulation.

Both protocols are executed verbatim on small random systems and compared to
the closed-form expectation value and survival probability.  The residual
scales as the fourth power of the coupling: the dynamics are exactly even in
G (flipping every probe in the computational basis maps G to -G and leaves
the initial states and observables invariant), so the third-order term in the
perturbation series vanishes identically and the second-order formulas are
better than their error bound suggests.
"""

import numpy as np

from nvdetect.geomfactors import gamma_ent_discrete, gamma_sep_discrete
from nvdetect.oracle import QuantumSystem, run_dd_protocol, run_ghz_protocol
from nvdetect.signals import ProtocolParams, dirichlet_ratio

rng = np.random.default_rng(42)
m_nuclear, l_probe = 2, 3
nuc = rng.normal(0.0, 0.02, size=(m_nuclear, 3))
s = 1.5 * np.sqrt(rng.random(l_probe))
phi = -0.5 * np.pi + np.pi * rng.random(l_probe)
prb = np.column_stack([s * np.cos(phi), s * np.sin(phi),
                       1.0 + rng.random(l_probe)])

omega, tau, n_dd = 1.0, 0.9, 3
gamma_sep = gamma_sep_discrete(nuc, prb).value
gamma_ent = gamma_ent_discrete(nuc, prb).value
print(f"random system: M = {m_nuclear} nuclei, L = {l_probe} probes")
print(f"geometric factors: incoherent {gamma_sep:.4f}, coherent {gamma_ent:.4f}\n")

print("coupling      <Mx> simulated    <Mx> formula      |residual|   p simulated      p formula        |residual|")
rows = []
for g in (1.6e-2, 8e-3, 4e-3, 2e-3, 1e-3):
    sys = QuantumSystem.create(nuc, prb, omega, g)
    params = ProtocolParams(tau=tau, n_dd=n_dd, omega_target=omega, t2_echo=1e9,
                            l_probe=l_probe, m_nuclear=m_nuclear, coupling_g=g)
    mx = run_dd_protocol(sys, params, noiseless=True)
    ratio = dirichlet_ratio(params.echo_units, omega * tau)
    mx_formula = (l_probe - 32 * g**2 / omega**2
                  * np.sin(0.5 * omega * tau) ** 4 * ratio**2 * gamma_sep)
    params_echo = ProtocolParams(tau=tau, n_dd=1, omega_target=omega,
                                 t2_echo=1e9, l_probe=l_probe,
                                 m_nuclear=m_nuclear, coupling_g=g)
    p = run_ghz_protocol(sys, params_echo, noiseless=True)
    p_formula = 1 - 16 * g**2 / omega**2 * np.sin(0.5 * omega * tau) ** 4 * gamma_ent
    rows.append((g, abs(mx - mx_formula), abs(p - p_formula)))
    print(f"{g:9.1e}   {mx:.12f}   {mx_formula:.12f}   {abs(mx - mx_formula):.3e}"
          f"   {p:.12f}   {p_formula:.12f}   {abs(p - p_formula):.3e}")

print("\nresidual convergence order (log2 of the shrink per halving):")
for (g1, dd1, ghz1), (g2, dd2, ghz2) in zip(rows, rows[1:]):
    if dd2 > 1e-15 and ghz2 > 1e-15:
        print(f"  G {g1:.1e} -> {g2:.1e}: order dd = {np.log2(dd1 / dd2):.2f}, "
              f"ghz = {np.log2(ghz1 / ghz2):.2f}")
print("\nfourth order throughout: the stated third-order bound holds with room"
      "\nto spare because the odd orders vanish by symmetry.")
