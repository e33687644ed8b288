"""Exact dense simulation of the nuclear + probe spin system.

This module is the executable ground truth for the second-order formulas in
:mod:`nvdetect.signals`: it builds the effective Hamiltonian from explicit
spin sites, runs both pulse protocols verbatim, and checks the perturbation
and dephasing identities the analytic derivations rest on.

Conventions: qubit 0 is the leftmost tensor factor; nuclear qubits come
first, then probes.  Propagators are computed by Hermitian eigendecomposition
(exact at these sizes), and noise enters in the normative "attenuation" mode:
noiseless dynamics with the analytic decay factor on the observable (the
Hermitian-map identity).  A literal per-interval channel mode exists for
qualitative comparison only; it cannot reproduce the T2_echo * n_dd^(2/3)
coherence rescaling, which encodes noise-spectrum physics outside the
single-qubit channel model.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Literal, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss

from .core import SpinSite, dipole_components, positions_of
from .errors import NumericError, ResourceLimitError
from .signals import ProtocolParams

_SI = np.eye(2, dtype=complex)
_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SZ = np.array([[1, 0], [0, -1]], dtype=complex)

DEFAULT_DIMENSION_CAP = 2**12

NuclearState = Literal["mixed", "plus", "minus"]
NoiseMode = Literal["attenuation", "per_step_channel"]


def _kron_all(ops: Sequence[np.ndarray]) -> np.ndarray:
    return reduce(np.kron, ops)


def _op_on(op: np.ndarray, index: int, n_qubits: int) -> np.ndarray:
    return _kron_all([op if k == index else _SI for k in range(n_qubits)])


# States and systems ------------------------------------------------------------

@dataclass(frozen=True)
class DensityState:
    """Dense density matrix with explicit invariant checks."""

    matrix: np.ndarray

    def validate(self, trace_atol: float = 1e-12, herm_atol: float = 1e-12,
                 eig_floor: float = -1e-10) -> "DensityState":
        m = self.matrix
        if abs(np.trace(m).real - 1.0) > trace_atol or abs(np.trace(m).imag) > trace_atol:
            raise NumericError(f"trace drifted to {np.trace(m)!r}")
        if np.max(np.abs(m - m.conj().T)) > herm_atol:
            raise NumericError("state is not Hermitian within tolerance")
        if np.min(np.linalg.eigvalsh(m)) < eig_floor:
            raise NumericError("state has a negative eigenvalue beyond tolerance")
        return self


@dataclass(frozen=True)
class DephasingChannel:
    """Single-qubit dephasing with cubic decay exponent (fixed)."""

    t: float
    t2: float

    EXPONENT = 3

    def __post_init__(self):
        if self.t < 0 or self.t2 <= 0:
            raise ValueError("need t >= 0 and t2 > 0")

    @property
    def attenuation(self) -> float:
        """Coherence factor exp(-(t/T2)^3), in (0, 1]."""
        return float(np.exp(-((self.t / self.t2) ** self.EXPONENT)))


@dataclass(frozen=True)
class QuantumSystem:
    """M nuclear + L probe qubits with their effective Hamiltonian."""

    m_nuclear: int
    l_probe: int
    nuclear_sites: tuple
    probe_sites: tuple
    omega_target: float
    coupling_g: float
    hamiltonian: np.ndarray = field(repr=False)

    @property
    def n_qubits(self) -> int:
        return self.m_nuclear + self.l_probe

    @property
    def dimension(self) -> int:
        return 2 ** self.n_qubits

    @classmethod
    def create(cls, nuclear_sites: Sequence[SpinSite] | np.ndarray,
               probe_sites: Sequence[SpinSite] | np.ndarray,
               omega_target: float, coupling_g: float,
               dimension_cap: int = DEFAULT_DIMENSION_CAP) -> "QuantumSystem":
        nuc = positions_of(nuclear_sites)
        prb = positions_of(probe_sites)
        h = build_effective_hamiltonian(nuc, prb, omega_target, coupling_g,
                                        dimension_cap=dimension_cap)
        return cls(m_nuclear=nuc.shape[0], l_probe=prb.shape[0],
                   nuclear_sites=tuple(map(tuple, nuc)),
                   probe_sites=tuple(map(tuple, prb)),
                   omega_target=omega_target, coupling_g=coupling_g,
                   hamiltonian=h)


def build_effective_hamiltonian(nuclear_sites, probe_sites, omega_target: float,
                                coupling_g: float,
                                dimension_cap: int = DEFAULT_DIMENSION_CAP) -> np.ndarray:
    """Dense effective Hamiltonian: nuclear Zeeman plus secular dipole coupling.

    H = sum_k (omega/2) Z_k + G sum_{k,j} [A_kj X_k + B_kj Y_k + C_kj Z_k] Z_j
    with nuclear qubits leftmost.  Hermitian by construction (verified).
    """
    nuc = positions_of(nuclear_sites)
    prb = positions_of(probe_sites)
    m, l = nuc.shape[0], prb.shape[0]
    n = m + l
    if 2**n > dimension_cap:
        raise ResourceLimitError(
            f"2^{n} exceeds the dense-simulation cap {dimension_cap}")
    dim = 2**n
    h = np.zeros((dim, dim), dtype=complex)
    for k in range(m):
        h += 0.5 * omega_target * _op_on(_SZ, k, n)
    for k in range(m):
        a, b, c = dipole_components(nuc[k] - prb)
        for j in range(l):
            zj = _op_on(_SZ, m + j, n)
            nuclear_part = (a[j] * _op_on(_SX, k, n) + b[j] * _op_on(_SY, k, n)
                            + c[j] * _op_on(_SZ, k, n))
            h += coupling_g * nuclear_part @ zj
    if np.max(np.abs(h - h.conj().T)) > 1e-12 * max(1.0, np.max(np.abs(h))):
        raise NumericError("assembled Hamiltonian is not Hermitian")
    return h


def _propagator(hamiltonian: np.ndarray, duration: float) -> np.ndarray:
    w, v = np.linalg.eigh(hamiltonian)
    u = (v * np.exp(-1j * w * duration)) @ v.conj().T
    defect = np.max(np.abs(u.conj().T @ u - np.eye(len(u))))
    if defect > 1e-10:
        raise NumericError(f"propagator unitarity defect {defect:.3e}")
    return u


def evolve(state: DensityState, hamiltonian: np.ndarray, duration: float) -> DensityState:
    """U rho U^dagger with U = exp(-i H t) via Hermitian eigendecomposition."""
    u = _propagator(hamiltonian, duration)
    return DensityState(u @ state.matrix @ u.conj().T)


def _pi_pulse_operator(sys: QuantumSystem) -> np.ndarray:
    return _kron_all([_SI] * sys.m_nuclear + [_SX] * sys.l_probe)


def pi_pulse_probes(state: DensityState, sys: QuantumSystem) -> DensityState:
    """Conjugate by sigma_x on every probe qubit (an involution)."""
    x = _pi_pulse_operator(sys)
    return DensityState(x @ state.matrix @ x.conj().T)


# Initial states -----------------------------------------------------------------

def _nuclear_block(m_nuclear: int, nuclear_state) -> np.ndarray:
    """Nuclear density block: 'mixed', '|+...+>', '|-...->', or an explicit
    2^M x 2^M density matrix."""
    dim = 2**m_nuclear
    if isinstance(nuclear_state, np.ndarray):
        block = np.asarray(nuclear_state, dtype=complex)
        if block.shape != (dim, dim):
            raise ValueError(f"nuclear density block must be {dim}x{dim}")
        return block
    if nuclear_state == "mixed":
        return np.eye(dim, dtype=complex) / dim
    if nuclear_state not in ("plus", "minus"):
        raise ValueError(f"unknown nuclear_state {nuclear_state!r}")
    sign = 1.0 if nuclear_state == "plus" else -1.0
    single = np.array([1.0, sign], dtype=complex) / np.sqrt(2.0)
    vec = _kron_all([single.reshape(2, 1)] * m_nuclear).ravel() if m_nuclear > 1 else single
    return np.outer(vec, vec.conj())


def _plus_probe_block(l_probe: int) -> np.ndarray:
    vec = np.full(2**l_probe, 2.0 ** (-0.5 * l_probe), dtype=complex)
    return np.outer(vec, vec.conj())


def ghz_vector(l_probe: int) -> np.ndarray:
    """(|0...0> + |1...1>)/sqrt(2) on ``l_probe`` qubits."""
    if l_probe < 1:
        raise ValueError("need at least one probe")
    vec = np.zeros(2**l_probe, dtype=complex)
    vec[0] = vec[-1] = 2.0 ** -0.5
    return vec


def initial_dd_state(sys: QuantumSystem,
                     nuclear_state: NuclearState | np.ndarray = "mixed") -> DensityState:
    """Mixed (or |+/->) nuclei tensored with |+>^L probes."""
    return DensityState(np.kron(_nuclear_block(sys.m_nuclear, nuclear_state),
                                _plus_probe_block(sys.l_probe)))


def initial_ghz_state(sys: QuantumSystem,
                      nuclear_state: NuclearState | np.ndarray = "mixed") -> DensityState:
    """Mixed (or |+/->) nuclei tensored with the probe GHZ state."""
    ghz = ghz_vector(sys.l_probe)
    return DensityState(np.kron(_nuclear_block(sys.m_nuclear, nuclear_state),
                                np.outer(ghz, ghz.conj())))


# Dephasing ------------------------------------------------------------------------

def apply_dephasing_channel(state: DensityState, channel: DephasingChannel,
                            qubits: Sequence[int]) -> DensityState:
    """Apply the single-qubit dephasing map independently to each listed qubit."""
    n = int(np.log2(state.matrix.shape[0]))
    f = channel.attenuation
    rho = state.matrix
    for q in qubits:
        z = _op_on(_SZ, q, n)
        rho = 0.5 * (1.0 + f) * rho + 0.5 * (1.0 - f) * (z @ rho @ z)
    return DensityState(rho)


def dephased_ghz_observable(l_probe: int, t: float, t2: float) -> np.ndarray:
    """The GHZ projector after dephasing: coherence scaled by exp(-L (t/T2)^3)."""
    if l_probe < 1:
        raise ValueError("need at least one probe")
    dim = 2**l_probe
    obs = np.zeros((dim, dim), dtype=complex)
    obs[0, 0] = obs[-1, -1] = 0.5
    coherence = 0.5 * np.exp(-l_probe * (t / t2) ** 3)
    obs[0, -1] = obs[-1, 0] = coherence
    return obs


# Protocols ------------------------------------------------------------------------

def _check_match(sys: QuantumSystem, params: ProtocolParams) -> None:
    if abs(sys.omega_target - params.omega_target) > 1e-12 * params.omega_target:
        raise ValueError("params.omega_target differs from the system's")
    if abs(sys.coupling_g - params.coupling_g) > 1e-12 * max(abs(params.coupling_g), 1e-300):
        raise ValueError("params.coupling_g differs from the system's")


def run_dd_protocol(sys: QuantumSystem, params: ProtocolParams,
                    noiseless: bool = True,
                    nuclear_state: NuclearState | np.ndarray = "mixed",
                    noise_mode: NoiseMode = "attenuation",
                    validate_states: bool = False) -> float:
    """Execute the decoupling protocol and return <M_x> over the probes.

    [evolve tau, pi-pulse] is applied n_dd + 1 times from the mixed-nuclei,
    |+>^L initial state.  With ``noiseless=False`` the normative mode
    multiplies the noiseless expectation by exp(-(t/T2_DD)^3); the
    ``per_step_channel`` mode instead interleaves the bare-T2_echo channel
    after every interval (qualitative comparison only).
    """
    _check_match(sys, params)
    state = initial_dd_state(sys, nuclear_state)
    u = _propagator(sys.hamiltonian, params.tau)
    x = _pi_pulse_operator(sys)
    channel = DephasingChannel(params.tau, params.t2_echo)
    probe_qubits = range(sys.m_nuclear, sys.n_qubits)
    rho = state.matrix
    for _ in range(params.n_dd + 1):
        rho = u @ rho @ u.conj().T
        if not noiseless and noise_mode == "per_step_channel":
            rho = apply_dephasing_channel(DensityState(rho), channel,
                                          probe_qubits).matrix
        rho = x @ rho @ x.conj().T
        if validate_states:
            DensityState(rho).validate()
    mx = sum(_op_on(_SX, q, sys.n_qubits) for q in probe_qubits)
    value = float(np.real(np.trace(rho @ mx)))
    if not noiseless and noise_mode == "attenuation":
        value *= np.exp(-((params.interaction_time / params.t2_dd) ** 3))
    return value


def run_ghz_protocol(sys: QuantumSystem, params: ProtocolParams,
                     noiseless: bool = True,
                     nuclear_state: NuclearState | np.ndarray = "mixed",
                     noise_mode: NoiseMode = "attenuation",
                     validate_states: bool = False) -> float:
    """Execute the entangled echo and return the GHZ survival probability.

    [evolve tau, pi-pulse] twice from the mixed-nuclei, GHZ-probe initial
    state; the noisy readout uses the dephased GHZ observable (coherence
    exp(-L (2 tau / T2_echo)^3)), which is the exact Hermitian-map treatment.
    """
    _check_match(sys, params)
    if params.n_dd != 1:
        raise ValueError("the entangled protocol is the n_dd = 1 spin echo")
    state = initial_ghz_state(sys, nuclear_state)
    u = _propagator(sys.hamiltonian, params.tau)
    x = _pi_pulse_operator(sys)
    channel = DephasingChannel(params.tau, params.t2_echo)
    probe_qubits = range(sys.m_nuclear, sys.n_qubits)
    rho = state.matrix
    for _ in range(2):
        rho = u @ rho @ u.conj().T
        if not noiseless and noise_mode == "per_step_channel":
            rho = apply_dephasing_channel(DensityState(rho), channel,
                                          probe_qubits).matrix
        rho = x @ rho @ x.conj().T
        if validate_states:
            DensityState(rho).validate()
    if noiseless or noise_mode == "per_step_channel":
        ghz = ghz_vector(sys.l_probe)
        obs = np.outer(ghz, ghz.conj())
    else:
        obs = dephased_ghz_observable(sys.l_probe, 2.0 * params.tau, params.t2_echo)
    full_obs = np.kron(np.eye(2**sys.m_nuclear, dtype=complex), obs)
    return float(np.real(np.trace(rho @ full_obs)))


# Perturbation identity --------------------------------------------------------------

def _gauss_nodes(order: int, upper: float):
    x, w = leggauss(order)
    return 0.5 * upper * (x + 1.0), 0.5 * upper * w


def _expansion(a: np.ndarray, b: np.ndarray, eps: float, tau: float,
               order: int) -> np.ndarray:
    wa, va = np.linalg.eigh(a)

    def conjugated(lam: float) -> np.ndarray:
        phase = (va * np.exp(1j * wa * lam)) @ va.conj().T
        return phase @ b @ phase.conj().T

    lam, wl = _gauss_nodes(order, tau)
    f_plus = [conjugated(l) for l in lam]
    f_minus = [conjugated(-l) for l in lam]
    i1 = sum(w * (fp - fm) for w, fp, fm in zip(wl, f_plus, f_minus))
    i2_ordered = np.zeros_like(a, dtype=complex)
    for l, w, fp_l, fm_l in zip(lam, wl, f_plus, f_minus):
        xi, wx = _gauss_nodes(order, l)
        inner = sum(wj * (fp_l @ conjugated(x) + conjugated(-x) @ fm_l)
                    for x, wj in zip(xi, wx))
        i2_ordered += w * inner
    int_plus = sum(w * fp for w, fp in zip(wl, f_plus))
    int_minus = sum(w * fm for w, fm in zip(wl, f_minus))
    i2_cross = int_plus @ int_minus
    free = (va * np.exp(-1j * wa * tau)) @ va.conj().T
    bracket = (np.eye(len(a), dtype=complex) + 1j * eps * i1
               - eps**2 * i2_ordered + eps**2 * i2_cross)
    return free @ bracket @ free


def perturbation_defect(a: np.ndarray, b: np.ndarray, eps: float, tau: float) -> float:
    """Operator-norm gap between exp(-i(A-eB)t) exp(-i(A+eB)t) and its
    second-order interaction-picture expansion.

    The time-ordered integrals are evaluated by Gauss-Legendre panels whose
    order is doubled until the expansion changes by less than 1e-12.  The gap
    scales as eps^3 (the expansion is exact for commuting A, B).
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape or a.ndim != 2 or a.shape[0] > 16:
        raise ValueError("A and B must be equal-shape Hermitian with dim <= 16")
    order = 8
    expansion = _expansion(a, b, eps, tau, order)
    while order < 256:
        refined = _expansion(a, b, eps, tau, 2 * order)
        if np.linalg.norm(refined - expansion, 2) < 1e-12:
            expansion = refined
            break
        expansion = refined
        order *= 2
    w1, v1 = np.linalg.eigh(a - eps * b)
    w2, v2 = np.linalg.eigh(a + eps * b)
    exact = ((v1 * np.exp(-1j * w1 * tau)) @ v1.conj().T
             @ (v2 * np.exp(-1j * w2 * tau)) @ v2.conj().T)
    return float(np.linalg.norm(exact - expansion, 2))
