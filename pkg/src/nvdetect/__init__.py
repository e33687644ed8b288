"""Detection-time models for nanoscale NMR with separable and GHZ-entangled
NV-center probe ensembles: closed-form observables, geometric factors with a
quadrature oracle, protocol optimization, and an exact dense simulator."""

from .cli import detect_time_csv
from .config import ScenarioConfig, SweepSpec, load_config
from .core import (EnsembleGeometry, NV1, NV2, NV3, NVPreset, PRESETS,
                   PhysicalScenario, SpinSite, coupling_constant,
                   coupling_from_gammas, dipole_coefficients, probe_count,
                   rho_from_cm3, sample_probe_sites)
from .geomfactors import (GeometricFactorResult, f_ent_closed, f_sep_closed,
                          gamma_ent_continuum, gamma_ent_discrete,
                          gamma_sep_continuum, gamma_sep_discrete,
                          quadrature_ent, quadrature_sep)
from .optimize import (ConstantsDerivation, OptimizationOutcome,
                       derive_constants, minimize_geometry, minimize_scalar)
from .oracle import (DensityState, DephasingChannel, QuantumSystem,
                     apply_dephasing_channel, build_effective_hamiltonian,
                     dephased_ghz_observable, evolve, perturbation_defect,
                     pi_pulse_probes, run_dd_protocol, run_ghz_protocol)
from .reports import DiscrepancyEntry, DiscrepancyReport, build_validation_report
from .signals import (C_DD_PUBLISHED, C_ENT_PUBLISHED, DetectionResult,
                      ProtocolParams, dirichlet_ratio, expectation_mx, f_dd,
                      f_ent, p_ghz, snr_dd, snr_ghz, t2_dd, t_detect_dd_published,
                      t_detect_dd_raw, t_detect_ent_published, t_detect_ent_raw,
                      t_detect_ratio, variance_mx)

__version__ = "0.1.0"
