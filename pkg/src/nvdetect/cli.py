"""Command-line interface.

Subcommands:

* ``detect-time``       sweep z_min and emit a CSV of detection times
* ``validate``          run the validation suite; exit 0 iff all normative
                        checks pass
* ``optimize-geometry`` re-derive the optimal dimensionless geometry
* ``constants``         published vs re-derived detection-time prefactors

Exit codes: 0 success, 1 validation failure, 2 configuration error.
All CSV floats are written with shortest round-trip representation so output
is byte-identical across runs for the same configuration.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import replace

from .config import ScenarioConfig, load_config
from .core import EnsembleGeometry
from .errors import ConfigError
from .optimize import derive_constants, minimize_geometry
from .reports import build_validation_report
from .signals import t_detect_dd_published, t_detect_ent_published

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CONFIG = 2


def _fmt(x: float) -> str:
    return repr(float(x))


def detect_time_csv(cfg: ScenarioConfig) -> str:
    """Render the z_min sweep as CSV text (deterministic byte-for-byte)."""
    scenario = cfg.scenario()
    lines = [
        "# nvdetect detect-time",
        (f"# preset={cfg.preset} gamma_convention={cfg.gamma_convention} "
         f"m_nuclear={_fmt(cfg.m_nuclear)} n_dd={cfg.n_dd}"),
        (f"# t2_echo_s={_fmt(cfg.t2_echo_s)} rho_nv_per_cm3={_fmt(cfg.rho_nv_per_cm3)} "
         f"coupling_g_rad_s_m3={_fmt(scenario.coupling_G)}"),
        "z_min_m,t_detect_dd_s,t_detect_ent_s,ratio",
    ]
    for z_min in cfg.sweep.values():
        geom = EnsembleGeometry.from_dimensionless(float(z_min), 1.16, 1.29,
                                                   rho_nv=cfg.rho_nv)
        t_dd = t_detect_dd_published(scenario, geom, cfg.m_nuclear, cfg.n_dd,
                                     cfg.t2_echo_s).t_detect
        t_ent = t_detect_ent_published(scenario, geom, cfg.m_nuclear,
                                       cfg.t2_echo_s).t_detect
        lines.append(",".join([_fmt(z_min), _fmt(t_dd), _fmt(t_ent),
                               _fmt(t_dd / t_ent)]))
    return "\n".join(lines) + "\n"


def _cmd_detect_time(args) -> int:
    cfg = _load(args)
    csv_text = detect_time_csv(cfg)
    output = args.output or cfg.output
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(csv_text)
        print(f"wrote {output}")
    else:
        sys.stdout.write(csv_text)
    return EXIT_OK


def _cmd_validate(args) -> int:
    start = time.perf_counter()
    report = build_validation_report(depth=args.depth)
    print(report.to_text())
    print(f"-- depth={args.depth} elapsed={time.perf_counter() - start:.1f}s")
    return EXIT_VALIDATION if report.failures else EXIT_OK


def _cmd_optimize_geometry(args) -> int:
    outcome = minimize_geometry(args.variant, f_variant=args.f_ent_variant)
    r, z = outcome.argmin
    print(f"variant={args.variant} f_variant={args.f_ent_variant}")
    print(f"argmin r_tilde={r:.6f} z_tilde={z:.6f}")
    print(f"objective={outcome.min_value:.10g} converged={outcome.converged} "
          f"iterations={outcome.iterations} multimodal={outcome.multimodal}")
    return EXIT_OK


def _cmd_constants(args) -> int:
    der = derive_constants()
    rs, zs = der.geometry_sep.argmin
    re_, ze = der.geometry_ent.argmin
    print(f"geometry optimum (separable): r_tilde={rs:.6f} z_tilde={zs:.6f} "
          f"J={der.geometry_sep.min_value:.8g}")
    print(f"geometry optimum (entangled): r_tilde={re_:.6f} z_tilde={ze:.6f} "
          f"J={der.geometry_ent.min_value:.8g}")
    print(f"noise-function optimum (normalized): published={der.f_norm_published:.8g}")
    print(f"  many-pulse: resonance={der.f_dd_norm_resonance:.8g} "
          f"free-tau={der.f_dd_norm_free_tau:.8g}")
    print(f"  echo:       resonance={der.f_ent_norm_resonance:.8g} "
          f"free-tau={der.f_ent_norm_free_tau:.8g} "
          "(echo optimum sits below resonance; published constants use resonance)")
    print(f"c_dd:  published={der.c_dd_published}  rederived={der.c_dd_rederived:.6g}  "
          f"rel_deviation={der.c_dd_rel_deviation:.4g}")
    print(f"c_ent: published={der.c_ent_published}  rederived={der.c_ent_rederived:.6g}  "
          f"rel_deviation={der.c_ent_rel_deviation:.4g}")
    two_pi_4 = (2 * 3.141592653589793) ** 4
    print(f"rederived/(2pi)^4: c_dd={der.c_dd_rederived / two_pi_4:.6g} "
          f"c_ent={der.c_ent_rederived / two_pi_4:.6g} "
          "(published constants absorb one 2pi per power of the coupling)")
    print(f"parameter-invariance rel dev: {der.parameter_invariance_rel_dev:.3g}")
    return EXIT_OK


def _load(args) -> ScenarioConfig:
    cfg = load_config(args.config) if args.config else ScenarioConfig()
    if getattr(args, "gamma_convention", None):
        cfg = replace(cfg, gamma_convention=args.gamma_convention)
    return cfg


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nvdetect",
        description="Detection-time models for nanoscale NMR with separable "
                    "and entangled NV-center probes.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_detect = sub.add_parser("detect-time", help="z_min sweep of detection times")
    p_detect.add_argument("--config", help="JSON config path")
    p_detect.add_argument("--output", help="CSV output path (default: stdout)")
    p_detect.add_argument("--gamma-convention", choices=["angular", "cyclic"],
                          help="override the coupling convention")
    p_detect.set_defaults(func=_cmd_detect_time)

    p_val = sub.add_parser("validate", help="run the validation suite")
    p_val.add_argument("--depth", choices=["fast", "full"], default="fast")
    p_val.set_defaults(func=_cmd_validate)

    p_geo = sub.add_parser("optimize-geometry",
                           help="re-derive the optimal probe-region shape")
    p_geo.add_argument("variant", choices=["sep", "ent"])
    p_geo.add_argument("--f-ent-variant", choices=["printed", "corrected"],
                       default="corrected")
    p_geo.set_defaults(func=_cmd_optimize_geometry)

    p_const = sub.add_parser("constants",
                             help="published vs re-derived detection prefactors")
    p_const.set_defaults(func=_cmd_constants)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
