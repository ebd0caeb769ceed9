"""Command-line interface.

Subcommands:

* ``mb-table``  conductivity ratios, thermal density, surface impedance
  over a temperature grid for a named material
* ``fit-s21``   fit one trace file, print the fit as JSON
* ``fit-tls``   fit the TLS law to a (n_ph, 1/Q_i) power-sweep CSV
* ``analyze``   full pipeline run over a directory of traces
* ``synth``     generate a synthetic dataset from the [synth] scenario
* ``compare``   thermal quasiparticle density ratio of two materials on
  an equal T/Tc grid

Exit codes: 0 success, 1 partial (some traces rejected or stages
failed), 2 fatal.
"""

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from .lossmodel import fit_tls_power_sweep
from .mbcore import nqp_thermal, nqp_thermal_ln, complex_conductivity, surface_impedance
from .pipeline import (
    ConfigError,
    IngestError,
    emit,
    ingest,
    load_config,
    read_trace_csv,
    read_trace_touchstone,
    render_summary,
    run_analysis,
)
from .synth import generate_sweeps, write_dataset

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_FATAL = 2


def _open_out(path):
    return open(path, "w", encoding="utf-8") if path else sys.stdout


def _write_rows(out_path, header, rows):
    with _open_out(out_path) as handle:
        handle.write(",".join(header) + "\n")
        for row in rows:
            handle.write(",".join(repr(float(v)) for v in row) + "\n")


def cmd_mb_table(args) -> int:
    config = load_config(args.config)
    material = config.materials.get(args.material)
    if material is None:
        print(f"unknown material {args.material!r}", file=sys.stderr)
        return EXIT_FATAL
    temps = np.linspace(args.tmin_k, args.tmax_k, args.points)
    rows = []
    for t in temps:
        cond = complex_conductivity(material, t, args.f_hz)
        zs = surface_impedance(material, t, args.f_hz)
        rows.append((t, cond.sigma1_over_sigman, cond.sigma2_over_sigman,
                     nqp_thermal(material, t), zs.rs_ohm, zs.ls_h))
    _write_rows(args.out, ("temperature_k", "sigma1_over_sigman",
                           "sigma2_over_sigman", "nqp_thermal_per_um3",
                           "rs_ohm", "ls_h"), rows)
    return EXIT_OK


def cmd_fit_s21(args) -> int:
    try:
        if args.input.lower().endswith(".s2p"):
            record = read_trace_touchstone(args.input, args.attenuation_db)
        else:
            record = read_trace_csv(args.input, args.attenuation_db)
    except IngestError as exc:
        print(f"cannot ingest {args.input}: {exc}", file=sys.stderr)
        return EXIT_FATAL
    from .resfit import NoDipError, fit_resonance, photon_number

    try:
        fit = fit_resonance(record)
    except (NoDipError, ValueError) as exc:
        print(f"fit failed: {exc}", file=sys.stderr)
        return EXIT_FATAL
    row = {
        "resonator": record.resonator_id,
        "temperature_k": record.temperature_k,
        "power_dbm": record.applied_power_dbm,
        "f_r_hz": fit.f_r_hz,
        "q_l": fit.q_l,
        "q_c_abs": fit.q_c_abs,
        "phi0_rad": fit.phi0,
        "q_i": fit.q_i,
        "n_ph": photon_number(fit, record.applied_power_dbm),
        "background_amplitude": fit.background.amplitude,
        "background_phase_rad": fit.background.phase_offset,
        "electrical_delay_s": fit.background.electrical_delay,
        "converged": bool(fit.fit.converged),
        "residual_norm": fit.fit.residual_norm,
    }
    with _open_out(args.out) as handle:
        json.dump(row, handle, indent=2, sort_keys=True)
        handle.write("\n")
    return EXIT_OK if row["converged"] else EXIT_PARTIAL


def cmd_fit_tls(args) -> int:
    points = []
    with open(args.input, "r", encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            low = line.lower().replace(" ", "")
            if low.startswith("n_ph"):
                continue
            n_ph, inv_qi = (float(tok) for tok in line.split(",")[:2])
            points.append((n_ph, inv_qi))
    try:
        result = fit_tls_power_sweep(points, args.temperature_k, args.f_hz,
                                     beta_bounds=(args.beta_min, args.beta_max))
    except ValueError as exc:
        print(f"TLS fit failed: {exc}", file=sys.stderr)
        return EXIT_FATAL
    row = {
        "inv_q_tls0": result.params.inv_q_tls0,
        "n_c": result.params.n_c,
        "beta": result.params.beta,
        "delta_floor": result.delta_floor,
        "converged": bool(result.fit.converged),
        "residual_norm": result.fit.residual_norm,
    }
    with _open_out(args.out) as handle:
        json.dump(row, handle, indent=2, sort_keys=True)
        handle.write("\n")
    return EXIT_OK if row["converged"] else EXIT_PARTIAL


def cmd_analyze(args) -> int:
    config = load_config(args.config)
    ingested = ingest(
        [args.input or config.io.input_dir],
        attenuation_db=config.reference_plane_attenuation_db,
    )
    try:
        report = run_analysis(config, ingested)
    except ValueError as exc:
        print(f"analysis failed: {exc}", file=sys.stderr)
        return EXIT_FATAL
    out_dir = args.out or config.io.output_dir
    emit(report, out_dir, formats=args.format)
    print(render_summary(report), end="")
    return EXIT_PARTIAL if report.partial else EXIT_OK


def cmd_synth(args) -> int:
    config = load_config(args.config)
    if config.scenario is None:
        print("config has no [synth] scenario", file=sys.stderr)
        return EXIT_FATAL
    scenario = config.scenario
    if args.seed is not None:
        import dataclasses

        scenario = dataclasses.replace(scenario, seed=args.seed)
    records = generate_sweeps(scenario)
    paths = write_dataset(records, args.out)
    print(f"wrote {len(paths)} traces to {args.out}")
    return EXIT_OK


def cmd_compare(args) -> int:
    config = load_config(args.config)
    missing = [m for m in (args.material_a, args.material_b)
               if m not in config.materials]
    if missing:
        print(f"unknown material(s): {missing}", file=sys.stderr)
        return EXIT_FATAL
    mat_a = config.materials[args.material_a]
    mat_b = config.materials[args.material_b]
    fractions = [float(tok) for tok in args.t_frac.split(",") if tok.strip()]
    rows = []
    for frac in fractions:
        ln_a = nqp_thermal_ln(mat_a, frac * mat_a.tc_k)
        ln_b = nqp_thermal_ln(mat_b, frac * mat_b.tc_k)
        rows.append((frac, math.exp(ln_a - ln_b)))
    with _open_out(args.out) as handle:
        handle.write("t_over_tc,nqp_ratio_a_over_b\n")
        for frac, ratio in rows:
            handle.write(f"{frac!r},{ratio!r}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cpwloss",
        description="superconducting CPW resonator microwave-loss analysis",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mb-table", help="conductivity/density/impedance table")
    p.add_argument("--config", required=True)
    p.add_argument("--material", required=True)
    p.add_argument("--f-hz", type=float, required=True)
    p.add_argument("--tmin-k", type=float, default=0.077)
    p.add_argument("--tmax-k", type=float, default=1.0)
    p.add_argument("--points", type=int, default=25)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_mb_table)

    p = sub.add_parser("fit-s21", help="fit a single trace file")
    p.add_argument("--input", required=True)
    p.add_argument("--attenuation-db", type=float, default=0.0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_fit_s21)

    p = sub.add_parser("fit-tls", help="fit the TLS law to an n_ph,inv_q_i CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--f-hz", type=float, required=True)
    p.add_argument("--temperature-k", type=float, required=True)
    p.add_argument("--beta-min", type=float, default=0.1)
    p.add_argument("--beta-max", type=float, default=2.0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_fit_tls)

    p = sub.add_parser("analyze", help="run the full analysis pipeline")
    p.add_argument("--config", required=True)
    p.add_argument("--input", default=None, help="override config input_dir")
    p.add_argument("--out", default=None, help="override config output_dir")
    p.add_argument("--format", choices=("csv", "structured", "both"),
                   default="both")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("synth", help="generate a synthetic dataset")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("compare", help="thermal density ratio at equal T/Tc")
    p.add_argument("--config", required=True)
    p.add_argument("--material-a", required=True)
    p.add_argument("--material-b", required=True)
    p.add_argument("--t-frac", default="0.005,0.01,0.02,0.05,0.1,0.2,0.25")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_FATAL
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_FATAL


if __name__ == "__main__":
    sys.exit(main())
