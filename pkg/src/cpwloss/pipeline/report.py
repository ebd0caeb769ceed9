"""Report emission: schema-versioned JSON, per-figure CSV tables, text summary.

Output is deterministic: no timestamps, keys sorted, floats written with
``repr`` (shortest round-trip form), so re-emitting the same report is
byte-identical.  Every CSV column name carries its unit.
"""

import dataclasses
import json
import os
from typing import Iterable, List, Sequence

from .analysis import Report, ResonatorReport

CSV_FORMATS = ("csv", "structured", "both")


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("\n".join(lines) + "\n")


def _figure_tables(r: ResonatorReport) -> dict:
    """Per-figure-equivalent flat tables, all sorted by temperature."""
    t_min = min((p.temperature_k for p in r.resonances), default=None)
    tables = {
        "resonance_fits": (
            ("temperature_k", "power_dbm", "n_ph", "f_r_hz", "q_l", "q_c_abs",
             "phi0_rad", "q_i", "converged"),
            [(p.temperature_k, p.power_dbm, p.n_ph, p.f_r_hz, p.q_l,
              p.q_c_abs, p.phi0_rad, p.q_i, p.converged)
             for p in r.resonances],
        ),
        "qi_vs_photon_number": (
            ("temperature_k", "power_dbm", "n_ph", "q_i"),
            [(p.temperature_k, p.power_dbm, p.n_ph, p.q_i)
             for p in r.resonances if p.temperature_k == t_min],
        ),
        # single-photon track, from the budget points
        "qi_vs_temperature": (
            ("temperature_k", "n_ph", "q_i"),
            [(b.temperature_k, b.n_ph, 1.0 / b.delta_total) for b in r.budgets],
        ),
    }
    tables["ql_vs_temperature"] = (
        ("temperature_k", "q_l"),
        [(p.temperature_k, p.q_l) for p in r.regimes],
    )
    tables["qc_vs_temperature"] = (
        ("temperature_k", "q_c_abs"),
        [(p.temperature_k, p.q_c_abs) for p in r.regimes],
    )
    tables["sigma1_vs_temperature"] = (
        ("temperature_k", "sigma1_over_sigman"),
        [(p.temperature_k, p.sigma1_over_sigman) for p in r.theory],
    )
    tables["sigma2_vs_temperature"] = (
        ("temperature_k", "sigma2_over_sigman"),
        [(p.temperature_k, p.sigma2_over_sigman) for p in r.theory],
    )
    tables["qi_measured_vs_theory"] = (
        ("temperature_k", "q_i_measured", "q_i_theory"),
        [(p.temperature_k, p.q_i_measured, p.q_i_theory) for p in r.qi_comparison],
    )
    tables["nqp_vs_temperature"] = (
        ("temperature_k", "nqp_measured_per_um3", "nqp_theory_per_um3",
         "nqp_thermal_per_um3"),
        [(p.temperature_k, p.nqp_measured_per_um3, p.nqp_theory_per_um3,
          p.nqp_thermal_per_um3) for p in r.densities],
    )
    dens_by_t = {p.temperature_k: p for p in r.densities}
    sigma_nqp_rows = []
    for p in r.theory:
        d = dens_by_t.get(p.temperature_k)
        if d is None:
            continue
        sigma_nqp_rows.append((p.temperature_k, d.nqp_thermal_per_um3,
                               d.nqp_measured_per_um3,
                               p.sigma1_over_sigman, p.sigma2_over_sigman))
    tables["sigma1_vs_nqp"] = (
        ("temperature_k", "nqp_thermal_per_um3", "nqp_measured_per_um3",
         "sigma1_over_sigman"),
        [row[:3] + (row[3],) for row in sigma_nqp_rows],
    )
    tables["sigma2_vs_nqp"] = (
        ("temperature_k", "nqp_thermal_per_um3", "nqp_measured_per_um3",
         "sigma2_over_sigman"),
        [row[:3] + (row[4],) for row in sigma_nqp_rows],
    )
    return tables


def report_to_dict(report: Report) -> dict:
    """Plain-dict form of the report (the structured schema)."""
    return dataclasses.asdict(report)


def render_summary(report: Report) -> str:
    lines: List[str] = []
    lines.append(f"analysis report (schema v{report.schema_version}, "
                 f"tool {report.tool_version})")
    lines.append(f"config hash: {report.config_hash}")
    lines.append(f"reference plane attenuation: "
                 f"{report.reference_plane_attenuation_db} dB")
    if report.rejected_files:
        lines.append(f"rejected files: {len(report.rejected_files)}")
        for path, reason in report.rejected_files:
            lines.append(f"  - {os.path.basename(path)}: {reason}")
    for err in report.errors:
        lines.append(f"error: {err}")
    for name in sorted(report.resonators):
        r = report.resonators[name]
        lines.append("")
        lines.append(f"resonator {name} ({r.material}, alpha={r.alpha})")
        lines.append(f"  traces fitted: {len(r.resonances)}")
        if r.tls is not None:
            lines.append(
                f"  TLS fit at {r.tls.temperature_k} K: "
                f"1/Q_TLS0={r.tls.inv_q_tls0:.4e}, n_c={r.tls.n_c:.4g}, "
                f"beta={r.tls.beta:.4g}, floor={r.tls.delta_floor:.4e}"
            )
        clamped = sum(1 for b in r.budgets if b.clamped)
        if r.budgets:
            lines.append(f"  loss budgets at n_ph~1: {len(r.budgets)}"
                         + (f" ({clamped} clamped)" if clamped else ""))
        for d in r.densities:
            lines.append(
                f"    T={d.temperature_k:g} K: n_qp measured="
                f"{d.nqp_measured_per_um3:.4g} /um^3, theory="
                f"{d.nqp_theory_per_um3:.4g}, thermal="
                f"{d.nqp_thermal_per_um3:.4g}"
            )
        for p in r.regimes:
            lines.append(f"    T={p.temperature_k:g} K: {p.regime} "
                         f"(Q_i={p.q_i:.4g}, Q_c={p.q_c_abs:.4g})")
        for err in r.errors:
            lines.append(f"  error: {err}")
    for note in report.notes:
        lines.append(f"note: {note}")
    return "\n".join(lines) + "\n"


def emit(report: Report, out_dir: str, formats: str = "both") -> List[str]:
    """Write the report under ``out_dir``; returns the written paths."""
    if formats not in CSV_FORMATS:
        raise ValueError(f"formats must be one of {CSV_FORMATS}")
    os.makedirs(out_dir, exist_ok=True)
    written: List[str] = []

    if formats in ("structured", "both"):
        path = os.path.join(out_dir, "report.json")
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(report_to_dict(report), handle, indent=2, sort_keys=True,
                      allow_nan=True)
            handle.write("\n")
        written.append(path)

    if formats in ("csv", "both"):
        for name in sorted(report.resonators):
            tables = _figure_tables(report.resonators[name])
            for table_name in sorted(tables):
                header, rows = tables[table_name]
                path = os.path.join(out_dir, f"{name}__{table_name}.csv")
                _write_csv(path, header, rows)
                written.append(path)

    path = os.path.join(out_dir, "summary.txt")
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(render_summary(report))
    written.append(path)
    return written
