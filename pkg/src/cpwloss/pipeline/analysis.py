"""Full analysis run: resonance fits, TLS fit, budgets, theory tracks.

Stage order per resonator:

1. fit every ingested trace (notch circle fit),
2. calibrate the mean photon number of each point,
3. fit the TLS law on the lowest-temperature power sweep,
4. at each temperature pick the point closest to the single-photon
   regime (minimal |log10 n_ph|) and split its loss budget,
5. convert the quasiparticle loss excess into a measured density and
   compute the theory tracks (surface-impedance internal loss, its
   equivalent density, the thermal density, conductivity ratios).

Per-stage failures are recorded in the report and the remaining
resonators continue; only an empty input is fatal.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .. import __version__ as _tool_version
from ..lossmodel import (
    TlsParams,
    budget_at,
    delta_i_theory,
    fit_tls_power_sweep,
    nqp_from_delta,
)
from ..mbcore import complex_conductivity, nqp_thermal, surface_impedance
from ..resfit import NoDipError, classify_regime, fit_resonance, photon_number
from .config import RunConfig
from .ingest import IngestResult, ingest

SCHEMA_VERSION = 1


@dataclass
class ResonancePoint:
    temperature_k: float
    power_dbm: float
    n_ph: float
    f_r_hz: float
    q_l: float
    q_c_abs: float
    phi0_rad: float
    q_i: float
    converged: bool


@dataclass
class TlsSummary:
    inv_q_tls0: float
    n_c: float
    beta: float
    delta_floor: float
    temperature_k: float
    converged: bool
    residual_norm: float


@dataclass
class BudgetPoint:
    temperature_k: float
    power_dbm: float
    n_ph: float
    delta_total: float
    delta_tls: float
    delta_qp: float
    delta_other: float
    clamped: bool


@dataclass
class DensityPoint:
    temperature_k: float
    nqp_measured_per_um3: float
    nqp_theory_per_um3: float
    nqp_thermal_per_um3: float


@dataclass
class TheoryPoint:
    temperature_k: float
    sigma1_over_sigman: float
    sigma2_over_sigman: float
    rs_ohm: float
    ls_h: float
    delta_i_theory: float
    q_i_theory: float


@dataclass
class QiComparisonPoint:
    temperature_k: float
    q_i_measured: float
    q_i_theory: float


@dataclass
class RegimePoint:
    temperature_k: float
    q_l: float
    q_c_abs: float
    q_i: float
    regime: str


@dataclass
class ResonatorReport:
    resonator_id: str
    material: str
    alpha: float
    f_r_config_hz: float
    resonances: List[ResonancePoint] = field(default_factory=list)
    tls: Optional[TlsSummary] = None
    budgets: List[BudgetPoint] = field(default_factory=list)
    densities: List[DensityPoint] = field(default_factory=list)
    theory: List[TheoryPoint] = field(default_factory=list)
    qi_comparison: List[QiComparisonPoint] = field(default_factory=list)
    regimes: List[RegimePoint] = field(default_factory=list)
    errors: List[str] = field(default_factory=list)


@dataclass
class Report:
    schema_version: int
    tool_version: str
    config_hash: str
    reference_plane_attenuation_db: float
    notes: List[str] = field(default_factory=list)
    rejected_files: List[Tuple[str, str]] = field(default_factory=list)
    errors: List[str] = field(default_factory=list)
    resonators: Dict[str, ResonatorReport] = field(default_factory=dict)

    @property
    def partial(self) -> bool:
        if self.rejected_files or self.errors:
            return True
        return any(r.errors for r in self.resonators.values())


def _fit_all_traces(records, report: ResonatorReport) -> List[Tuple[object, object]]:
    fitted = []
    for record in records:
        try:
            fit = fit_resonance(record)
        except (NoDipError, ValueError) as exc:
            report.errors.append(
                f"trace at T={record.temperature_k} K, "
                f"P={record.applied_power_dbm} dBm: {exc}"
            )
            continue
        n_ph = photon_number(fit, record.applied_power_dbm)
        report.resonances.append(ResonancePoint(
            temperature_k=record.temperature_k,
            power_dbm=record.applied_power_dbm,
            n_ph=n_ph,
            f_r_hz=fit.f_r_hz,
            q_l=fit.q_l,
            q_c_abs=fit.q_c_abs,
            phi0_rad=fit.phi0,
            q_i=fit.q_i,
            converged=bool(fit.fit.converged) if fit.fit else False,
        ))
        fitted.append((record, fit))
    report.resonances.sort(key=lambda p: (p.temperature_k, p.power_dbm))
    return fitted


def _fit_tls_stage(config: RunConfig, report: ResonatorReport) -> Optional[TlsSummary]:
    t_min = min(p.temperature_k for p in report.resonances)
    sweep = [p for p in report.resonances if p.temperature_k == t_min]
    points = sorted((p.n_ph, 1.0 / p.q_i) for p in sweep if math.isfinite(p.q_i))
    res = config.resonators[report.resonator_id]
    try:
        tls_fit = fit_tls_power_sweep(points, t_min, res.f_r_hz,
                                      beta_bounds=config.fit.beta_bounds)
    except ValueError as exc:
        report.errors.append(f"TLS fit on the {t_min} K sweep failed: {exc}")
        return None
    summary = TlsSummary(
        inv_q_tls0=tls_fit.params.inv_q_tls0,
        n_c=tls_fit.params.n_c,
        beta=tls_fit.params.beta,
        delta_floor=tls_fit.delta_floor,
        temperature_k=t_min,
        converged=tls_fit.fit.converged,
        residual_norm=tls_fit.fit.residual_norm,
    )
    report.tls = summary
    return summary


def _single_photon_points(report: ResonatorReport) -> List[ResonancePoint]:
    chosen: Dict[float, ResonancePoint] = {}
    for point in report.resonances:
        if point.n_ph <= 0.0 or not math.isfinite(point.q_i):
            continue
        key = point.temperature_k
        existing = chosen.get(key)
        if existing is None or abs(math.log10(point.n_ph)) < abs(math.log10(existing.n_ph)):
            chosen[key] = point
    return [chosen[t] for t in sorted(chosen)]


def analyze_resonator(config: RunConfig, resonator_id: str, records) -> ResonatorReport:
    res = config.resonators[resonator_id]
    report = ResonatorReport(
        resonator_id=resonator_id,
        material=res.material.name,
        alpha=res.alpha,
        f_r_config_hz=res.f_r_hz,
    )
    fitted = _fit_all_traces(records, report)
    if not fitted:
        report.errors.append("no trace could be fitted")
        return report

    tls_summary = _fit_tls_stage(config, report)
    budget_points = _single_photon_points(report)

    if tls_summary is not None:
        tls = TlsParams(inv_q_tls0=tls_summary.inv_q_tls0,
                        n_c=tls_summary.n_c, beta=tls_summary.beta)
        for point in budget_points:
            budget = budget_at(res, tls, point.temperature_k, point.n_ph,
                               1.0 / point.q_i)
            if budget.clamped and config.fit.clamp_policy == "strict":
                report.errors.append(
                    f"clamped budget at T={point.temperature_k} K dropped "
                    "(clamp_policy=strict)"
                )
                continue
            report.budgets.append(BudgetPoint(
                temperature_k=point.temperature_k,
                power_dbm=point.power_dbm,
                n_ph=point.n_ph,
                delta_total=budget.delta_total,
                delta_tls=budget.delta_tls,
                delta_qp=budget.delta_qp,
                delta_other=budget.delta_other,
                clamped=budget.clamped,
            ))

    for budget in report.budgets:
        t = budget.temperature_k
        try:
            measured = nqp_from_delta(budget.delta_qp, res, t)
            theory = nqp_from_delta(delta_i_theory(res, t), res, t)
            thermal = nqp_thermal(res.material, t)
        except ValueError as exc:
            report.errors.append(f"density track at T={t} K failed: {exc}")
            continue
        report.densities.append(DensityPoint(
            temperature_k=t,
            nqp_measured_per_um3=measured,
            nqp_theory_per_um3=theory,
            nqp_thermal_per_um3=thermal,
        ))

    for t in sorted({p.temperature_k for p in report.resonances}):
        try:
            cond = complex_conductivity(res.material, t, res.f_r_hz)
            zs = surface_impedance(res.material, t, res.f_r_hz)
            d_i = delta_i_theory(res, t)
        except ValueError as exc:
            report.errors.append(f"theory track at T={t} K failed: {exc}")
            continue
        report.theory.append(TheoryPoint(
            temperature_k=t,
            sigma1_over_sigman=cond.sigma1_over_sigman,
            sigma2_over_sigman=cond.sigma2_over_sigman,
            rs_ohm=zs.rs_ohm,
            ls_h=zs.ls_h,
            delta_i_theory=d_i,
            q_i_theory=1.0 / d_i if d_i > 0.0 else math.inf,
        ))

    theory_by_t = {p.temperature_k: p for p in report.theory}
    for point in budget_points:
        theory_point = theory_by_t.get(point.temperature_k)
        if theory_point is None:
            continue
        report.qi_comparison.append(QiComparisonPoint(
            temperature_k=point.temperature_k,
            q_i_measured=point.q_i,
            q_i_theory=theory_point.q_i_theory,
        ))

    if len(budget_points) >= 2:
        pseudo_fits = [(p.temperature_k, _RegimeView(p)) for p in budget_points]
        for (t, regime), point in zip(
            classify_regime(pseudo_fits, threshold=config.fit.regime_threshold),
            budget_points,
        ):
            report.regimes.append(RegimePoint(
                temperature_k=t,
                q_l=point.q_l,
                q_c_abs=point.q_c_abs,
                q_i=point.q_i,
                regime=regime.value,
            ))
    return report


class _RegimeView:
    """Adapter exposing the q_i / q_c_abs attributes classify_regime reads."""

    def __init__(self, point: ResonancePoint):
        self.q_i = point.q_i
        self.q_c_abs = point.q_c_abs


def run_analysis(config: RunConfig, ingested: Optional[IngestResult] = None) -> Report:
    """Run the full chain; raises ValueError only when nothing is usable."""
    if ingested is None:
        if not config.io.input_dir:
            raise ValueError("config.io.input_dir is empty and no records given")
        ingested = ingest([config.io.input_dir],
                          attenuation_db=config.reference_plane_attenuation_db)

    report = Report(
        schema_version=SCHEMA_VERSION,
        tool_version=_tool_version,
        config_hash=config.canonical_hash(),
        reference_plane_attenuation_db=config.reference_plane_attenuation_db,
        rejected_files=list(ingested.rejected),
    )
    report.notes.append(
        "single-photon selection: per temperature, the measured power point "
        "with minimal |log10(n_ph)|"
    )
    report.notes.append(
        "TLS subtraction uses the power-sweep law evaluated at each budget "
        "point's own (T, n_ph)"
    )

    groups: Dict[str, list] = {}
    for record in ingested.records:
        groups.setdefault(record.resonator_id, []).append(record)
    if not groups:
        raise ValueError("no ingestible traces found")

    for resonator_id in sorted(groups):
        if resonator_id not in config.resonators:
            report.errors.append(
                f"traces for unknown resonator {resonator_id!r} skipped "
                "(no [resonator:...] config)"
            )
            continue
        try:
            report.resonators[resonator_id] = analyze_resonator(
                config, resonator_id, groups[resonator_id]
            )
        except Exception as exc:  # keep the batch alive for the others
            report.errors.append(f"resonator {resonator_id!r} analysis failed: {exc}")
    if not report.resonators:
        raise ValueError("no configured resonator had any ingestible trace")
    return report
