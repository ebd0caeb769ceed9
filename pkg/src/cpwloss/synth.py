"""Forward simulator: synthetic sweep datasets from known ground truth.

Builds complex S21 traces over a (resonator, temperature, power) grid by
composing the loss models with the notch response, so that every fitted
quantity downstream has a known generating value.  An optional constant
excess quasiparticle density emulates a non-equilibrium population: it
suppresses Q_i at low temperature where the thermal density has frozen
out, which is exactly the regime a full analysis should flag.

Randomness comes from numpy's PCG64 generator.  Each grid point draws
from its own stream, seeded by ``SeedSequence(seed, spawn_key=(res_idx,
t_idx, p_idx))``, so datasets are bit-reproducible and independent of
generation order.
"""

import math
from dataclasses import dataclass, replace
from typing import Sequence, Tuple

import numpy as np

from .constants import HBAR, dbm_to_watts
from .lossmodel import (
    ResonatorParams,
    TlsParams,
    delta_qp_from_density,
    delta_tls,
)
from .mbcore import Material, nqp_thermal, sigma2_ratio
from .resfit import Background, SweepRecord, notch_s21

FIXED_POINT_MAX_ITER = 20
FIXED_POINT_TOL = 1e-10


class FixedPointError(RuntimeError):
    """The photon-number self-consistency iteration failed to settle."""


@dataclass(frozen=True)
class SynthResonator:
    """Ground truth for one simulated resonator.

    ``resonator_id`` is stamped into every generated record so the
    analysis pipeline can match traces back to their configuration; it
    defaults to the grid position (``r0``, ``r1``, ...).
    """

    params: ResonatorParams
    tls: TlsParams
    q_c_abs: float
    phi0: float
    resonator_id: str = ""

    def __post_init__(self):
        if not self.q_c_abs > 0.0:
            raise ValueError("q_c_abs must be positive")


@dataclass(frozen=True)
class ScenarioSpec:
    """Full description of a synthetic measurement campaign.

    ``power_grid_dbm`` values are powers at the chip reference plane.
    ``snr_db`` sets the per-trace amplitude signal-to-noise of the added
    complex Gaussian noise; ``math.inf`` disables noise entirely.
    ``excess_nqp_per_um3`` adds a temperature-independent quasiparticle
    density on top of the thermal one.
    """

    material: Material
    resonators: Tuple[SynthResonator, ...]
    temperature_grid_k: Tuple[float, ...]
    power_grid_dbm: Tuple[float, ...]
    snr_db: float = math.inf
    seed: int = 0
    background: Background = Background(1.0, 0.0, 0.0)
    points_per_trace: int = 1201
    span_linewidths: float = 8.0
    excess_nqp_per_um3: float = 0.0

    def __post_init__(self):
        if len(self.resonators) == 0:
            raise ValueError("scenario needs at least one resonator")
        for syn in self.resonators:
            if syn.params.material != self.material:
                raise ValueError(
                    f"resonator {syn.resonator_id or '?'} is not made of the "
                    "scenario material"
                )
        if len(self.temperature_grid_k) == 0 or len(self.power_grid_dbm) == 0:
            raise ValueError("temperature and power grids must be non-empty")
        if math.isnan(self.snr_db):
            raise ValueError("snr_db must be a number or +inf")
        if self.points_per_trace < 50:
            raise ValueError("points_per_trace must be >= 50")
        if self.span_linewidths < 3.0:
            raise ValueError("span_linewidths must be >= 3")
        if self.excess_nqp_per_um3 < 0.0:
            raise ValueError("excess density must be non-negative")


def inject_nonequilibrium(spec: ScenarioSpec, n_x_per_um3: float) -> ScenarioSpec:
    """Add a constant excess quasiparticle density to a scenario.

    Zero leaves the scenario unchanged; positive values strictly lower
    the generated low-temperature Q_i through the quasiparticle loss
    channel.
    """
    if n_x_per_um3 < 0.0:
        raise ValueError("excess density must be non-negative")
    if n_x_per_um3 == 0.0:
        return spec
    return replace(spec, excess_nqp_per_um3=spec.excess_nqp_per_um3 + n_x_per_um3)


def _shifted_frequency(res: ResonatorParams, temperature_k: float,
                       t_ref_k: float) -> float:
    """Kinetic-inductance frequency pull relative to the coldest grid point.

    L_kin scales as 1/sigma2(T), so f_r(T) = f_r0 / sqrt(1 + alpha *
    (sigma2(T_ref)/sigma2(T) - 1)); the resonance moves down as the
    temperature rises.
    """
    if temperature_k == t_ref_k:
        return res.f_r_hz
    s2_ref = sigma2_ratio(res.material, t_ref_k, res.f_r_hz)
    s2 = sigma2_ratio(res.material, temperature_k, res.f_r_hz)
    return res.f_r_hz / math.sqrt(1.0 + res.alpha * (s2_ref / s2 - 1.0))


def _self_consistent_point(res: ResonatorParams, tls: TlsParams, q_c_abs: float,
                           phi0: float, f_r_hz: float, delta_qp: float,
                           temperature_k: float, power_dbm: float,
                           label: str) -> Tuple[float, float, float]:
    """Solve the (n_ph, Q_l) fixed point for one grid cell.

    The TLS loss depends on the photon number, which depends on Q_l,
    which depends on the loss; the loop is a contraction here and
    settles in a few iterations.
    """
    p_watts = dbm_to_watts(power_dbm)
    omega = 2.0 * math.pi * f_r_hz
    cos_phi0 = math.cos(phi0)
    n_ph = 0.0
    for _ in range(FIXED_POINT_MAX_ITER):
        inv_qi = delta_tls(tls, temperature_k, n_ph, f_r_hz) + delta_qp
        q_l = 1.0 / (inv_qi + cos_phi0 / q_c_abs)
        n_new = 2.0 * q_l ** 2 * p_watts / (q_c_abs * HBAR * omega ** 2)
        if abs(n_new - n_ph) <= FIXED_POINT_TOL * max(n_new, 1e-300):
            return n_new, q_l, inv_qi
        n_ph = n_new
    raise FixedPointError(
        f"photon-number iteration did not converge for {label} at "
        f"T={temperature_k} K, P={power_dbm} dBm"
    )


def generate_sweeps(spec: ScenarioSpec) -> list:
    """Generate SweepRecords for the whole scenario grid.

    Identical specs (same seed included) produce bit-identical records.
    """
    records = []
    t_ref = min(spec.temperature_grid_k)
    for i, syn in enumerate(spec.resonators):
        res = syn.params
        resonator_id = syn.resonator_id or f"r{i}"
        for j, temperature in enumerate(spec.temperature_grid_k):
            n_total = nqp_thermal(spec.material, temperature) + spec.excess_nqp_per_um3
            delta_qp = delta_qp_from_density(res, temperature, n_total)
            f_r = _shifted_frequency(res, temperature, t_ref)
            for k, power in enumerate(spec.power_grid_dbm):
                n_ph, q_l, _ = _self_consistent_point(
                    res, syn.tls, syn.q_c_abs, syn.phi0, f_r, delta_qp,
                    temperature, power, label=resonator_id,
                )
                span = spec.span_linewidths * f_r / q_l
                f = np.linspace(f_r - 0.5 * span, f_r + 0.5 * span,
                                spec.points_per_trace)
                z = notch_s21(f, f_r, q_l, syn.q_c_abs, syn.phi0, spec.background)
                if math.isfinite(spec.snr_db):
                    rng = np.random.default_rng(
                        np.random.SeedSequence(spec.seed, spawn_key=(i, j, k))
                    )
                    sigma = spec.background.amplitude \
                        * 10.0 ** (-spec.snr_db / 20.0) / math.sqrt(2.0)
                    z = z + sigma * (rng.standard_normal(f.size)
                                     + 1j * rng.standard_normal(f.size))
                records.append(SweepRecord(
                    frequencies_hz=f,
                    s21=z,
                    temperature_k=float(temperature),
                    applied_power_dbm=float(power),
                    resonator_id=resonator_id,
                ))
    return records


def write_sweep_csv(record: SweepRecord, path) -> None:
    """Write one trace in the ingestion CSV layout (metadata in comments)."""
    lines = [
        f"# temperature_k={record.temperature_k!r}",
        f"# power_dbm={record.applied_power_dbm!r}",
        f"# resonator={record.resonator_id}",
        "freq_hz,s21_re,s21_im",
    ]
    for f, z in zip(record.frequencies_hz, record.s21):
        lines.append(f"{float(f)!r},{float(z.real)!r},{float(z.imag)!r}")
    with open(path, "w", encoding="ascii") as handle:
        handle.write("\n".join(lines) + "\n")


def write_sweep_touchstone(record: SweepRecord, path) -> None:
    """Write one trace as a two-port Touchstone (.s2p) file, RI format.

    Only S21 carries the resonance; S11/S22 are written as matched-port
    zeros and S12 mirrors S21 (reciprocal network).
    """
    lines = [
        f"! temperature_k={record.temperature_k!r}",
        f"! power_dbm={record.applied_power_dbm!r}",
        f"! resonator={record.resonator_id}",
        "# HZ S RI R 50",
    ]
    for f, z in zip(record.frequencies_hz, record.s21):
        re, im = float(z.real), float(z.imag)
        lines.append(f"{float(f)!r} 0.0 0.0 {re!r} {im!r} {re!r} {im!r} 0.0 0.0")
    with open(path, "w", encoding="ascii") as handle:
        handle.write("\n".join(lines) + "\n")


def write_dataset(records: Sequence[SweepRecord], out_dir) -> list:
    """Write every record as CSV into ``out_dir``; returns the paths."""
    import os

    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for idx, record in enumerate(records):
        path = os.path.join(out_dir, f"{record.resonator_id}_{idx:04d}.csv")
        write_sweep_csv(record, path)
        paths.append(path)
    return paths
