"""Loss-channel models and the internal-loss budget algebra.

The internal loss tangent of a resonator is decomposed as

    1/Q_i = delta_TLS(T, n_ph) + delta_qp(T) + delta_other

with the saturable two-level-system law

    delta_TLS = (1/Q_TLS0) * tanh(h f_r / 2 kB T) / sqrt(1 + (n_ph/n_c)^beta)

and the kinetic-inductance quasiparticle loss

    delta_qp = (alpha/pi) * sqrt(2 Delta(T) / h f_r) * n_qp / (N0 Delta(T)).

The quasiparticle relation is linear in the density, so it inverts
exactly; ``nqp_from_delta`` is that inverse and is used both to turn a
measured loss excess into a density and to express the surface-impedance
theory loss as an equivalent density.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence, Tuple

import numpy as np

from .constants import (
    BOLTZMANN,
    JOULE_PER_EV,
    PER_M3_TO_PER_UM3,
    PER_UM3_TO_PER_M3,
    PLANCK,
)
from .mbcore import Material, _gap_j, nqp_thermal, surface_impedance
from .numerics import FitProblem, FitResult, least_squares

DEFAULT_BETA_BOUNDS = (0.1, 2.0)


@dataclass(frozen=True)
class ResonatorParams:
    """Electrical description of one resonator: frequency, kinetic
    inductance fraction alpha, and the film it is made of."""

    f_r_hz: float
    alpha: float
    material: Material

    def __post_init__(self):
        if not self.f_r_hz > 0.0:
            raise ValueError("f_r_hz must be positive")
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError("alpha must lie in (0, 1]")


@dataclass(frozen=True)
class TlsParams:
    """Saturable TLS loss law parameters."""

    inv_q_tls0: float
    n_c: float
    beta: float

    def __post_init__(self):
        if not self.inv_q_tls0 > 0.0:
            raise ValueError("inv_q_tls0 must be positive")
        if not self.n_c > 0.0:
            raise ValueError("n_c must be positive")
        if not self.beta > 0.0:
            raise ValueError("beta must be positive")


class QpExtraction(NamedTuple):
    """Measured quasiparticle loss after TLS subtraction.

    ``clamped`` flags the unphysical case where the TLS prediction
    exceeded the measured loss and the result was clipped to zero.
    """

    value: float
    clamped: bool


@dataclass(frozen=True)
class LossBudget:
    """Split of one measured 1/Q_i into channels at a (T, n_ph) point."""

    temperature_k: float
    n_ph: float
    delta_total: float
    delta_tls: float
    delta_qp: float
    delta_other: float
    clamped: bool = False

    def __post_init__(self):
        parts = self.delta_tls + self.delta_qp + self.delta_other
        if abs(parts - self.delta_total) > 1e-15 + 1e-9 * abs(self.delta_total):
            raise ValueError("budget channels do not sum to delta_total")
        if min(self.delta_tls, self.delta_qp, self.delta_other) < 0.0:
            raise ValueError("budget channels must be non-negative")


class TlsSweepFit(NamedTuple):
    params: TlsParams
    delta_floor: float
    fit: FitResult


def delta_tls(tls: TlsParams, temperature_k: float, n_ph: float, f_r_hz: float) -> float:
    """TLS loss tangent at temperature T and mean photon number n_ph."""
    if temperature_k <= 0.0:
        raise ValueError("temperature must be positive")
    if n_ph < 0.0:
        raise ValueError("photon number must be non-negative")
    thermal = math.tanh(PLANCK * f_r_hz / (2.0 * BOLTZMANN * temperature_k))
    saturation = math.sqrt(1.0 + (n_ph / tls.n_c) ** tls.beta)
    return tls.inv_q_tls0 * thermal / saturation


def _qp_loss_per_density_m3(res: ResonatorParams, temperature_k: float) -> float:
    """d(delta_qp)/d(n_qp) in m^3: (alpha/pi) sqrt(2 Delta / h f) / (N0 Delta)."""
    gap = _gap_j(res.material, temperature_k)
    n0_j = res.material.n0_per_m3_ev / JOULE_PER_EV
    return (res.alpha / math.pi) * math.sqrt(2.0 * gap / (PLANCK * res.f_r_hz)) \
        / (n0_j * gap)


def delta_qp_from_density(res: ResonatorParams, temperature_k: float,
                          nqp_per_um3: float) -> float:
    """Quasiparticle loss tangent for an arbitrary density (per um^3)."""
    if nqp_per_um3 < 0.0:
        raise ValueError("quasiparticle density must be non-negative")
    return _qp_loss_per_density_m3(res, temperature_k) * nqp_per_um3 * PER_UM3_TO_PER_M3


def delta_qp_theory(res: ResonatorParams, temperature_k: float) -> float:
    """Quasiparticle loss tangent for the thermal-equilibrium density."""
    return delta_qp_from_density(res, temperature_k,
                                 nqp_thermal(res.material, temperature_k))


def delta_i_theory(res: ResonatorParams, temperature_k: float) -> float:
    """Theory internal loss from the surface impedance: alpha * Rs / (w Ls).

    In the local thin-conductor limit this equals alpha*sigma1/(2*sigma2)
    up to O((sigma1/sigma2)^2) corrections.
    """
    zs = surface_impedance(res.material, temperature_k, res.f_r_hz)
    omega = 2.0 * math.pi * res.f_r_hz
    return res.alpha * zs.rs_ohm / (omega * zs.ls_h)


def extract_delta_qp_measured(inv_qi_measured: float, tls: TlsParams,
                              temperature_k: float, n_ph: float,
                              f_r_hz: float) -> QpExtraction:
    """Measured quasiparticle loss: 1/Q_i,measured minus the TLS prediction.

    Noise can push the subtraction negative; the result is then clamped
    to zero and flagged rather than raised, so batch sweeps keep going.
    """
    if inv_qi_measured <= 0.0:
        raise ValueError("inv_qi_measured must be positive")
    value = inv_qi_measured - delta_tls(tls, temperature_k, n_ph, f_r_hz)
    if value < 0.0:
        return QpExtraction(0.0, True)
    return QpExtraction(value, False)


def nqp_from_delta(delta_qp: float, res: ResonatorParams,
                   temperature_k: float) -> float:
    """Invert the quasiparticle loss law to a density per um^3.

    n_qp = delta_qp * N0 Delta(T) * (pi/alpha) * sqrt(h f_r / 2 Delta(T));
    exact algebraic inverse of ``delta_qp_from_density``.
    """
    if delta_qp < 0.0:
        raise ValueError("delta_qp must be non-negative")
    return delta_qp / _qp_loss_per_density_m3(res, temperature_k) * PER_M3_TO_PER_UM3


def fit_tls_power_sweep(
    points: Sequence[Tuple[float, float]],
    temperature_k: float,
    f_r_hz: float,
    beta_bounds: Tuple[float, float] = DEFAULT_BETA_BOUNDS,
) -> TlsSweepFit:
    """Fit the TLS law plus a power-independent floor to a power sweep.

    ``points`` are (n_ph, 1/Q_i) pairs taken at one temperature.  The
    model is delta_tls(n_ph) + delta_floor; the floor keeps the TLS
    parameters identifiable in the presence of power-independent loss.
    Needs at least five points spanning two decades of photon number.

    The fit runs over (log10 1/Q_TLS0, log10 n_c, beta, floor) with
    relative residuals, which weights the saturated tail properly when
    the noise is multiplicative.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 5:
        raise ValueError("need at least 5 (n_ph, inv_Qi) points")
    n_ph = pts[:, 0]
    y = pts[:, 1]
    if np.any(n_ph < 0.0) or np.any(y <= 0.0):
        raise ValueError("photon numbers must be >= 0 and losses > 0")
    positive = n_ph[n_ph > 0.0]
    if positive.size < 2 or positive.max() / positive.min() < 99.0:
        raise ValueError("power sweep must span at least two decades of n_ph")
    if not beta_bounds[0] > 0.0 or beta_bounds[0] >= beta_bounds[1]:
        raise ValueError("beta_bounds must be an increasing positive interval")

    thermal = math.tanh(PLANCK * f_r_hz / (2.0 * BOLTZMANN * temperature_k))
    y_max = float(y.max())
    floor0 = 0.8 * float(y.min())
    amp0 = max((y_max - floor0) / thermal, 1e-14)
    # knee guess: photon number where the floor-subtracted loss passes 1/sqrt(2)
    order = np.argsort(n_ph)
    rel = (y[order] - floor0) / max(y_max - floor0, 1e-300)
    knee = np.searchsorted(-rel, -1.0 / math.sqrt(2.0))
    nc0 = n_ph[order][min(max(int(knee), 1), len(y) - 1)]
    nc0 = min(max(nc0, positive.min()), positive.max())
    beta0 = min(max(1.0, beta_bounds[0]), beta_bounds[1])

    def residuals(p: np.ndarray) -> np.ndarray:
        log_tls0, log_nc, beta, floor = p
        model = (10.0 ** log_tls0) * thermal \
            / np.sqrt(1.0 + (n_ph / 10.0 ** log_nc) ** beta) + floor * y_max
        return model / y - 1.0

    problem = FitProblem(
        residual_fn=residuals,
        initial_params=[math.log10(amp0), math.log10(nc0), beta0, floor0 / y_max],
        lower_bounds=[-14.0, math.log10(positive.min()) - 3.0, beta_bounds[0], 0.0],
        upper_bounds=[0.0, math.log10(positive.max()) + 3.0, beta_bounds[1], 1.0],
        max_iterations=400,
    )
    fit = least_squares(problem)
    log_tls0, log_nc, beta, floor = fit.params
    params = TlsParams(inv_q_tls0=10.0 ** log_tls0, n_c=10.0 ** log_nc, beta=beta)
    return TlsSweepFit(params=params, delta_floor=floor * y_max, fit=fit)


def budget_at(res: ResonatorParams, tls: TlsParams, temperature_k: float,
              n_ph: float, inv_qi_measured: float) -> LossBudget:
    """Attribute one measured 1/Q_i to TLS and quasiparticle channels.

    The quasiparticle channel absorbs the whole (measured - TLS)
    remainder; a single scalar measurement cannot support a finer split,
    so ``delta_other`` is zero here and only the clamped case (measured
    below the TLS prediction) is flagged as inconsistent.
    """
    tls_pred = delta_tls(tls, temperature_k, n_ph, res.f_r_hz)
    qp = extract_delta_qp_measured(inv_qi_measured, tls, temperature_k,
                                   n_ph, res.f_r_hz)
    tls_part = tls_pred if not qp.clamped else inv_qi_measured
    return LossBudget(
        temperature_k=float(temperature_k),
        n_ph=float(n_ph),
        delta_total=float(inv_qi_measured),
        delta_tls=tls_part,
        delta_qp=qp.value if not qp.clamped else 0.0,
        delta_other=float(inv_qi_measured) - tls_part
        - (qp.value if not qp.clamped else 0.0),
        clamped=qp.clamped,
    )
