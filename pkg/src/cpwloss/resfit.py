"""Notch (hanger) S21 resonance model and circle-fit parameter extraction.

The measured transmission past a side-coupled resonator is modelled with
the diameter-corrected notch form

    S21(f) = a e^{j(phi_off - 2 pi f tau)}
             * [1 - (Q_l/|Q_c|) e^{j phi0} / (1 + 2j Q_l (f/f_r - 1))]

where (a, phi_off, tau) describe the instrument background and phi0 the
impedance-mismatch rotation of the resonance circle.  The internal
quality factor follows from the diameter correction

    1/Q_i = 1/Q_l - cos(phi0)/|Q_c|.

``fit_resonance`` runs the standard three-stage extraction: electrical
delay removal, algebraic circle fit with a phase-vs-frequency fit, then
a full nonlinear refinement of all seven model parameters.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .constants import HBAR, dbm_to_watts
from .numerics import FitProblem, FitResult, least_squares

#: fraction of the frequency window (both edges together) treated as
#: resonance-free wings for background estimates
WING_FRACTION = 0.2

MIN_POINTS = 50


class NoDipError(RuntimeError):
    """The trace contains no usable resonance dip."""


class Regime(Enum):
    COUPLING_LIMITED = "coupling_limited"
    LOSS_LIMITED = "loss_limited"


class Background(NamedTuple):
    """Instrument background: amplitude, phase offset (rad) and
    electrical delay (s), phases referenced to absolute frequency."""

    amplitude: float
    phase_offset: float
    electrical_delay: float


@dataclass(frozen=True)
class SweepRecord:
    """One complex S21 trace with its measurement environment.

    ``applied_power_dbm`` is the drive power at the chip reference
    plane, i.e. after the configured line attenuation.
    """

    frequencies_hz: np.ndarray
    s21: np.ndarray
    temperature_k: float
    applied_power_dbm: float
    resonator_id: str

    def __post_init__(self):
        f = np.asarray(self.frequencies_hz, dtype=float)
        z = np.asarray(self.s21, dtype=complex)
        if f.size == 0 or z.size == 0:
            raise ValueError("frequencies and s21 must be non-empty")
        if f.shape != z.shape:
            raise ValueError("frequencies and s21 must have matching length")
        if np.any(np.diff(f) <= 0.0):
            raise ValueError("frequencies must be strictly increasing")
        object.__setattr__(self, "frequencies_hz", f)
        object.__setattr__(self, "s21", z)


@dataclass(frozen=True)
class ResonanceFit:
    """Extracted notch parameters plus the refinement diagnostics."""

    f_r_hz: float
    q_l: float
    q_c_abs: float
    phi0: float
    q_i: float
    background: Background
    fit: Optional[FitResult] = None


def notch_s21(
    f: np.ndarray,
    f_r_hz: float,
    q_l: float,
    q_c_abs: float,
    phi0: float,
    background: Background = Background(1.0, 0.0, 0.0),
) -> np.ndarray:
    """Evaluate the notch model at (array of) frequencies in Hz."""
    f = np.asarray(f, dtype=float)
    x = f / f_r_hz - 1.0
    resonance = 1.0 - (q_l / q_c_abs) * np.exp(1j * phi0) / (1.0 + 2j * q_l * x)
    bg = background.amplitude * np.exp(
        1j * (background.phase_offset - 2.0 * np.pi * f * background.electrical_delay)
    )
    return bg * resonance


def s21_model(f, fit: ResonanceFit):
    """Model response of a fitted resonance; scalar in, scalar out."""
    scalar = np.isscalar(f)
    out = notch_s21(np.atleast_1d(f), fit.f_r_hz, fit.q_l, fit.q_c_abs,
                    fit.phi0, fit.background)
    return complex(out[0]) if scalar else out


def q_internal(q_l: float, q_c_abs: float, phi0: float) -> float:
    """Diameter-corrected internal quality factor."""
    inv = 1.0 / q_l - math.cos(phi0) / q_c_abs
    return math.inf if inv <= 0.0 else 1.0 / inv


def _wing_indices(n: int) -> np.ndarray:
    nw = max(int(round(0.5 * WING_FRACTION * n)), 5)
    return np.r_[0:nw, n - nw:n]


def _kasa_circle(z: np.ndarray) -> Tuple[complex, float]:
    """Algebraic (Kasa) circle fit in the complex plane."""
    x, y = z.real, z.imag
    A = np.column_stack([x, y, np.ones_like(x)])
    b = x * x + y * y
    (d, e, f), *_ = np.linalg.lstsq(A, b, rcond=None)
    xc, yc = 0.5 * d, 0.5 * e
    r = math.sqrt(max(xc * xc + yc * yc + f, 0.0))
    return complex(xc, yc), r


def _circle_rms(z: np.ndarray) -> float:
    c, r = _kasa_circle(z)
    dev = np.abs(z - c) - r
    return math.sqrt(float(np.mean(dev * dev))) / max(r, 1e-300)


def _smoothed_min(mag: np.ndarray) -> float:
    """Minimum of a moving-median of the magnitude.

    A real dip pulls a contiguous run of points down, so a short median
    filter barely affects it, while the extreme order statistic of pure
    noise (which grows like sqrt(2 ln N) sigma) is suppressed back to
    the noise floor.
    """
    window = max(5, mag.size // 100)
    if window % 2 == 0:
        window += 1
    if mag.size < 2 * window:
        return float(mag.min())
    view = np.lib.stride_tricks.sliding_window_view(mag, window)
    return float(np.median(view, axis=1).min())


def _golden_min(fun, lo: float, hi: float, iters: int = 60) -> float:
    g = 0.5 * (math.sqrt(5.0) - 1.0)
    c = hi - g * (hi - lo)
    d = lo + g * (hi - lo)
    fc, fd = fun(c), fun(d)
    for _ in range(iters):
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - g * (hi - lo)
            fc = fun(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + g * (hi - lo)
            fd = fun(d)
    return 0.5 * (lo + hi)


def _estimate_delay(f_centered: np.ndarray, z: np.ndarray, wing: np.ndarray,
                    span: float, depth_rel: float) -> float:
    """Stage 1: electrical delay.

    A linear fit to the unwrapped wing phase gives a first estimate; it
    is biased by the resonance tails by up to ~0.4*d/(m*span) for a dip
    of relative depth d seen over m linewidths.  The estimate is then
    refined on the circularity of the delay-corrected trace.  Both the
    bias and the width of the circularity valley scale with d, so the
    scan range and step are depth-scaled.
    """
    phase = np.unwrap(np.angle(z))
    A = np.vstack([f_centered[wing], np.ones(wing.size)]).T
    slope, _ = np.linalg.lstsq(A, phase[wing], rcond=None)[0]
    tau = -slope / (2.0 * math.pi)

    d_est = min(max(depth_rel, 0.01), 1.0)
    half = 0.6 * d_est / span
    taus = np.linspace(tau - half, tau + half, 121)
    rms = [_circle_rms(z * np.exp(2j * np.pi * f_centered * t)) for t in taus]
    best = int(np.argmin(rms))
    dt = taus[1] - taus[0]
    return _golden_min(
        lambda t: _circle_rms(z * np.exp(2j * np.pi * f_centered * t)),
        taus[best] - 1.5 * dt, taus[best] + 1.5 * dt,
    )


def fit_resonance(trace: SweepRecord) -> ResonanceFit:
    """Extract (f_r, Q_l, |Q_c|, phi0, Q_i) and background from a trace.

    Expects >= 50 points covering at least ~3 linewidths around the dip.
    Raises :class:`NoDipError` when the dip depth is below three times
    the wing noise floor (median absolute deviation estimate).
    Refinement non-convergence is reported in the returned ``fit``.
    """
    f = trace.frequencies_hz
    z = trace.s21
    n = f.size
    if n < MIN_POINTS:
        raise ValueError(f"trace has {n} points; need at least {MIN_POINTS}")

    f_ref = 0.5 * (f[0] + f[-1])
    span = f[-1] - f[0]
    fc = f - f_ref
    wing = _wing_indices(n)

    mag = np.abs(z)
    baseline = float(np.median(mag[wing]))
    if baseline <= 0.0:
        raise NoDipError("trace magnitude baseline is zero")
    noise_floor = 1.4826 * float(np.median(np.abs(mag[wing] - baseline)))
    depth = baseline - _smoothed_min(mag)
    if depth <= 3.0 * noise_floor + 1e-12 * baseline:
        raise NoDipError(
            f"dip depth {depth:.3g} below 3x noise floor {noise_floor:.3g}"
        )
    depth = baseline - float(mag.min())

    # stage 1: electrical delay
    tau0 = _estimate_delay(fc, z, wing, span, depth / baseline)
    zc = z * np.exp(2j * np.pi * fc * tau0)

    # stage 2: circle fit plus phase-vs-frequency fit
    centre, radius = _kasa_circle(zc)
    theta = np.unwrap(np.angle(zc - centre))
    dtheta = np.abs(np.gradient(theta, f))
    fr0 = float(f[int(np.argmax(dtheta))])
    ql0 = max(float(dtheta.max()) * fr0 / 4.0, 10.0)
    th00 = 0.5 * (theta[0] + theta[-1])

    def phase_residuals(q):
        th0, ql_rel, fr_rel = q
        return th0 + 2.0 * np.arctan(2.0 * ql_rel * ql0 * (1.0 - f / (fr_rel * fr0))) - theta

    phase_fit = least_squares(FitProblem(
        residual_fn=phase_residuals,
        initial_params=[th00, 1.0, 1.0],
        lower_bounds=[-np.inf, 1e-6, 0.5],
        upper_bounds=[np.inf, 1e6, 1.5],
    ))
    th0 = phase_fit.params[0]
    ql0 = phase_fit.params[1] * ql0
    fr0 = phase_fit.params[2] * fr0

    p_offres = centre + radius * np.exp(1j * (th0 - math.pi))
    a0 = abs(p_offres)
    phase0 = float(np.angle(p_offres))
    phi00 = float(np.angle((p_offres - centre) / p_offres))
    qc0 = ql0 * a0 / (2.0 * radius)

    # stage 3: full nonlinear refinement.  Parameters are scaled to O(1)
    # and the delay phase is referenced to the window centre, which
    # decouples tau from the constant phase offset.
    scales = np.array([fr0, ql0, qc0, 1.0, max(a0, 1e-3), 1.0, 1.0 / span])

    def model_residuals(u):
        fr, ql, qc, phi0, amp, poff, tau = u * scales
        x = f / fr - 1.0
        zm = amp * np.exp(1j * (poff - 2.0 * np.pi * fc * tau)) \
            * (1.0 - (ql / qc) * np.exp(1j * phi0) / (1.0 + 2j * ql * x))
        diff = zm - z
        return np.concatenate([diff.real, diff.imag])

    u0 = np.array([fr0, ql0, qc0, phi00, a0, phase0, tau0]) / scales
    lower = np.array([f[0], 1.0, 1.0, -np.pi, 1e-12, -np.inf, -np.inf]) / scales
    upper = np.array([f[-1], 1e10, 1e14, np.pi, np.inf, np.inf, np.inf]) / scales
    refine = least_squares(FitProblem(
        residual_fn=model_residuals,
        initial_params=np.clip(u0, lower, upper),
        lower_bounds=lower,
        upper_bounds=upper,
    ))
    fr, ql, qc, phi0, amp, poff, tau = refine.params * scales
    phase_offset = math.remainder(poff + 2.0 * math.pi * f_ref * tau, 2.0 * math.pi)
    return ResonanceFit(
        f_r_hz=float(fr),
        q_l=float(ql),
        q_c_abs=float(qc),
        phi0=float(phi0),
        q_i=q_internal(float(ql), float(qc), float(phi0)),
        background=Background(float(amp), float(phase_offset), float(tau)),
        fit=refine,
    )


def photon_number(fit: ResonanceFit, applied_power_dbm: float) -> float:
    """Mean intra-resonator photon number for a notch geometry.

    <n_ph> = 2 Q_l^2 P_applied / (|Q_c| hbar (2 pi f_r)^2), with the
    applied power taken at the chip reference plane.
    """
    p_watts = dbm_to_watts(applied_power_dbm)
    omega = 2.0 * math.pi * fit.f_r_hz
    return 2.0 * fit.q_l ** 2 * p_watts / (fit.q_c_abs * HBAR * omega ** 2)


def classify_regime(
    fits_vs_t: Sequence[Tuple[float, ResonanceFit]],
    threshold: float = 3.0,
) -> list:
    """Label each temperature point coupling- or loss-limited.

    A point is coupling-limited when Q_i >= threshold * |Q_c|, i.e. the
    loaded linewidth is set by the feedline rather than internal loss.
    Output is sorted by temperature.
    """
    if len(fits_vs_t) < 2:
        raise ValueError("need at least two temperature points")
    labelled = []
    for temperature_k, fit in sorted(fits_vs_t, key=lambda item: item[0]):
        regime = (Regime.COUPLING_LIMITED
                  if fit.q_i >= threshold * fit.q_c_abs
                  else Regime.LOSS_LIMITED)
        labelled.append((temperature_k, regime))
    return labelled
