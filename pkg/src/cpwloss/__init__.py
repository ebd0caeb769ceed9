"""Microwave-loss analysis for superconducting CPW resonators.

Mattis-Bardeen complex conductivity, TLS and quasiparticle loss models,
notch S21 resonance fitting, synthetic sweep generation, and a pipeline
that extracts measured vs. theoretical quasiparticle densities from
temperature/power sweep data.
"""

__version__ = "0.1.0"

from .lossmodel import (
    LossBudget,
    QpExtraction,
    ResonatorParams,
    TlsParams,
    budget_at,
    delta_i_theory,
    delta_qp_from_density,
    delta_qp_theory,
    delta_tls,
    extract_delta_qp_measured,
    fit_tls_power_sweep,
    nqp_from_delta,
)
from .mbcore import (
    ComplexConductivity,
    GapModel,
    Material,
    SurfaceImpedance,
    ValidityWarning,
    complex_conductivity,
    delta0,
    gap_at,
    nqp_thermal,
    nqp_thermal_ln,
    sigma1_ratio,
    sigma2_deficit,
    sigma2_ratio,
    surface_impedance,
)
from .numerics import (
    FitProblem,
    FitResult,
    bessel_i0,
    bessel_i0e,
    bessel_k0,
    bessel_k0e,
    least_squares,
)
from .resfit import (
    Background,
    NoDipError,
    Regime,
    ResonanceFit,
    SweepRecord,
    classify_regime,
    fit_resonance,
    notch_s21,
    photon_number,
    q_internal,
    s21_model,
)
from .synth import (
    FixedPointError,
    ScenarioSpec,
    SynthResonator,
    generate_sweeps,
    inject_nonequilibrium,
    write_dataset,
)
