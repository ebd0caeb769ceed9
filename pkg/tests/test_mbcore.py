"""Gap, conductivity ratios, thermal density, surface impedance.

Non-trivial expected values were computed with tests/oracles.py (direct
50-digit evaluation of the defining formulas) and frozen as literals.
"""

import math

import numpy as np
import pytest

from cpwloss import (
    GapModel,
    Material,
    ValidityWarning,
    complex_conductivity,
    delta0,
    gap_at,
    nqp_thermal,
    nqp_thermal_ln,
    sigma1_ratio,
    sigma2_ratio,
    surface_impedance,
)

F_R = 3.654e9

pytestmark = pytest.mark.filterwarnings("ignore::cpwloss.mbcore.ValidityWarning")

# frozen oracle literals (Ta: Tc=4.06 K, N0=6.9e28 /m^3/eV, sigma_n=5e6 S/m)
DELTA0_TA_EV = 0.0006157601655798458
GAP_FRACTION_1K = 0.99546819548424342071
SIGMA1_TA_1K = 0.028842063188902400085
SIGMA2_TA_1K = 127.73112849906993861
SIGMA2_TA_0K = 128.01099825750035802
NQP_TA_1K = 64735.697190694093354
RS_TA_1K = 7.5883145756797452261e-7
LS_TA_1K = 2.9275029500722956717e-13


def test_material_validation():
    with pytest.raises(ValueError):
        Material("bad", tc_k=-1.0, n0_per_m3_ev=1e28, sigma_n=1e6)
    with pytest.raises(ValueError):
        Material("bad", tc_k=1.0, n0_per_m3_ev=0.0, sigma_n=1e6)


def test_delta0_value_and_linearity(tantalum, relerr):
    assert relerr(delta0(tantalum), DELTA0_TA_EV) < 1e-12
    double = Material("ta2", tc_k=2 * 4.06, n0_per_m3_ev=6.9e28, sigma_n=5e6)
    assert relerr(delta0(double), 2 * delta0(tantalum)) < 1e-14


def test_gap_models(tantalum):
    const = Material("c", tc_k=4.06, n0_per_m3_ev=6.9e28, sigma_n=5e6,
                     gap_model=GapModel.CONSTANT_DELTA0)
    for t in (0.0, 0.5, 2.0, 4.0):
        assert gap_at(const, t) == delta0(const)
    # tanh model saturates to delta0 at T -> 0 and matches the scalar oracle at 1 K
    assert abs(gap_at(tantalum, 1e-9) / delta0(tantalum) - 1.0) < 1e-12
    assert abs(gap_at(tantalum, 1.0) / delta0(tantalum) - GAP_FRACTION_1K) < 1e-12
    # monotone non-increasing
    grid = np.linspace(0.01, 4.05, 80)
    gaps = [gap_at(tantalum, t) for t in grid]
    assert all(a >= b - 1e-20 for a, b in zip(gaps, gaps[1:]))
    with pytest.raises(ValueError):
        gap_at(tantalum, 4.06)


def test_sigma1_oracle_value(tantalum, relerr):
    assert relerr(sigma1_ratio(tantalum, 1.0, F_R), SIGMA1_TA_1K) < 1e-9


def test_sigma1_frozen_out_at_low_temperature(tantalum):
    assert sigma1_ratio(tantalum, 0.01 * 4.06, F_R) < 1e-60


def test_sigma1_monotone_increasing(tantalum):
    temps = np.linspace(0.05 * 4.06, 0.3 * 4.06, 40)
    vals = [sigma1_ratio(tantalum, t, F_R) for t in temps]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    assert all(v > 0.0 for v in vals)


def test_sigma1_domain_errors(tantalum):
    for bad_t in (0.0, -1.0, 4.06, 5.0):
        with pytest.raises(ValueError):
            sigma1_ratio(tantalum, bad_t, F_R)


def test_sigma2_zero_temperature_ceiling(tantalum, relerr):
    ceiling = sigma2_ratio(tantalum, 0.0, F_R)
    assert relerr(ceiling, SIGMA2_TA_0K) < 1e-9
    # never above the ceiling anywhere; strictly below once the thermal
    # correction is representable at double precision (T >= ~0.2 K here)
    for t in np.linspace(0.01, 0.3 * 4.06, 30):
        assert sigma2_ratio(tantalum, t, F_R) <= ceiling
    for t in np.linspace(0.25, 0.3 * 4.06, 10):
        assert sigma2_ratio(tantalum, t, F_R) < ceiling


def test_sigma2_oracle_value_and_monotonicity(tantalum, relerr):
    assert relerr(sigma2_ratio(tantalum, 1.0, F_R), SIGMA2_TA_1K) < 1e-9
    temps = np.linspace(0.25, 0.3 * 4.06, 40)
    vals = [sigma2_ratio(tantalum, t, F_R) for t in temps]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    with pytest.raises(ValueError):
        sigma2_ratio(tantalum, -0.1, F_R)


def test_sigma2_deficit_resolves_subepsilon_trend(tantalum):
    # below ~0.2 K the suppression is under eps*ceiling, so sigma2_ratio
    # plateaus bit-identically; the cancellation-free deficit still
    # resolves the strict downward trend
    from cpwloss import sigma2_deficit

    assert sigma2_ratio(tantalum, 0.077, F_R) == sigma2_ratio(tantalum, 0.15, F_R)
    temps = np.linspace(0.02, 1.0, 50)
    deficits = [sigma2_deficit(tantalum, t, F_R) for t in temps]
    assert all(b > a for a, b in zip(deficits, deficits[1:]))
    assert all(d > 0.0 for d in deficits)
    # consistent with the direct subtraction where that is representable
    ceiling = sigma2_ratio(tantalum, 0.0, F_R)
    for t in (0.5, 0.8, 1.0):
        direct = ceiling - sigma2_ratio(tantalum, t, F_R)
        assert sigma2_deficit(tantalum, t, F_R) == pytest.approx(direct, rel=1e-6)
    assert sigma2_deficit(tantalum, 0.0, F_R) == 0.0


def test_sigma_continuity_across_bessel_branch(tantalum):
    # xi = hbar*w / (2 kB T) crosses the K0/I0 series switch (xi = 2)
    # at T ~ 43.85 mK for 3.654 GHz; the ratios must stay smooth there
    from cpwloss.constants import BOLTZMANN, HBAR

    t_switch = HBAR * 2 * math.pi * F_R / (2.0 * BOLTZMANN * 2.0)
    below = sigma1_ratio(tantalum, t_switch * (1 - 1e-9), F_R)
    above = sigma1_ratio(tantalum, t_switch * (1 + 1e-9), F_R)
    assert abs(below - above) / below < 1e-6  # smooth in T, exact at switch
    s2b = sigma2_ratio(tantalum, t_switch * (1 - 1e-9), F_R)
    s2a = sigma2_ratio(tantalum, t_switch * (1 + 1e-9), F_R)
    assert abs(s2b - s2a) / s2b < 1e-9


def test_validity_warning_outside_domain(tantalum):
    # kB*T/Delta0 = 0.14 at 1 K for Ta: succeeds but warns
    with pytest.warns(ValidityWarning):
        sigma1_ratio(tantalum, 1.0, F_R)
    # comfortably inside the domain at 0.3 K: no warning
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("error", ValidityWarning)
        sigma1_ratio(tantalum, 0.3, F_R)


def test_nqp_thermal_oracle_and_limits(tantalum, relerr):
    assert relerr(nqp_thermal(tantalum, 1.0), NQP_TA_1K) < 1e-9
    # vanishes monotonically toward zero temperature
    temps = [0.1, 0.2, 0.4, 0.8]
    vals = [nqp_thermal(tantalum, t) for t in temps]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    assert nqp_thermal(tantalum, 0.05) < 1e-50
    # linear in N0
    doubled = Material("ta2n", tc_k=4.06, n0_per_m3_ev=2 * 6.9e28, sigma_n=5e6)
    assert relerr(nqp_thermal(doubled, 1.0), 2 * NQP_TA_1K) < 1e-12
    for bad_t in (0.0, -0.5, 0.51 * 4.06):
        with pytest.raises(ValueError):
            nqp_thermal(tantalum, bad_t)


def test_nqp_thermal_ln_matches_linear_scale(tantalum):
    for t in (0.3, 0.7, 1.0):
        assert math.exp(nqp_thermal_ln(tantalum, t)) == pytest.approx(
            nqp_thermal(tantalum, t), rel=1e-12)
    # usable far below where the linear value underflows (Tc/T = 500)
    deep = 4.06 / 500.0
    assert nqp_thermal(tantalum, deep) == 0.0
    assert nqp_thermal_ln(tantalum, deep) < -800.0


def test_surface_impedance_oracle(tantalum, relerr):
    zs = surface_impedance(tantalum, 1.0, F_R)
    assert relerr(zs.rs_ohm, RS_TA_1K) < 1e-9
    assert relerr(zs.ls_h, LS_TA_1K) < 1e-9


def test_surface_impedance_lossless_limit(tantalum):
    # sigma1 is double-underflow zero at 40 mK: purely inductive response
    zs = surface_impedance(tantalum, 0.040, F_R)
    omega = 2 * math.pi * F_R
    assert zs.ls_h > 0.0
    assert zs.rs_ohm / (omega * zs.ls_h) < 1e-15


def test_surface_ratio_increases_with_temperature(tantalum):
    omega = 2 * math.pi * F_R
    temps = np.linspace(0.1 * 4.06, 0.25 * 4.06, 12)
    ratios = []
    for t in temps:
        zs = surface_impedance(tantalum, t, F_R)
        ratios.append(zs.rs_ohm / (omega * zs.ls_h))
    assert all(b > a for a, b in zip(ratios, ratios[1:]))


def test_parametric_sigma_vs_density_monotonicity(tantalum):
    # eliminating T: sigma1 rises and sigma2 falls with quasiparticle density
    temps = np.linspace(0.25, 1.0, 16)
    n = [nqp_thermal(tantalum, t) for t in temps]
    s1 = [sigma1_ratio(tantalum, t, F_R) for t in temps]
    s2 = [sigma2_ratio(tantalum, t, F_R) for t in temps]
    assert all(b > a for a, b in zip(n, n[1:]))
    assert all(b > a for a, b in zip(s1, s1[1:]))
    assert all(b < a for a, b in zip(s2, s2[1:]))


def test_density_unit_round_trip():
    from cpwloss.constants import PER_M3_TO_PER_UM3, PER_UM3_TO_PER_M3

    for value in (1e-3, 1.0, 6.47e4, 1e19):
        back = value * PER_UM3_TO_PER_M3 * PER_M3_TO_PER_UM3
        assert back == pytest.approx(value, rel=1e-15)


def test_complex_conductivity_bundle(tantalum):
    cc = complex_conductivity(tantalum, 0.5, F_R)
    assert cc.sigma1_over_sigman == sigma1_ratio(tantalum, 0.5, F_R)
    assert cc.sigma2_over_sigman == sigma2_ratio(tantalum, 0.5, F_R)
    assert cc.temperature_k == 0.5
