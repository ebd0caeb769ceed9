"""Extended-precision oracles, independent of the package implementation.

Everything here is evaluated with mpmath at 50 significant digits from
the defining series / formulas, never by calling back into the package,
so these values can anchor round-trip and accuracy tests.
"""

import mpmath as mp

mp.mp.dps = 50

SERIES_TERMS = 64

# same exact SI constants the package uses, as high-precision literals
H = mp.mpf("6.62607015e-34")
HBAR = H / (2 * mp.pi)
KB = mp.mpf("1.380649e-23")
E_CHARGE = mp.mpf("1.602176634e-19")
MU0 = mp.mpf("1.25663706212e-6")


def i0_series(x) -> mp.mpf:
    """I0 by its ascending series, 64 terms at 50 digits."""
    x = mp.mpf(x)
    z = x * x / 4
    term = mp.mpf(1)
    total = mp.mpf(1)
    for k in range(1, SERIES_TERMS):
        term *= z / (k * k)
        total += term
    return total


def k0_series(x) -> mp.mpf:
    """K0 by its ascending series with the log term, 64 terms."""
    x = mp.mpf(x)
    z = x * x / 4
    term = mp.mpf(1)
    harmonic = mp.mpf(0)
    total = mp.mpf(0)
    for k in range(1, SERIES_TERMS):
        term *= z / (k * k)
        harmonic += mp.mpf(1) / k
        total += term * harmonic
    return -(mp.log(x / 2) + mp.euler) * i0_series(x) + total


def gap_j(tc_k, t_k, tanh_model=True) -> mp.mpf:
    d0 = mp.mpf("1.76") * KB * mp.mpf(tc_k)
    if not tanh_model or t_k == 0:
        return d0
    return d0 * mp.tanh(mp.mpf("1.74") * mp.sqrt(mp.mpf(tc_k) / mp.mpf(t_k) - 1))


def sigma1_ratio(tc_k, t_k, f_hz) -> mp.mpf:
    """Dissipative Mattis-Bardeen ratio from the defining formula."""
    d0 = mp.mpf("1.76") * KB * mp.mpf(tc_k)
    hw = HBAR * 2 * mp.pi * mp.mpf(f_hz)
    kt = KB * mp.mpf(t_k)
    xi = hw / (2 * kt)
    return (4 * d0 / hw) * mp.e ** (-d0 / kt) * mp.sinh(xi) * k0_series(xi)


def sigma2_ratio(tc_k, t_k, f_hz) -> mp.mpf:
    """Inductive Mattis-Bardeen ratio from the defining formula."""
    d0 = mp.mpf("1.76") * KB * mp.mpf(tc_k)
    hw = HBAR * 2 * mp.pi * mp.mpf(f_hz)
    if t_k == 0:
        return mp.pi * d0 / hw
    kt = KB * mp.mpf(t_k)
    xi = hw / (2 * kt)
    bracket = 1 - mp.sqrt(2 * mp.pi * kt / d0) * mp.e ** (-d0 / kt) \
        - 2 * mp.e ** (-d0 / kt) * mp.e ** (-xi) * i0_series(xi)
    return (mp.pi * d0 / hw) * bracket


def nqp_thermal_per_um3(tc_k, n0_per_m3_ev, t_k, tanh_model=True) -> mp.mpf:
    gap = gap_j(tc_k, t_k, tanh_model)
    kt = KB * mp.mpf(t_k)
    n0_j = mp.mpf(n0_per_m3_ev) / E_CHARGE
    per_m3 = 2 * n0_j * mp.sqrt(2 * mp.pi * kt * gap) * mp.e ** (-gap / kt)
    return per_m3 * mp.mpf("1e-18")


def surface_impedance(tc_k, sigma_n, t_k, f_hz):
    """(Rs, Ls) from complex arithmetic at 50 digits."""
    s1 = sigma1_ratio(tc_k, t_k, f_hz) * mp.mpf(sigma_n)
    s2 = sigma2_ratio(tc_k, t_k, f_hz) * mp.mpf(sigma_n)
    omega = 2 * mp.pi * mp.mpf(f_hz)
    zs = mp.sqrt(1j * MU0 * omega / mp.mpc(s1, -s2))
    return zs.real, zs.imag / omega


def delta_qp(tc_k, n0_per_m3_ev, alpha, f_r_hz, t_k, tanh_model=True) -> mp.mpf:
    """Quasiparticle loss for the thermal density, straight composition."""
    gap = gap_j(tc_k, t_k, tanh_model)
    n_m3 = nqp_thermal_per_um3(tc_k, n0_per_m3_ev, t_k, tanh_model) * mp.mpf("1e18")
    n0_j = mp.mpf(n0_per_m3_ev) / E_CHARGE
    return (mp.mpf(alpha) / mp.pi) * mp.sqrt(2 * gap / (H * mp.mpf(f_r_hz))) \
        * n_m3 / (n0_j * gap)


def nqp_from_delta_per_um3(delta, tc_k, n0_per_m3_ev, alpha, f_r_hz, t_k,
                           tanh_model=True) -> mp.mpf:
    gap = gap_j(tc_k, t_k, tanh_model)
    n0_j = mp.mpf(n0_per_m3_ev) / E_CHARGE
    per_m3 = mp.mpf(delta) * n0_j * gap * (mp.pi / mp.mpf(alpha)) \
        * mp.sqrt(H * mp.mpf(f_r_hz) / (2 * gap))
    return per_m3 * mp.mpf("1e-18")


def photon_number(q_l, q_c_abs, f_r_hz, p_dbm) -> mp.mpf:
    p_watts = mp.mpf("1e-3") * mp.mpf(10) ** (mp.mpf(p_dbm) / 10)
    omega = 2 * mp.pi * mp.mpf(f_r_hz)
    return 2 * mp.mpf(q_l) ** 2 * p_watts / (mp.mpf(q_c_abs) * HBAR * omega ** 2)
