import pytest

from cpwloss import Background, Material, ResonatorParams, TlsParams


@pytest.fixture
def tantalum() -> Material:
    # 40 nm alpha-Ta film values used throughout the test suite; the
    # normal-state conductivity is a representative thin-film number.
    return Material(name="ta40", tc_k=4.06, n0_per_m3_ev=6.9e28, sigma_n=5.0e6)


@pytest.fixture
def ta_resonator(tantalum) -> ResonatorParams:
    return ResonatorParams(f_r_hz=3.654e9, alpha=0.05, material=tantalum)


@pytest.fixture
def tls_params() -> TlsParams:
    return TlsParams(inv_q_tls0=1e-6, n_c=10.0, beta=0.7)


@pytest.fixture
def notch_background() -> Background:
    return Background(amplitude=0.98, phase_offset=0.3, electrical_delay=40e-9)


def rel_err(value, reference) -> float:
    return abs(value - reference) / abs(reference)


@pytest.fixture
def relerr():
    return rel_err
