"""Two named resonators through synth and the full analysis."""

import math

import pytest

from cpwloss import generate_sweeps
from cpwloss.pipeline import load_config, run_analysis
from cpwloss.pipeline.ingest import IngestResult

pytestmark = pytest.mark.filterwarnings("ignore::cpwloss.mbcore.ValidityWarning")

CONFIG = """
[material:ta40]
tc_k = 4.06
n0_per_m3_ev = 6.9e28
sigma_n_s_per_m = 5.0e6

[resonator:cavity_a]
material = ta40
f_r_hz = 3.654e9
alpha = 0.005

[resonator:cavity_b]
material = ta40
f_r_hz = 5.1e9
alpha = 0.008

[io]
input_dir = data
output_dir = out

[synth]
material = ta40
temperature_grid_k = 0.02 0.5
power_grid_dbm = -165 -160 -155 -150 -145 -140
snr_db = inf
seed = 5
points_per_trace = 601
background_amplitude = 0.98
background_phase_rad = 0.3
electrical_delay_s = 4.0e-8

[synth.resonator:cavity_a]
q_c_abs = 1.0e5
phi0_rad = 0.1
inv_q_tls0 = 1.0e-6
n_c = 10.0
beta = 0.7

[synth.resonator:cavity_b]
q_c_abs = 2.0e5
phi0_rad = -0.05
inv_q_tls0 = 3.0e-6
n_c = 30.0
beta = 0.5
"""


def test_named_resonators_round_trip(tmp_path):
    config_path = tmp_path / "multi.ini"
    config_path.write_text(CONFIG)
    config = load_config(str(config_path))
    records = generate_sweeps(config.scenario)
    ids = {r.resonator_id for r in records}
    assert ids == {"cavity_a", "cavity_b"}
    assert len(records) == 2 * 2 * 6

    report = run_analysis(config, IngestResult(records=records))
    assert set(report.resonators) == {"cavity_a", "cavity_b"}
    assert not report.errors
    for name, tls0, n_c, beta in (("cavity_a", 1e-6, 10.0, 0.7),
                                  ("cavity_b", 3e-6, 30.0, 0.5)):
        r = report.resonators[name]
        assert not r.errors, (name, r.errors)
        assert r.tls is not None
        assert r.tls.inv_q_tls0 == pytest.approx(tls0, rel=0.02)
        assert r.tls.n_c == pytest.approx(n_c, rel=0.05)
        assert r.tls.beta == pytest.approx(beta, rel=0.03)
        assert len(r.budgets) == 2
    # the two resonators keep their own frequencies
    f_a = report.resonators["cavity_a"].resonances[0].f_r_hz
    f_b = report.resonators["cavity_b"].resonances[0].f_r_hz
    assert f_a == pytest.approx(3.654e9, rel=1e-4)
    assert f_b == pytest.approx(5.1e9, rel=1e-4)
