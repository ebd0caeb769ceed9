"""CSV and Touchstone ingestion, rejection policy, attenuation handling."""

import numpy as np
import pytest

from cpwloss import Background, SweepRecord, notch_s21
from cpwloss.pipeline import IngestError, ingest, read_trace_csv, read_trace_touchstone
from cpwloss.synth import write_sweep_csv, write_sweep_touchstone

MINIMAL = """# temperature_k=0.077
# power_dbm=-140.0
# resonator=r0
freq_hz,s21_re,s21_im
3.0e9,0.9,0.0
3.1e9,0.8,-0.1
3.2e9,0.9,0.05
"""


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_minimal_csv(tmp_path):
    record = read_trace_csv(_write(tmp_path, "a.csv", MINIMAL))
    assert record.temperature_k == 0.077
    assert record.applied_power_dbm == -140.0
    assert record.resonator_id == "r0"
    assert record.frequencies_hz.size == 3
    assert record.s21[1] == pytest.approx(0.8 - 0.1j)


def test_attenuation_shifts_power(tmp_path):
    record = read_trace_csv(_write(tmp_path, "a.csv", MINIMAL), attenuation_db=60.0)
    assert record.applied_power_dbm == -200.0


def test_non_monotone_frequency_rejected(tmp_path):
    bad = MINIMAL.replace("3.2e9", "3.05e9")
    with pytest.raises(IngestError, match="non-monotone frequency"):
        read_trace_csv(_write(tmp_path, "bad.csv", bad))


def test_unit_ambiguity_rejected(tmp_path):
    bad = MINIMAL.replace("freq_hz", "freq_ghz")
    with pytest.raises(IngestError, match="unit ambiguity"):
        read_trace_csv(_write(tmp_path, "bad.csv", bad))


def test_malformed_header_rejected(tmp_path):
    bad = MINIMAL.replace("freq_hz,s21_re,s21_im", "a,b,c")
    with pytest.raises(IngestError, match="malformed header"):
        read_trace_csv(_write(tmp_path, "bad.csv", bad))


def test_missing_metadata_rejected(tmp_path):
    bad = MINIMAL.replace("# temperature_k=0.077\n", "")
    with pytest.raises(IngestError, match="temperature_k"):
        read_trace_csv(_write(tmp_path, "bad.csv", bad))


def test_batch_continues_past_rejects(tmp_path):
    _write(tmp_path, "good.csv", MINIMAL)
    _write(tmp_path, "bad.csv", MINIMAL.replace("freq_hz", "frequency"))
    result = ingest([str(tmp_path)])
    assert len(result.records) == 1
    assert len(result.rejected) == 1
    assert "bad.csv" in result.rejected[0][0]


def _synthetic_record():
    f = np.linspace(3.6e9, 3.7e9, 101)
    z = notch_s21(f, 3.654e9, 9e4, 1e5, 0.1, Background(0.98, 0.3, 40e-9))
    return SweepRecord(f, z, 0.077, -140.0, "r0")


def test_touchstone_matches_csv_bit_for_bit(tmp_path):
    record = _synthetic_record()
    csv_path = tmp_path / "t.csv"
    s2p_path = tmp_path / "t.s2p"
    write_sweep_csv(record, csv_path)
    write_sweep_touchstone(record, s2p_path)
    from_csv = read_trace_csv(str(csv_path))
    from_s2p = read_trace_touchstone(str(s2p_path))
    assert np.array_equal(from_csv.frequencies_hz, from_s2p.frequencies_hz)
    assert np.array_equal(from_csv.s21, from_s2p.s21)
    assert from_csv.temperature_k == from_s2p.temperature_k
    assert from_csv.applied_power_dbm == from_s2p.applied_power_dbm
    assert from_csv.resonator_id == from_s2p.resonator_id
    # and the CSV round-trips the original record exactly
    assert np.array_equal(from_csv.frequencies_hz, record.frequencies_hz)
    assert np.array_equal(from_csv.s21, record.s21)


def test_touchstone_unit_scaling_and_formats(tmp_path):
    ghz = """! temperature_k=0.1
! power_dbm=-120
! resonator=rx
# GHZ S RI R 50
3.60 0 0 0.9 0.01 0.9 0.01 0 0
3.65 0 0 0.5 -0.2 0.5 -0.2 0 0
3.70 0 0 0.9 -0.01 0.9 -0.01 0 0
"""
    path = tmp_path / "g.s2p"
    path.write_text(ghz)
    record = read_trace_touchstone(str(path))
    assert record.frequencies_hz[0] == pytest.approx(3.6e9)
    assert record.s21[1] == pytest.approx(0.5 - 0.2j)
    # MA format with explicit-degree phase
    ma = ghz.replace("# GHZ S RI R 50", "# GHZ S MA R 50").replace(
        "0.5 -0.2", "0.5 90.0")
    path2 = tmp_path / "m.s2p"
    path2.write_text(ma)
    record2 = read_trace_touchstone(str(path2))
    assert record2.s21[1] == pytest.approx(0.5j, abs=1e-12)


def test_touchstone_wrong_columns_rejected(tmp_path):
    bad = """! temperature_k=0.1
! power_dbm=-120
! resonator=rx
# HZ S RI R 50
3.6e9 0 0 0.9 0.01
"""
    path = tmp_path / "b.s2p"
    path.write_text(bad)
    with pytest.raises(IngestError, match="9 columns"):
        read_trace_touchstone(str(path))
