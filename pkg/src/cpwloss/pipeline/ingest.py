"""Trace ingestion: metadata-carrying CSV files and two-port Touchstone.

CSV layout (one trace per file)::

    # temperature_k=0.077
    # power_dbm=-140.0
    # resonator=r0
    freq_hz,s21_re,s21_im
    3653800000.0,0.981,-0.002
    ...

Touchstone (.s2p) files carry the same metadata in ``!`` comment lines
and S21 is pulled from the standard two-port column order.  Ingestion is
batch-tolerant: a file that fails validation is recorded with its reason
and the rest of the batch proceeds.
"""

import math
import os
from dataclasses import dataclass, field
from typing import Iterable, List, Tuple

import numpy as np

from ..resfit import SweepRecord

CSV_HEADER = ("freq_hz", "s21_re", "s21_im")

_TOUCHSTONE_UNITS = {"hz": 1.0, "khz": 1e3, "mhz": 1e6, "ghz": 1e9}

_REQUIRED_META = ("temperature_k", "power_dbm", "resonator")


class IngestError(ValueError):
    """Single-file ingestion failure; batch handling records the reason."""


@dataclass
class IngestResult:
    records: List[SweepRecord] = field(default_factory=list)
    rejected: List[Tuple[str, str]] = field(default_factory=list)


def _parse_meta_line(line: str, meta: dict) -> None:
    body = line[1:].strip()
    if "=" in body:
        key, _, value = body.partition("=")
        meta[key.strip().lower()] = value.strip()


def _finish_meta(meta: dict, path: str) -> Tuple[float, float, str]:
    for key in _REQUIRED_META:
        if key not in meta:
            raise IngestError(f"missing '{key}' metadata comment")
    try:
        temperature = float(meta["temperature_k"])
        power = float(meta["power_dbm"])
    except ValueError as exc:
        raise IngestError(f"unparsable metadata value: {exc}") from exc
    if not math.isfinite(temperature) or not math.isfinite(power):
        raise IngestError("metadata values must be finite")
    return temperature, power, meta["resonator"]


def _build_record(freq, re_part, im_part, meta, attenuation_db) -> SweepRecord:
    freq = np.asarray(freq, dtype=float)
    if freq.size == 0:
        raise IngestError("no data rows")
    if np.any(~np.isfinite(freq)):
        raise IngestError("non-finite frequency value")
    if np.any(np.diff(freq) <= 0.0):
        raise IngestError("non-monotone frequency")
    temperature, power, resonator = meta
    return SweepRecord(
        frequencies_hz=freq,
        s21=np.asarray(re_part, dtype=float) + 1j * np.asarray(im_part, dtype=float),
        temperature_k=temperature,
        applied_power_dbm=power - attenuation_db,
        resonator_id=resonator,
    )


def read_trace_csv(path: str, attenuation_db: float = 0.0) -> SweepRecord:
    meta: dict = {}
    freq, re_part, im_part = [], [], []
    header_seen = False
    with open(path, "r", encoding="utf-8") as handle:
        for raw in handle:
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                _parse_meta_line(line, meta)
                continue
            if not header_seen:
                names = tuple(tok.strip().lower() for tok in line.split(","))
                if names != CSV_HEADER:
                    if names and names[0].startswith("freq") and names[0] != "freq_hz":
                        raise IngestError(
                            f"unit ambiguity: frequency column {names[0]!r}, "
                            "expected 'freq_hz'"
                        )
                    raise IngestError(
                        f"malformed header {','.join(names)!r}; "
                        f"expected {','.join(CSV_HEADER)!r}"
                    )
                header_seen = True
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise IngestError(f"malformed data row: {line!r}")
            try:
                freq.append(float(parts[0]))
                re_part.append(float(parts[1]))
                im_part.append(float(parts[2]))
            except ValueError as exc:
                raise IngestError(f"unparsable data row: {line!r}") from exc
    if not header_seen:
        raise IngestError("malformed header: none found")
    try:
        return _build_record(freq, re_part, im_part,
                             _finish_meta(meta, path), attenuation_db)
    except ValueError as exc:
        raise IngestError(str(exc)) from exc


def read_trace_touchstone(path: str, attenuation_db: float = 0.0) -> SweepRecord:
    meta: dict = {}
    unit_scale = None
    fmt = None
    freq, re_part, im_part = [], [], []
    with open(path, "r", encoding="utf-8") as handle:
        for raw in handle:
            line = raw.strip()
            if not line:
                continue
            if line.startswith("!"):
                _parse_meta_line(line, meta)
                continue
            if line.startswith("#"):
                tokens = line[1:].split()
                # option line: <unit> S <format> R <impedance>; Touchstone
                # defaults are GHz / MA when fields are omitted
                unit_scale = 1e9
                fmt = "ma"
                for tok in tokens:
                    low = tok.lower()
                    if low in _TOUCHSTONE_UNITS:
                        unit_scale = _TOUCHSTONE_UNITS[low]
                    elif low in ("ri", "ma", "db"):
                        fmt = low
                continue
            if unit_scale is None:
                raise IngestError("data before the '#' option line")
            parts = line.split()
            if len(parts) != 9:
                raise IngestError(
                    f"expected 9 columns of two-port data, got {len(parts)}"
                )
            try:
                values = [float(tok) for tok in parts]
            except ValueError as exc:
                raise IngestError(f"unparsable data row: {line!r}") from exc
            freq.append(values[0] * unit_scale)
            a, b = values[3], values[4]  # S21 pair in two-port column order
            if fmt == "ri":
                re_part.append(a)
                im_part.append(b)
            else:
                if fmt == "db":
                    a = 10.0 ** (a / 20.0)
                phase = math.radians(b)
                re_part.append(a * math.cos(phase))
                im_part.append(a * math.sin(phase))
    if unit_scale is None:
        raise IngestError("malformed header: no '#' option line")
    try:
        return _build_record(freq, re_part, im_part,
                             _finish_meta(meta, path), attenuation_db)
    except ValueError as exc:
        raise IngestError(str(exc)) from exc


def _iter_trace_files(paths: Iterable[str]) -> List[str]:
    files: List[str] = []
    for path in paths:
        if os.path.isdir(path):
            for name in sorted(os.listdir(path)):
                if name.lower().endswith((".csv", ".s2p")):
                    files.append(os.path.join(path, name))
        else:
            files.append(path)
    return files


def ingest(paths: Iterable[str], attenuation_db: float = 0.0) -> IngestResult:
    """Read every trace under ``paths`` (files or directories).

    The declared per-file power is shifted down by ``attenuation_db`` to
    the chip reference plane.  Per-file failures land in ``rejected``.
    """
    result = IngestResult()
    for path in _iter_trace_files(paths):
        try:
            if path.lower().endswith(".s2p"):
                record = read_trace_touchstone(path, attenuation_db)
            else:
                record = read_trace_csv(path, attenuation_db)
            result.records.append(record)
        except (IngestError, OSError) as exc:
            result.rejected.append((path, str(exc)))
    return result
