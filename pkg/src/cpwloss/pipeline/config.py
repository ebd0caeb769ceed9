"""Run configuration: one INI-style file, units spelled out in key names.

Example::

    [material:ta40]
    tc_k = 4.06
    n0_per_m3_ev = 6.9e28
    sigma_n_s_per_m = 5.0e6
    gap_model = tanh_interpolation

    [resonator:r0]
    material = ta40
    f_r_hz = 3.654e9
    alpha = 0.005

    [io]
    input_dir = data
    output_dir = out

    [fit]
    beta_lower = 0.1
    beta_upper = 2.0
    regime_threshold = 3.0
    clamp_policy = flag
    reference_plane_attenuation_db = 0.0

plus an optional ``[synth]`` section (grids, noise, background) and one
``[synth.resonator:<name>]`` per simulated resonator.  Config parsing is
fail-fast: any malformed value raises :class:`ConfigError`.
"""

import configparser
import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from ..lossmodel import DEFAULT_BETA_BOUNDS, ResonatorParams, TlsParams
from ..mbcore import GapModel, Material
from ..resfit import Background
from ..synth import ScenarioSpec, SynthResonator


class ConfigError(ValueError):
    """Unusable run configuration."""


_GAP_MODELS = {
    "constant_delta0": GapModel.CONSTANT_DELTA0,
    "constant": GapModel.CONSTANT_DELTA0,
    "tanh_interpolation": GapModel.TANH_INTERPOLATION,
    "tanh": GapModel.TANH_INTERPOLATION,
}


@dataclass(frozen=True)
class FitOptions:
    beta_bounds: Tuple[float, float] = DEFAULT_BETA_BOUNDS
    regime_threshold: float = 3.0
    clamp_policy: str = "flag"  # "flag" records clamps, "strict" drops the point


@dataclass(frozen=True)
class IoPaths:
    input_dir: str = ""
    output_dir: str = "out"


@dataclass(frozen=True)
class RunConfig:
    materials: Dict[str, Material] = field(default_factory=dict)
    resonators: Dict[str, ResonatorParams] = field(default_factory=dict)
    io: IoPaths = IoPaths()
    fit: FitOptions = FitOptions()
    reference_plane_attenuation_db: float = 0.0
    scenario: Optional[ScenarioSpec] = None

    def canonical_hash(self) -> str:
        """Stable hash of the configuration contents (not the file)."""
        blob: dict = {
            "materials": {
                name: [m.tc_k, m.n0_per_m3_ev, m.sigma_n, m.gap_model.value]
                for name, m in sorted(self.materials.items())
            },
            "resonators": {
                name: [r.f_r_hz, r.alpha, r.material.name]
                for name, r in sorted(self.resonators.items())
            },
            "fit": [self.fit.beta_bounds, self.fit.regime_threshold,
                    self.fit.clamp_policy],
            "attenuation_db": self.reference_plane_attenuation_db,
        }
        if self.scenario is not None:
            s = self.scenario
            blob["scenario"] = [
                s.material.name, len(s.resonators),
                list(s.temperature_grid_k), list(s.power_grid_dbm),
                repr(s.snr_db), s.seed, list(s.background),
                s.points_per_trace, s.span_linewidths, s.excess_nqp_per_um3,
            ]
        encoded = json.dumps(blob, sort_keys=True).encode()
        return hashlib.sha256(encoded).hexdigest()


def _get_float(section, key: str, where: str, default=None) -> float:
    raw = section.get(key)
    if raw is None:
        if default is not None:
            return default
        raise ConfigError(f"missing key '{key}' in [{where}]")
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"bad float for '{key}' in [{where}]: {raw!r}") from exc


def _get_grid(section, key: str, where: str) -> Tuple[float, ...]:
    raw = section.get(key)
    if raw is None:
        raise ConfigError(f"missing key '{key}' in [{where}]")
    try:
        return tuple(float(tok) for tok in raw.replace(",", " ").split())
    except ValueError as exc:
        raise ConfigError(f"bad grid for '{key}' in [{where}]: {raw!r}") from exc


def _parse_material(name: str, section) -> Material:
    gap_raw = section.get("gap_model", "tanh_interpolation").strip().lower()
    if gap_raw not in _GAP_MODELS:
        raise ConfigError(
            f"unknown gap_model {gap_raw!r} in [material:{name}]; "
            f"choose from {sorted(set(_GAP_MODELS))}"
        )
    try:
        return Material(
            name=name,
            tc_k=_get_float(section, "tc_k", f"material:{name}"),
            n0_per_m3_ev=_get_float(section, "n0_per_m3_ev", f"material:{name}"),
            sigma_n=_get_float(section, "sigma_n_s_per_m", f"material:{name}"),
            gap_model=_GAP_MODELS[gap_raw],
        )
    except ValueError as exc:
        raise ConfigError(f"invalid [material:{name}]: {exc}") from exc


def load_config(path) -> RunConfig:
    parser = configparser.ConfigParser(interpolation=None)
    read = parser.read(path)
    if not read:
        raise ConfigError(f"cannot read config file {path!r}")

    materials: Dict[str, Material] = {}
    resonators: Dict[str, ResonatorParams] = {}
    synth_resonators = []

    for section_name in parser.sections():
        if section_name.startswith("material:"):
            name = section_name.split(":", 1)[1]
            materials[name] = _parse_material(name, parser[section_name])

    for section_name in parser.sections():
        if section_name.startswith("resonator:"):
            name = section_name.split(":", 1)[1]
            section = parser[section_name]
            mat_name = section.get("material")
            if mat_name is None or mat_name not in materials:
                raise ConfigError(
                    f"[{section_name}] references undefined material {mat_name!r}"
                )
            try:
                resonators[name] = ResonatorParams(
                    f_r_hz=_get_float(section, "f_r_hz", section_name),
                    alpha=_get_float(section, "alpha", section_name),
                    material=materials[mat_name],
                )
            except ValueError as exc:
                raise ConfigError(f"invalid [{section_name}]: {exc}") from exc

    io = IoPaths(
        input_dir=parser.get("io", "input_dir", fallback=""),
        output_dir=parser.get("io", "output_dir", fallback="out"),
    )

    fit_section = parser["fit"] if parser.has_section("fit") else {}
    beta_lower = _get_float(fit_section, "beta_lower", "fit", DEFAULT_BETA_BOUNDS[0])
    beta_upper = _get_float(fit_section, "beta_upper", "fit", DEFAULT_BETA_BOUNDS[1])
    if not 0.0 < beta_lower < beta_upper:
        raise ConfigError("beta bounds must satisfy 0 < beta_lower < beta_upper")
    clamp_policy = (fit_section.get("clamp_policy", "flag") or "flag").strip().lower()
    if clamp_policy not in ("flag", "strict"):
        raise ConfigError("clamp_policy must be 'flag' or 'strict'")
    attenuation = _get_float(fit_section, "reference_plane_attenuation_db", "fit", 0.0)
    if attenuation < 0.0:
        raise ConfigError("reference_plane_attenuation_db must be >= 0")
    fit = FitOptions(
        beta_bounds=(beta_lower, beta_upper),
        regime_threshold=_get_float(fit_section, "regime_threshold", "fit", 3.0),
        clamp_policy=clamp_policy,
    )

    scenario = None
    if parser.has_section("synth"):
        synth = parser["synth"]
        mat_name = synth.get("material")
        if mat_name is None or mat_name not in materials:
            raise ConfigError(f"[synth] references undefined material {mat_name!r}")
        material = materials[mat_name]
        for section_name in parser.sections():
            if not section_name.startswith("synth.resonator:"):
                continue
            name = section_name.split(":", 1)[1]
            section = parser[section_name]
            res = resonators.get(name)
            if res is None:
                raise ConfigError(
                    f"[{section_name}] has no matching [resonator:{name}]"
                )
            if res.material is not material:
                raise ConfigError(
                    f"[{section_name}] resonator is not made of [synth] material"
                )
            try:
                tls = TlsParams(
                    inv_q_tls0=_get_float(section, "inv_q_tls0", section_name),
                    n_c=_get_float(section, "n_c", section_name),
                    beta=_get_float(section, "beta", section_name),
                )
                synth_resonators.append(SynthResonator(
                    params=res,
                    tls=tls,
                    q_c_abs=_get_float(section, "q_c_abs", section_name),
                    phi0=_get_float(section, "phi0_rad", section_name, 0.0),
                    resonator_id=name,
                ))
            except ValueError as exc:
                raise ConfigError(f"invalid [{section_name}]: {exc}") from exc
        if not synth_resonators:
            raise ConfigError("[synth] present but no [synth.resonator:*] sections")
        snr_raw = (synth.get("snr_db", "inf") or "inf").strip().lower()
        snr_db = math.inf if snr_raw in ("inf", "+inf", "none") else float(snr_raw)
        background = Background(
            amplitude=_get_float(synth, "background_amplitude", "synth", 1.0),
            phase_offset=_get_float(synth, "background_phase_rad", "synth", 0.0),
            electrical_delay=_get_float(synth, "electrical_delay_s", "synth", 0.0),
        )
        try:
            scenario = ScenarioSpec(
                material=material,
                resonators=tuple(synth_resonators),
                temperature_grid_k=_get_grid(synth, "temperature_grid_k", "synth"),
                power_grid_dbm=_get_grid(synth, "power_grid_dbm", "synth"),
                snr_db=snr_db,
                seed=int(_get_float(synth, "seed", "synth", 0.0)),
                background=background,
                points_per_trace=int(_get_float(synth, "points_per_trace", "synth", 1201.0)),
                span_linewidths=_get_float(synth, "span_linewidths", "synth", 8.0),
                excess_nqp_per_um3=_get_float(synth, "excess_nqp_per_um3", "synth", 0.0),
            )
        except ValueError as exc:
            raise ConfigError(f"invalid [synth] scenario: {exc}") from exc

    return RunConfig(
        materials=materials,
        resonators=resonators,
        io=io,
        fit=fit,
        reference_plane_attenuation_db=attenuation,
        scenario=scenario,
    )
