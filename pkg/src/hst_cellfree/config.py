"""System and experiment parameters for the high-speed-train uplink model.

Powers are stored in watts and speeds in m/s. dBm and km/h only appear while
parsing or rendering config documents. Config documents are TOML; power and
speed keys carry a unit suffix, e.g. ``tx_power_dbm`` or ``tx_power_w``.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Any, Mapping

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

__all__ = [
    "ConfigError",
    "SystemConfig",
    "dbm_to_watts",
    "watts_to_dbm",
    "kmh_to_mps",
    "parse_config",
    "load_config",
    "render_config",
    "config_from_mapping",
    "max_normalized_dfo",
    "default_config",
]

LAYOUTS = ("equispaced", "uniform_random")


class ConfigError(ValueError):
    """Raised for missing, unknown or out-of-range configuration keys."""


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def watts_to_dbm(watts: float) -> float:
    return 10.0 * math.log10(watts) + 30.0


def kmh_to_mps(kmh: float) -> float:
    return kmh / 3.6


@dataclass(frozen=True)
class SystemConfig:
    """Physical and simulation parameters.

    The instance is validated on construction and immutable afterwards.

    Attributes
    ----------
    carrier_freq_hz : float
        Carrier frequency f.
    train_speed_mps : float
        Train speed v.
    sample_duration_s : float
        OFDM sampling duration T.
    num_subcarriers, num_aps, antennas_per_ap, num_tas : int
        M, L, N and K.
    tx_power_w, noise_power_w : float
        Per-TA transmit power and receiver noise power, watts.
    pathloss_exponent : float
        alpha in [2, 6].
    antenna_spacing : float
        ULA spacing in wavelengths, in (0, 0.5].
    step_distance_m : float
        Distance the train covers per time interval; also the spacing of the
        position grid used for averages.
    position_range_m : float
        Half-width of the train's moving range, positions span
        [-position_range_m, position_range_m].
    ui_sum_includes_diagonal : bool
        Inter-TA interference summed over all subcarriers m (True, default)
        or only m != s (False).
    """

    carrier_freq_hz: float = 2e9
    train_speed_mps: float = 300 / 3.6
    sample_duration_s: float = 5e-4
    light_speed_mps: float = 2.99792458e8
    num_subcarriers: int = 64
    num_aps: int = 20
    antennas_per_ap: int = 2
    num_tas: int = 8
    tx_power_w: float = 0.2
    noise_power_w: float = dbm_to_watts(-96.0)
    pathloss_exponent: float = 2.0
    antenna_spacing: float = 0.5
    railway_length_m: float = 1000.0
    train_length_m: float = 200.0
    vertical_distance_m: float = 50.0
    ap_layout: str = "equispaced"
    seed: int = 0
    step_distance_m: float = 10.0
    position_range_m: float = 300.0
    bandwidth_hz: float = 20e6
    ui_sum_includes_diagonal: bool = True

    def __post_init__(self) -> None:
        positive = (
            "carrier_freq_hz",
            "sample_duration_s",
            "light_speed_mps",
            "tx_power_w",
            "noise_power_w",
            "railway_length_m",
            "train_length_m",
            "vertical_distance_m",
            "step_distance_m",
            "bandwidth_hz",
        )
        for name in positive:
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ConfigError(f"{name} must be positive, got {value!r}")
        for name in ("num_subcarriers", "num_aps", "antennas_per_ap", "num_tas"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ConfigError(f"{name} must be an integer >= 1, got {value!r}")
        if not (math.isfinite(self.train_speed_mps) and self.train_speed_mps >= 0):
            raise ConfigError(f"train_speed_mps must be >= 0, got {self.train_speed_mps!r}")
        if not 2.0 <= self.pathloss_exponent <= 6.0:
            raise ConfigError("pathloss_exponent out of [2,6]")
        if not 0.0 < self.antenna_spacing <= 0.5:
            raise ConfigError("antenna_spacing out of (0,0.5]")
        if self.position_range_m < 0:
            raise ConfigError("position_range_m must be >= 0")
        if self.ap_layout not in LAYOUTS:
            raise ConfigError(f"ap_layout must be one of {LAYOUTS}, got {self.ap_layout!r}")
        w = max_normalized_dfo(self)
        if abs(w) >= self.num_subcarriers / 2:
            raise ConfigError(
                f"max normalized DFO {w:.4g} must be below num_subcarriers/2"
            )

    def replace(self, **changes: Any) -> "SystemConfig":
        return dataclasses.replace(self, **changes)

    @property
    def position_indices(self) -> range:
        """Time-interval indices n covering the moving range."""
        n_max = int(math.floor(self.position_range_m / self.step_distance_m + 1e-9))
        return range(-n_max, n_max + 1)


def max_normalized_dfo(cfg: SystemConfig) -> float:
    """Maximum normalized Doppler offset w = f v T / c."""
    return (
        cfg.carrier_freq_hz * cfg.train_speed_mps * cfg.sample_duration_s / cfg.light_speed_mps
    )


def default_config(**changes: Any) -> SystemConfig:
    """Baseline high-speed-train scenario (L=20, K=8, N=2, 300 km/h)."""
    return SystemConfig(**changes)


# keys that take a unit suffix in documents -> (field, {suffix: converter})
_UNIT_KEYS = {
    "tx_power": ("tx_power_w", {"w": float, "dbm": dbm_to_watts}),
    "noise_power": ("noise_power_w", {"w": float, "dbm": dbm_to_watts}),
    "train_speed": ("train_speed_mps", {"mps": float, "kmh": kmh_to_mps}),
}
_INT_FIELDS = {"num_subcarriers", "num_aps", "antennas_per_ap", "num_tas", "seed"}
_REQUIRED = (
    "carrier_freq_hz",
    "train_speed",
    "sample_duration_s",
    "num_subcarriers",
    "num_aps",
    "antennas_per_ap",
    "num_tas",
    "tx_power",
    "noise_power",
    "vertical_distance_m",
)


def config_from_mapping(doc: Mapping[str, Any], base: SystemConfig | None = None) -> SystemConfig:
    """Build a config from a flat key/value mapping.

    With ``base`` given, keys are treated as overrides and none is required.
    """
    fields = {f.name for f in dataclasses.fields(SystemConfig)}
    values: dict[str, Any] = {}
    seen_prefixes = set()
    for key, raw in doc.items():
        handled = False
        for prefix, (field, units) in _UNIT_KEYS.items():
            if key.startswith(prefix + "_"):
                suffix = key[len(prefix) + 1:]
                if suffix not in units:
                    raise ConfigError(f"unknown key {key!r}")
                if prefix in seen_prefixes:
                    raise ConfigError(f"{prefix} given more than once")
                seen_prefixes.add(prefix)
                values[field] = units[suffix](_number(key, raw))
                handled = True
                break
        if handled:
            continue
        if key not in fields:
            raise ConfigError(f"unknown key {key!r}")
        if key in _INT_FIELDS:
            if isinstance(raw, bool) or not isinstance(raw, int):
                raise ConfigError(f"{key} must be an integer, got {raw!r}")
            values[key] = raw
        elif key == "ap_layout":
            values[key] = str(raw)
        elif key == "ui_sum_includes_diagonal":
            if not isinstance(raw, bool):
                raise ConfigError(f"{key} must be a boolean")
            values[key] = raw
        else:
            values[key] = _number(key, raw)

    if base is None:
        for key in _REQUIRED:
            present = key in seen_prefixes if key in _UNIT_KEYS else key in values
            if not present:
                raise ConfigError(f"missing key {key!r}")
        return SystemConfig(**values)
    return dataclasses.replace(base, **values)


def _number(key: str, raw: Any) -> float:
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise ConfigError(f"{key} must be a number, got {raw!r}")
    return float(raw)


def parse_config(text: str) -> SystemConfig:
    """Parse a TOML config document into a validated :class:`SystemConfig`."""
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"malformed config: {exc}") from exc
    return config_from_mapping(doc)


def load_config(path) -> SystemConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def render_config(cfg: SystemConfig) -> str:
    """Render ``cfg`` as a TOML document that parses back to an equal config."""
    lines = []
    for f in dataclasses.fields(SystemConfig):
        value = getattr(cfg, f.name)
        key = f.name
        if isinstance(value, bool):
            text = "true" if value else "false"
        elif isinstance(value, int):
            text = str(value)
        elif isinstance(value, float):
            text = repr(value)
        else:
            text = f'"{value}"'
        lines.append(f"{key} = {text}")
    return "\n".join(lines) + "\n"
