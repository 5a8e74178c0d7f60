"""Position and parameter sweeps, the SE-drop metric and the summary table.

The headline metric at one train position is the SE averaged over all TAs and
subcarriers. Averages over the moving range use the position grid
``cfg.position_indices`` (train offsets n * step_distance_m).
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .config import SystemConfig, kmh_to_mps, max_normalized_dfo
from .geometry import NetworkLayout, build_layout, link_arrays, path_loss, ta_positions
from .ici import normalized_dfo
from .se_baselines import CellularStats, cellular_se_grid, small_cell_se_grid
from .se_cf import LinkStatistics, cf_se_grid

__all__ = [
    "SYSTEMS",
    "VARIABLES",
    "SweepSpec",
    "SweepRow",
    "SweepResult",
    "Table1Row",
    "TABLE1_SCENARIOS",
    "link_statistics",
    "cellular_statistics",
    "se_grid",
    "se_at_position",
    "position_profile",
    "run_sweep",
    "drop_percentage",
    "table1",
    "SWEEP_SCHEMA",
    "POSITION_SCHEMA",
    "TABLE1_SCHEMA",
]

SYSTEMS = ("cf_mf", "cf_lsfd", "small_cell", "cellular")
VARIABLES = ("position", "speed", "vertical_distance", "num_aps", "antennas_per_ap", "num_tas")

SWEEP_SCHEMA = "# hst-se sweep v1"
POSITION_SCHEMA = "# hst-se position-sweep v1"
TABLE1_SCHEMA = "# hst-se table1 v1"


def link_statistics(cfg: SystemConfig, n: int, layout: NetworkLayout | None = None) -> LinkStatistics:
    """Large-scale statistics of all TA-AP links with the train at interval ``n``."""
    layout = build_layout(cfg) if layout is None else layout
    tas = ta_positions(layout, n, cfg.step_distance_m)
    dist, cos_aoa = link_arrays(layout.ap_positions, tas)
    return LinkStatistics(
        beta=path_loss(dist, cfg.pathloss_exponent),
        sin_az=cos_aoa,
        eps=normalized_dfo(max_normalized_dfo(cfg), cos_aoa),
        n_antennas=cfg.antennas_per_ap,
        d_H=cfg.antenna_spacing,
        num_subcarriers=cfg.num_subcarriers,
        tx_power_w=np.full(cfg.num_tas, cfg.tx_power_w),
        noise_power_w=cfg.noise_power_w,
    )


def cellular_statistics(cfg: SystemConfig, n: int, layout: NetworkLayout | None = None) -> CellularStats:
    layout = build_layout(cfg) if layout is None else layout
    tas = ta_positions(layout, n, cfg.step_distance_m)
    dist, cos_aoa = link_arrays(layout.bs_position[None, :], tas)
    return CellularStats(
        beta=path_loss(dist[:, 0], cfg.pathloss_exponent),
        sin_az=cos_aoa[:, 0],
        eps=normalized_dfo(max_normalized_dfo(cfg), cos_aoa[:, 0]),
        total_antennas=cfg.num_aps * cfg.antennas_per_ap,
        num_subcarriers=cfg.num_subcarriers,
        d_H=cfg.antenna_spacing,
    )


def se_grid(cfg: SystemConfig, n: int, system: str,
            layout: NetworkLayout | None = None) -> np.ndarray:
    """Per-(TA, subcarrier) SE at interval ``n``, shape (K, M)."""
    layout = build_layout(cfg) if layout is None else layout
    if system in ("cf_mf", "cf_lsfd"):
        stats = link_statistics(cfg, n, layout)
        return cf_se_grid(stats, system[3:], cfg.ui_sum_includes_diagonal)
    if system == "small_cell":
        return small_cell_se_grid(link_statistics(cfg, n, layout))[0]
    if system == "cellular":
        cstats = cellular_statistics(cfg, n, layout)
        return cellular_se_grid(cstats, np.full(cfg.num_tas, cfg.tx_power_w), cfg.noise_power_w)
    raise ValueError(f"unknown system {system!r}; expected one of {SYSTEMS}")


def se_at_position(cfg: SystemConfig, n: int, system: str,
                   layout: NetworkLayout | None = None) -> float:
    """SE averaged over TAs and subcarriers, bit/s/Hz."""
    return float(np.mean(se_grid(cfg, n, system, layout)))


def position_profile(cfg: SystemConfig, system: str,
                     layout: NetworkLayout | None = None) -> tuple[np.ndarray, np.ndarray]:
    """(positions_m, se) over the moving range."""
    layout = build_layout(cfg) if layout is None else layout
    idx = np.array(cfg.position_indices)
    se = np.array([se_at_position(cfg, int(n), system, layout) for n in idx])
    return idx * cfg.step_distance_m, se


def drop_percentage(series: Iterable[float]) -> float:
    """(max - min) / max of an SE series."""
    values = np.asarray(list(series), dtype=float)
    if values.size == 0:
        raise ValueError("empty SE series")
    if np.any(values < 0):
        raise ValueError("SE values must be non-negative")
    top = values.max()
    if top <= 0:
        raise ValueError("drop percentage undefined for an all-zero series")
    return float((top - values.min()) / top)


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    values: Sequence[float]
    systems: Sequence[str] = SYSTEMS
    base: SystemConfig = field(default_factory=SystemConfig)

    def __post_init__(self):
        if self.variable not in VARIABLES:
            raise ValueError(f"unknown sweep variable {self.variable!r}")
        if len(self.values) == 0:
            raise ValueError("sweep values must be non-empty")
        diffs = np.diff(np.asarray(self.values, dtype=float))
        if not (np.all(diffs > 0) or np.all(diffs < 0)):
            raise ValueError("sweep values must be strictly monotone")
        bad = [s for s in self.systems if s not in SYSTEMS]
        if bad:
            raise ValueError(f"unknown systems {bad}")


@dataclass(frozen=True)
class SweepRow:
    value: float
    system: str
    se_mean: float
    se_min: float
    se_max: float


@dataclass
class SweepResult:
    variable: str
    rows: list[SweepRow]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if self.variable == "position":
            buf.write(POSITION_SCHEMA + "\n")
            writer.writerow(["position_m", "system", "se"])
            for r in self.rows:
                writer.writerow([_fmt(r.value), r.system, _fmt(r.se_mean)])
        else:
            buf.write(SWEEP_SCHEMA + f" variable={self.variable}\n")
            writer.writerow(["value", "system", "se_mean"])
            for r in self.rows:
                writer.writerow([_fmt(r.value), r.system, _fmt(r.se_mean)])
        return buf.getvalue()

    def series(self, system: str) -> tuple[np.ndarray, np.ndarray]:
        rows = [r for r in self.rows if r.system == system]
        return np.array([r.value for r in rows]), np.array([r.se_mean for r in rows])


def _fmt(x: float) -> str:
    return repr(float(x))


def _apply(cfg: SystemConfig, variable: str, value: float) -> SystemConfig:
    if variable == "speed":
        return cfg.replace(train_speed_mps=kmh_to_mps(value))
    if variable == "vertical_distance":
        return cfg.replace(vertical_distance_m=float(value))
    if variable in ("num_aps", "antennas_per_ap", "num_tas"):
        if float(value) != int(value):
            raise ValueError(f"{variable} values must be integers")
        return cfg.replace(**{variable: int(value)})
    raise ValueError(variable)


def run_sweep(spec: SweepSpec) -> SweepResult:
    """Evaluate every (value, system) point of ``spec`` in order.

    Speed values are in km/h, vertical distances and positions in metres.
    Position values are snapped to the nearest multiple of the step distance.
    """
    rows = []
    if spec.variable == "position":
        cfg = spec.base
        layout = build_layout(cfg)
        for x in spec.values:
            n = int(round(x / cfg.step_distance_m))
            for system in spec.systems:
                se = se_at_position(cfg, n, system, layout)
                rows.append(SweepRow(float(x), system, se, se, se))
        return SweepResult(spec.variable, rows)

    for value in spec.values:
        cfg = _apply(spec.base, spec.variable, value)
        layout = build_layout(cfg)
        for system in spec.systems:
            _, se = position_profile(cfg, system, layout)
            rows.append(SweepRow(float(value), system, float(se.mean()),
                                 float(se.min()), float(se.max())))
    return SweepResult(spec.variable, rows)


@dataclass(frozen=True)
class Table1Row:
    system: str
    num_aps: int
    vertical_distance_m: float
    largest_se: float
    smallest_se: float
    drop: float


# (system, L, d_ve)
TABLE1_SCENARIOS = (
    ("cf_mf", 20, 50.0),
    ("small_cell", 20, 50.0),
    ("cellular", 20, 50.0),
    ("cf_lsfd", 20, 50.0),
    ("cf_lsfd", 30, 50.0),
    ("cf_lsfd", 20, 200.0),
)


def table1(base: SystemConfig | None = None, num_layouts: int = 1) -> list[Table1Row]:
    """Largest/smallest SE over the moving range and the drop percentage.

    With ``num_layouts > 1`` the position profile is averaged over that many
    uniform-random AP layouts drawn from seeds ``base.seed + r``.
    """
    base = SystemConfig() if base is None else base
    rows = []
    for system, L, d_ve in TABLE1_SCENARIOS:
        cfg = base.replace(num_aps=L, vertical_distance_m=d_ve)
        if num_layouts > 1:
            profiles = []
            for r in range(num_layouts):
                c = cfg.replace(ap_layout="uniform_random", seed=base.seed + r)
                profiles.append(position_profile(c, system)[1])
            se = np.mean(profiles, axis=0)
        else:
            se = position_profile(cfg, system)[1]
        rows.append(Table1Row(system, L, d_ve, float(se.max()), float(se.min()),
                              drop_percentage(se)))
    return rows


def table1_csv(rows: Sequence[Table1Row]) -> str:
    buf = io.StringIO()
    buf.write(TABLE1_SCHEMA + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["system", "num_aps", "vertical_distance_m", "largest_se",
                     "smallest_se", "drop_percentage"])
    for r in rows:
        writer.writerow([r.system, r.num_aps, _fmt(r.vertical_distance_m),
                         _fmt(r.largest_se), _fmt(r.smallest_se), _fmt(r.drop)])
    return buf.getvalue()

