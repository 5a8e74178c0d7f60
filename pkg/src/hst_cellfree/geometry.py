"""2D railway geometry, LoS path loss and ULA steering vectors.

The origin sits at the railway midpoint. APs lie on the line y = d_ve, train
antennas (TAs) on y = 0; the cellular BS is at (0, d_ve).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import SystemConfig

__all__ = [
    "NetworkLayout",
    "LinkGeometry",
    "build_layout",
    "ta_position",
    "ta_positions",
    "link_geometry",
    "path_loss",
    "steering_vector",
]


@dataclass(frozen=True)
class NetworkLayout:
    ap_positions: np.ndarray  # (L, 2)
    ta_ref_abscissas: np.ndarray  # (K,)
    bs_position: np.ndarray  # (2,)

    @property
    def num_aps(self) -> int:
        return self.ap_positions.shape[0]

    @property
    def num_tas(self) -> int:
        return self.ta_ref_abscissas.shape[0]


@dataclass(frozen=True)
class LinkGeometry:
    distance_m: float
    cos_aoa: float
    sin_azimuth: float


def build_layout(cfg: SystemConfig) -> NetworkLayout:
    """Place APs along the railway, TAs along the train and the BS at the centre.

    ``equispaced`` puts AP l at the midpoint of the l-th of L equal railway
    segments. ``uniform_random`` draws abscissas uniformly over the railway
    from ``cfg.seed`` and sorts them.
    """
    L, K = cfg.num_aps, cfg.num_tas
    half = cfg.railway_length_m / 2
    if cfg.ap_layout == "equispaced":
        a = -half + (np.arange(L) + 0.5) * cfg.railway_length_m / L
    else:
        rng = np.random.default_rng(cfg.seed)
        a = np.sort(rng.uniform(-half, half, size=L))
    aps = np.column_stack([a, np.full(L, cfg.vertical_distance_m)])
    ta = -cfg.train_length_m / 2 + (np.arange(K) + 0.5) * cfg.train_length_m / K
    bs = np.array([0.0, cfg.vertical_distance_m])
    return NetworkLayout(ap_positions=aps, ta_ref_abscissas=ta, bs_position=bs)


def ta_position(layout: NetworkLayout, k: int, n: int, d: float) -> np.ndarray:
    """Position of TA ``k`` (1-based) after ``n`` intervals of length ``d``.

    Negative ``n`` moves the train backwards.
    """
    if not 1 <= k <= layout.num_tas:
        raise IndexError(f"TA index {k} out of range 1..{layout.num_tas}")
    return np.array([layout.ta_ref_abscissas[k - 1] + d * n, 0.0])


def ta_positions(layout: NetworkLayout, n: int, d: float) -> np.ndarray:
    """All TA positions at interval ``n``, shape (K, 2)."""
    x = layout.ta_ref_abscissas + d * n
    return np.column_stack([x, np.zeros_like(x)])


def link_geometry(ap, ta) -> LinkGeometry:
    """Distance and AoA cosine from TA to AP.

    The cosine is the signed horizontal offset (AP minus TA) over the distance;
    the azimuth sine equals it by construction.
    """
    dx = float(ap[0]) - float(ta[0])
    dy = float(ap[1]) - float(ta[1])
    dist = float(np.hypot(dx, dy))
    cos_aoa = dx / dist
    return LinkGeometry(distance_m=dist, cos_aoa=cos_aoa, sin_azimuth=cos_aoa)


def link_arrays(aps: np.ndarray, tas: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised :func:`link_geometry`: (K, L) distances and AoA cosines."""
    dx = aps[None, :, 0] - tas[:, None, 0]
    dy = aps[None, :, 1] - tas[:, None, 1]
    dist = np.hypot(dx, dy)
    return dist, dx / dist


def path_loss(distance_m, alpha: float):
    """Large-scale gain d**-alpha, no reference-distance normalisation."""
    return np.power(distance_m, -alpha)


def steering_vector(beta: float, sin_azimuth: float, n_antennas: int, d_H: float) -> np.ndarray:
    """LoS ULA channel sqrt(beta) * exp(j 2 pi d_H lambda sin_azimuth), lambda = 0..N-1."""
    lam = np.arange(n_antennas)
    return np.sqrt(beta) * np.exp(2j * np.pi * d_H * lam * sin_azimuth)
