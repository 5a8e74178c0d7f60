"""Small-cell and colocated cellular baselines.

Small cell: each TA is decoded by a single AP, the one giving the highest SE.
Cellular: one BS with all L*N antennas at the railway midpoint, MR combining.
Both share the same per-receiver SINR form::

    SINR = p_k G^2 beta_k^2 |I_k[0]|^2
           / (p_k G^2 beta_k^2 sum_{m!=s} |I_k[m-s]|^2
              + sum_{i!=k} p_i beta_k beta_i mu_ki * w_i + sigma^2 G beta_k)

with G the receiver's antenna count and mu the Fejer kernel. With the all-m
inter-TA convention (default) the ICI power weight w_i is one, as printed;
with the m != s convention it is sum_{m!=s} |I_i[m-s]|^2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ici import ici_kernel, ici_tensor
from .se_cf import ANGLE_TOL, LinkStatistics

__all__ = [
    "CellularStats",
    "mu",
    "small_cell_sinr",
    "se_small_cell",
    "se_cellular",
    "small_cell_se_grid",
    "cellular_se_grid",
]


@dataclass(frozen=True)
class CellularStats:
    """Per-TA statistics towards the colocated BS, length-K arrays."""

    beta: np.ndarray
    sin_az: np.ndarray
    eps: np.ndarray
    total_antennas: int
    num_subcarriers: int
    d_H: float = 0.5

    def __post_init__(self):
        if np.any(~(self.beta > 0)):
            raise ValueError("beta must be positive")
        if np.any(np.abs(self.sin_az) > 1 + 1e-12):
            raise ValueError("|sin_az| must not exceed 1")

    @property
    def num_tas(self) -> int:
        return self.beta.shape[0]


def mu(sin_k, sin_i, n_antennas: int, d_H: float):
    """Fejer kernel sin^2(pi d_H N delta) / sin^2(pi d_H delta); N^2 where 0/0."""
    delta = np.asarray(sin_i, dtype=float) - np.asarray(sin_k, dtype=float)
    half = np.pi * d_H * delta
    den = np.sin(half)
    degenerate = (np.abs(delta) < ANGLE_TOL) | (np.abs(den) < ANGLE_TOL)
    safe = np.where(degenerate, 1.0, den)
    val = np.sin(n_antennas * half) ** 2 / safe**2
    out = np.where(degenerate, float(n_antennas) ** 2, val)
    return out if out.ndim else float(out)


def _ici_off_power(eps, M: int, s: int):
    """sum_{m != s} |I[m - s]|^2, computed term by term."""
    m = np.arange(1, M + 1)
    eps = np.asarray(eps, dtype=float)
    powers = np.abs(ici_kernel(eps[..., None] + m - s, M)) ** 2
    return powers.sum(axis=-1) - powers[..., s - 1]


def _sinr(beta_k, beta_i, eps_k, eps_i, mu_ki, p_k, p_i, sigma2, G, M, s,
          include_diagonal):
    I0 = abs(ici_kernel(eps_k, M)) ** 2
    gain = p_k * G**2 * beta_k**2
    ici = gain * _ici_off_power(eps_k, M, s)
    weight = 1.0 if include_diagonal else _ici_off_power(eps_i, M, s)
    ui = np.sum(p_i * beta_k * beta_i * mu_ki * weight)
    return gain * I0 / (ici + ui + sigma2 * G * beta_k)


def small_cell_sinr(stats: LinkStatistics, k: int, l: int, s: int,
                    ui_sum_includes_diagonal: bool = True) -> float:
    """SINR of TA ``k`` decoded at AP ``l`` alone (1-based indices)."""
    kk, ll = k - 1, l - 1
    others = np.array([i for i in range(stats.num_tas) if i != kk], dtype=int)
    p = np.asarray(stats.tx_power_w, dtype=float)
    mu_ki = mu(stats.sin_az[kk, ll], stats.sin_az[others, ll], stats.n_antennas, stats.d_H)
    return float(_sinr(
        stats.beta[kk, ll], stats.beta[others, ll], stats.eps[kk, ll], stats.eps[others, ll],
        mu_ki, p[kk], p[others], stats.noise_power_w, stats.n_antennas,
        stats.num_subcarriers, s, ui_sum_includes_diagonal,
    ))


def se_small_cell(stats: LinkStatistics, k: int, s: int,
                  ui_sum_includes_diagonal: bool = True) -> tuple[float, int]:
    """Best single-AP SE for TA ``k`` and the 1-based AP achieving it.

    Ties go to the lowest AP index.
    """
    if not 1 <= k <= stats.num_tas:
        raise IndexError(f"TA index {k} out of range 1..{stats.num_tas}")
    if not 1 <= s <= stats.num_subcarriers:
        raise IndexError(f"subcarrier index {s} out of range 1..{stats.num_subcarriers}")
    ses = [np.log2(1 + small_cell_sinr(stats, k, l, s, ui_sum_includes_diagonal))
           for l in range(1, stats.num_aps + 1)]
    best = int(np.argmax(ses))
    return float(ses[best]), best + 1


def se_cellular(cstats: CellularStats, k: int, s: int, powers, sigma2: float,
                L: int, N: int, ui_sum_includes_diagonal: bool = True) -> float:
    """SE of TA ``k`` at the colocated BS with L*N antennas."""
    K, M = cstats.num_tas, cstats.num_subcarriers
    if not 1 <= k <= K:
        raise IndexError(f"TA index {k} out of range 1..{K}")
    if not 1 <= s <= M:
        raise IndexError(f"subcarrier index {s} out of range 1..{M}")
    G = L * N
    if G != cstats.total_antennas:
        raise ValueError(f"L*N = {G} does not match total_antennas = {cstats.total_antennas}")
    kk = k - 1
    others = np.array([i for i in range(K) if i != kk], dtype=int)
    p = np.asarray(powers, dtype=float)
    mu_ki = mu(cstats.sin_az[kk], cstats.sin_az[others], G, cstats.d_H)
    sinr = _sinr(
        cstats.beta[kk], cstats.beta[others], cstats.eps[kk], cstats.eps[others],
        mu_ki, p[kk], p[others], sigma2, G, M, s, ui_sum_includes_diagonal,
    )
    return float(np.log2(1 + sinr))


def _grid_sinr(beta, sin_az, eps, p, sigma2, G, d_H, M, include_diagonal):
    """Vectorised single-receiver SINR.

    ``beta``, ``sin_az`` and ``eps`` are (K, R) over R candidate receivers;
    returns (K, R, M) indexed by target subcarrier.
    """
    K = beta.shape[0]
    I = ici_tensor(eps, M)  # (K, R, m, s)
    pw = np.abs(I) ** 2
    I0 = np.abs(ici_kernel(eps, M)) ** 2  # (K, R)
    off = pw.sum(axis=-2) - I0[..., None]  # (K, R, s)
    gain = (p[:, None] * G**2) * beta**2  # (K, R)
    mu_kir = mu(sin_az[:, None, :], sin_az[None, :, :], G, d_H)  # (K, K, R)
    mask = ~np.eye(K, dtype=bool)
    coupling = p[None, :, None] * beta[:, None, :] * beta[None, :, :] * mu_kir * mask[..., None]
    if include_diagonal:
        ui = coupling.sum(axis=1)[..., None]  # (K, R, 1)
    else:
        ui = np.einsum("kir,irs->krs", coupling, off)
    den = gain[..., None] * off + ui + (sigma2 * G * beta)[..., None]
    return (gain * I0)[..., None] / den


def small_cell_se_grid(stats: LinkStatistics, ui_sum_includes_diagonal: bool = True):
    """Small-cell SE for every (TA, subcarrier) and the chosen AP (1-based).

    Returns two (K, M) arrays.
    """
    sinr = _grid_sinr(stats.beta, stats.sin_az, stats.eps,
                      np.asarray(stats.tx_power_w, dtype=float), stats.noise_power_w,
                      stats.n_antennas, stats.d_H, stats.num_subcarriers,
                      ui_sum_includes_diagonal)
    se = np.log2(1 + sinr)  # (K, L, M)
    best = np.argmax(se, axis=1)
    return np.take_along_axis(se, best[:, None, :], axis=1)[:, 0, :], best + 1


def cellular_se_grid(cstats: CellularStats, powers, sigma2: float,
                     ui_sum_includes_diagonal: bool = True) -> np.ndarray:
    """Cellular SE for every (TA, subcarrier), shape (K, M)."""
    sinr = _grid_sinr(cstats.beta[:, None], cstats.sin_az[:, None], cstats.eps[:, None],
                      np.asarray(powers, dtype=float), sigma2, cstats.total_antennas,
                      cstats.d_H, cstats.num_subcarriers, ui_sum_includes_diagonal)
    return np.log2(1 + sinr[:, 0, :])
