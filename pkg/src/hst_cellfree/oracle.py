"""Brute-force reference evaluation of the SINR terms.

Everything here works from explicit channel vectors and ICI rows: desired
signal, inter-carrier and inter-TA interference and noise are accumulated as
literal inner products, in extended precision, with no use of the
eta / mu closed forms. The closed-form modules are checked against it.

:func:`dft_consistency_check` validates the ICI kernel itself. A tone offset of
``eps`` subcarrier spacings is applied in the time domain as a per-sample
phase rotation exp(j 2 pi eps n / M); under that convention the DFT leakage
between subcarriers is exactly the Dirichlet ICI kernel.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import steering_vector
from .ici import ici_row
from .se_baselines import CellularStats
from .se_cf import LinkStatistics

__all__ = [
    "ExplicitChannels",
    "explicit_channels",
    "cf_ici_rows",
    "cellular_ici_rows",
    "sinr_terms_cf",
    "direct_sinr_cf",
    "direct_se_cf",
    "direct_sinr_small_cell",
    "direct_sinr_cellular",
    "dft_consistency_check",
    "random_instance",
    "verify_instance",
    "run_verification",
]

XC = np.clongdouble


@dataclass(frozen=True)
class ExplicitChannels:
    """``h[k, l]`` is the length-N channel of TA k at AP l (0-based arrays).

    ``cellular[k]`` is the length-LN channel of TA k at the BS, if built.
    """

    h: np.ndarray  # (K, L, N)
    cellular: np.ndarray | None = None  # (K, LN)


def explicit_channels(stats: LinkStatistics, cstats: CellularStats | None = None) -> ExplicitChannels:
    K, L, N = stats.num_tas, stats.num_aps, stats.n_antennas
    h = np.empty((K, L, N), dtype=complex)
    for k in range(K):
        for l in range(L):
            h[k, l] = steering_vector(stats.beta[k, l], stats.sin_az[k, l], N, stats.d_H)
    cell = None
    if cstats is not None:
        G = cstats.total_antennas
        cell = np.array([steering_vector(cstats.beta[k], cstats.sin_az[k], G, cstats.d_H)
                         for k in range(cstats.num_tas)])
    return ExplicitChannels(h=h, cellular=cell)


def cf_ici_rows(stats: LinkStatistics, s: int) -> np.ndarray:
    """ICI coefficients ``rows[i, l, m - 1] = I_il[m - s]`` from :func:`ici_row`."""
    K, L, M = stats.num_tas, stats.num_aps, stats.num_subcarriers
    rows = np.empty((K, L, M), dtype=complex)
    for i in range(K):
        for l in range(L):
            rows[i, l] = ici_row(stats.eps[i, l], s, M).coeffs
    return rows


def cellular_ici_rows(cstats: CellularStats, s: int) -> np.ndarray:
    return np.array([ici_row(e, s, cstats.num_subcarriers).coeffs for e in cstats.eps])


def _inner(x, y) -> complex:
    """x^H y accumulated in extended precision."""
    return np.sum(np.conj(np.asarray(x, dtype=XC)) * np.asarray(y, dtype=XC))


def sinr_terms_cf(channels: ExplicitChannels, rows: np.ndarray, weights, k: int, s: int,
                  powers, sigma2: float, ui_sum_includes_diagonal: bool = True) -> dict:
    """Desired, ICI, inter-TA and noise powers of the CPU output for TA ``k``.

    ``rows`` comes from :func:`cf_ici_rows` for the same ``s``; ``k`` and ``s``
    are 1-based. Flat fading: the channel on every subcarrier is ``h``.
    """
    h = channels.h
    K, L, N = h.shape
    M = rows.shape[-1]
    kk, ss = k - 1, s - 1
    a = np.asarray(weights, dtype=XC)
    p = np.asarray(powers, dtype=np.longdouble)

    ds = sum(np.sqrt(p[kk]) * np.conj(a[l]) * rows[kk, l, ss] * _inner(h[kk, l], h[kk, l])
             for l in range(L))
    ici = 0
    for m in range(M):
        if m == ss:
            continue
        term = sum(np.sqrt(p[kk]) * np.conj(a[l]) * rows[kk, l, m] * _inner(h[kk, l], h[kk, l])
                   for l in range(L))
        ici += abs(term) ** 2
    ui = 0
    for i in range(K):
        if i == kk:
            continue
        for m in range(M):
            if m == ss and not ui_sum_includes_diagonal:
                continue
            term = sum(np.sqrt(p[i]) * np.conj(a[l]) * rows[i, l, m] * _inner(h[kk, l], h[i, l])
                       for l in range(L))
            ui += abs(term) ** 2
    # noise: sum_l a_l^* h_kl^H w_l with w_l ~ CN(0, sigma^2 I)
    ns = sum(abs(a[l]) ** 2 * np.real(_inner(h[kk, l], h[kk, l])) for l in range(L))
    return {
        "desired": abs(ds) ** 2,
        "ici": ici,
        "ui": ui,
        "noise": sigma2 * ns,
    }


def direct_sinr_cf(channels: ExplicitChannels, rows: np.ndarray, weights, k: int, s: int,
                   powers, sigma2: float, ui_sum_includes_diagonal: bool = True) -> float:
    t = sinr_terms_cf(channels, rows, weights, k, s, powers, sigma2, ui_sum_includes_diagonal)
    return float(t["desired"] / (t["ici"] + t["ui"] + t["noise"]))


def direct_se_cf(channels, rows, weights, k, s, powers, sigma2,
                 ui_sum_includes_diagonal: bool = True) -> float:
    sinr = direct_sinr_cf(channels, rows, weights, k, s, powers, sigma2, ui_sum_includes_diagonal)
    return float(np.log2(1 + sinr))


def _single_receiver_sinr(hs: np.ndarray, rows: np.ndarray, k: int, s: int, powers,
                          sigma2: float, include_diagonal: bool) -> float:
    """One receiver with MR combining; ``hs[i]`` is TA i's channel, ``rows[i]`` its ICI row."""
    K = hs.shape[0]
    M = rows.shape[-1]
    kk, ss = k - 1, s - 1
    p = np.asarray(powers, dtype=np.longdouble)
    g = _inner(hs[kk], hs[kk])
    desired = abs(np.sqrt(p[kk]) * rows[kk, ss] * g) ** 2
    ici = sum(abs(np.sqrt(p[kk]) * rows[kk, m] * g) ** 2 for m in range(M) if m != ss)
    ui = 0
    for i in range(K):
        if i == kk:
            continue
        cross = _inner(hs[kk], hs[i])
        for m in range(M):
            if m == ss and not include_diagonal:
                continue
            ui += abs(np.sqrt(p[i]) * rows[i, m] * cross) ** 2
    noise = sigma2 * np.real(g)
    return float(desired / (ici + ui + noise))


def direct_sinr_small_cell(channels: ExplicitChannels, rows: np.ndarray, k: int, l: int, s: int,
                           powers, sigma2: float, ui_sum_includes_diagonal: bool = True) -> float:
    """SINR of TA ``k`` decoded by AP ``l`` alone; ``rows`` from :func:`cf_ici_rows`."""
    return _single_receiver_sinr(channels.h[:, l - 1, :], rows[:, l - 1, :], k, s, powers,
                                 sigma2, ui_sum_includes_diagonal)


def direct_sinr_cellular(channels: ExplicitChannels, rows: np.ndarray, k: int, s: int,
                         powers, sigma2: float, ui_sum_includes_diagonal: bool = True) -> float:
    """SINR of TA ``k`` at the colocated BS; ``rows`` from :func:`cellular_ici_rows`."""
    if channels.cellular is None:
        raise ValueError("channels were built without the cellular BS")
    return _single_receiver_sinr(channels.cellular, rows, k, s, powers, sigma2,
                                 ui_sum_includes_diagonal)


def dft_consistency_check(eps: float, M: int, trials: int = 1, seed: int = 0) -> float:
    """Largest deviation between time-domain simulation and the ICI kernel.

    Random unit-power complex Gaussian symbols are synthesized with an inverse DFT,
    rotated by exp(j 2 pi eps n / M) per sample and transformed back. The
    result is compared with sum_m I[m - s] x[m] for every s.
    """
    if M < 1 or M & (M - 1):
        raise ValueError("M must be a power of two")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    n = np.arange(M)
    kernel = np.array([ici_row(eps, s, M).coeffs for s in range(1, M + 1)])  # (s, m)
    worst = 0.0
    for _ in range(trials):
        x = (rng.standard_normal(M) + 1j * rng.standard_normal(M)) / np.sqrt(2)
        time_signal = np.fft.ifft(x) * np.exp(2j * np.pi * eps * n / M)
        received = np.fft.fft(time_signal)
        predicted = kernel @ x
        worst = max(worst, float(np.max(np.abs(received - predicted))))
    return worst


def random_instance(rng: np.random.Generator, max_aps: int = 5, max_antennas: int = 4,
                    max_tas: int = 3, max_subcarriers: int = 16):
    """Random small network statistics for oracle comparisons.

    Returns ``(stats, cstats)``. About one instance in five forces two TAs to
    share a direction so the equal-angle branches are exercised.
    """
    K = int(rng.integers(1, max_tas + 1))
    L = int(rng.integers(1, max_aps + 1))
    N = int(rng.integers(1, max_antennas + 1))
    M = int(rng.integers(1, max_subcarriers + 1))
    d_H = float(rng.uniform(0.05, 0.5))
    beta = 10 ** rng.uniform(-3, 0, size=(K, L))
    sin_az = rng.uniform(-1, 1, size=(K, L))
    if K > 1 and rng.random() < 0.2:
        sin_az[1] = sin_az[0]
    eps = rng.uniform(-0.5, 0.5, size=(K, L))
    powers = rng.uniform(0.1, 2.0, size=K)
    sigma2 = float(10 ** rng.uniform(-4, 0))
    stats = LinkStatistics(beta=beta, sin_az=sin_az, eps=eps, n_antennas=N, d_H=d_H,
                           num_subcarriers=M, tx_power_w=powers, noise_power_w=sigma2)
    c_sin = rng.uniform(-1, 1, size=K)
    if K > 1 and rng.random() < 0.2:
        c_sin[-1] = c_sin[0]
    cstats = CellularStats(beta=10 ** rng.uniform(-3, 0, size=K), sin_az=c_sin,
                           eps=rng.uniform(-0.5, 0.5, size=K), total_antennas=L * N,
                           num_subcarriers=M, d_H=d_H)
    return stats, cstats


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def verify_instance(stats: LinkStatistics, cstats: CellularStats, k: int, s: int,
                    ui_sum_includes_diagonal: bool = True) -> dict[str, float]:
    """Relative error of each closed form against the direct evaluation at (k, s)."""
    # imported here: closed forms are only needed for the comparison
    from .se_baselines import se_cellular, se_small_cell
    from .se_cf import (build_cf_vectors, lsfd_weights, se_cf_lsfd_closed_form,
                        se_cf_with_weights)

    inc = ui_sum_includes_diagonal
    p, sigma2, N, L = stats.tx_power_w, stats.noise_power_w, stats.n_antennas, stats.num_aps
    channels = explicit_channels(stats, cstats)
    rows = cf_ici_rows(stats, s)
    vec = build_cf_vectors(stats, k, s)

    mf = np.full(L, 1 / L)
    errors = {
        "cf_mf": _rel(se_cf_with_weights(vec, mf, p, sigma2, N, inc),
                      direct_se_cf(channels, rows, mf, k, s, p, sigma2, inc)),
    }
    w = lsfd_weights(vec, p, sigma2, N, inc)
    direct_lsfd = direct_se_cf(channels, rows, w, k, s, p, sigma2, inc)
    errors["cf_lsfd_weights"] = _rel(se_cf_with_weights(vec, w, p, sigma2, N, inc), direct_lsfd)
    errors["cf_lsfd_closed_form"] = _rel(se_cf_lsfd_closed_form(vec, p, sigma2, N, inc),
                                         direct_lsfd)

    sc, _ = se_small_cell(stats, k, s, inc)
    direct_sc = max(np.log2(1 + direct_sinr_small_cell(channels, rows, k, l, s, p, sigma2, inc))
                    for l in range(1, L + 1))
    errors["small_cell"] = _rel(sc, direct_sc)

    crows = cellular_ici_rows(cstats, s)
    cell = se_cellular(cstats, k, s, p, sigma2, L, N, inc)
    direct_cell = np.log2(1 + direct_sinr_cellular(channels, crows, k, s, p, sigma2, inc))
    errors["cellular"] = _rel(cell, direct_cell)
    return errors


def run_verification(trials: int = 500, seed: int = 0, dft_values: int = 20) -> dict:
    """Oracle suite: closed forms vs direct evaluation, ICI power sums and DFT check.

    Returns ``{"max_rel_err": {...}, "ici_power_err": x, "dft_err": x, "passed": bool}``.
    """
    from .ici import ici_row as _row

    rng = np.random.default_rng(seed)
    worst: dict[str, float] = {}
    for _ in range(trials):
        stats, cstats = random_instance(rng)
        k = int(rng.integers(1, stats.num_tas + 1))
        s = int(rng.integers(1, stats.num_subcarriers + 1))
        inc = bool(rng.random() < 0.5)
        for name, err in verify_instance(stats, cstats, k, s, inc).items():
            worst[name] = max(worst.get(name, 0.0), err)

    ici_err = 0.0
    for _ in range(1000):
        M = int(rng.integers(1, 129))
        s = int(rng.integers(1, M + 1))
        eps = float(rng.uniform(-min(M / 2, 4), min(M / 2, 4)))
        ici_err = max(ici_err, abs(_row(eps, s, M).power_sum() - 1))

    dft_err = max(dft_consistency_check(float(e), 64, trials=1, seed=seed)
                  for e in rng.uniform(-1, 1, size=dft_values))
    passed = max(worst.values()) < 1e-9 and ici_err < 1e-10 and dft_err < 1e-9
    return {"max_rel_err": worst, "ici_power_err": ici_err, "dft_err": dft_err,
            "passed": passed}
