"""Closed-form uplink spectral efficiency of the cell-free system.

Each AP matches its local channel, the CPU combines the L matched outputs with
weights ``a`` and the SINR of TA k on subcarrier s is a ratio of quadratic
forms in ``a``::

    SINR(a) = p_k N^2 |a^H b|^2 / (a^H A a)
    A = p_k N^2 sum_{m!=s} c_m c_m^H + sum_{i!=k} p_i sum_m d_im d_im^H
        + sigma^2 N diag(beta_k)

MF combining uses equal weights. LSFD uses a = A^{-1} b, which maximizes the
quotient and gives SINR = p_k N^2 b^H A^{-1} b.

The inter-TA sum over m runs over every subcarrier by default, including the
co-channel term m = s; ``ui_sum_includes_diagonal=False`` restricts it to
m != s like the ICI sum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .ici import ici_kernel, ici_tensor

__all__ = [
    "NumericalError",
    "LinkStatistics",
    "CfVectors",
    "eta",
    "build_cf_vectors",
    "system_matrix",
    "se_cf_with_weights",
    "lsfd_weights",
    "se_cf_mf",
    "se_cf_lsfd",
    "se_cf_lsfd_closed_form",
    "cf_se_grid",
]

# |delta sin| below this is treated as equal directions
ANGLE_TOL = 1e-12


class NumericalError(ArithmeticError):
    """Non-finite statistics or a failed positive-definite factorization."""


@dataclass(frozen=True)
class LinkStatistics:
    """Large-scale statistics of every TA-AP link at one train position.

    ``beta``, ``sin_az`` and ``eps`` are (K, L) arrays.
    """

    beta: np.ndarray
    sin_az: np.ndarray
    eps: np.ndarray
    n_antennas: int
    d_H: float
    num_subcarriers: int
    tx_power_w: np.ndarray
    noise_power_w: float

    def __post_init__(self):
        if np.any(~(self.beta > 0)):
            raise ValueError("beta must be positive")
        if np.any(np.abs(self.sin_az) > 1 + 1e-12):
            raise ValueError("|sin_az| must not exceed 1")

    @property
    def num_tas(self) -> int:
        return self.beta.shape[0]

    @property
    def num_aps(self) -> int:
        return self.beta.shape[1]


@dataclass(frozen=True)
class CfVectors:
    """Statistics vectors for one (TA, subcarrier) pair, 1-based ``k`` and ``s``.

    ``c`` holds one row per m != s (ascending m). ``d`` holds, for each
    interferer in ``interferers``, one row per m = 1..M.
    """

    k: int
    s: int
    b: np.ndarray  # (L,)
    c: np.ndarray  # (M - 1, L)
    d: np.ndarray  # (K - 1, M, L)
    interferers: tuple[int, ...]
    lam: np.ndarray  # (L,)

    def d_rows(self, include_diagonal: bool = False) -> np.ndarray:
        """Interferer rows entering the sum, shape (K - 1, M or M - 1, L)."""
        if include_diagonal:
            return self.d
        return np.delete(self.d, self.s - 1, axis=1)


def eta(sin_k, sin_i, n_antennas: int, d_H: float):
    """Inner-product factor sum_{lam<N} exp(j 2 pi d_H lam (sin_i - sin_k)).

    Evaluated as exp(j pi d_H (N-1) delta) sin(pi d_H N delta) / sin(pi d_H delta),
    and as N where the ratio is 0/0.
    """
    delta = np.asarray(sin_i, dtype=float) - np.asarray(sin_k, dtype=float)
    half = np.pi * d_H * delta
    den = np.sin(half)
    degenerate = (np.abs(delta) < ANGLE_TOL) | (np.abs(den) < ANGLE_TOL)
    safe = np.where(degenerate, 1.0, den)
    val = np.exp(1j * half * (n_antennas - 1)) * np.sin(n_antennas * half) / safe
    out = np.where(degenerate, complex(n_antennas), val)
    return out if out.ndim else complex(out)


def build_cf_vectors(stats: LinkStatistics, k: int, s: int) -> CfVectors:
    K, L, M = stats.num_tas, stats.num_aps, stats.num_subcarriers
    if not 1 <= k <= K:
        raise IndexError(f"TA index {k} out of range 1..{K}")
    if not 1 <= s <= M:
        raise IndexError(f"subcarrier index {s} out of range 1..{M}")
    kk = k - 1
    m = np.arange(1, M + 1)
    beta_k = stats.beta[kk]
    # (L, M): I_kl[m - s] for all m
    Ik = ici_kernel(m[None, :] + stats.eps[kk][:, None] - s, M)
    b = ici_kernel(stats.eps[kk], M) * beta_k
    c = np.delete((Ik * beta_k[:, None]).T, s - 1, axis=0)

    others = tuple(i + 1 for i in range(K) if i != kk)
    d = np.empty((K - 1, M, L), dtype=complex)
    for row, i in enumerate(others):
        ii = i - 1
        Ii = ici_kernel(m[None, :] + stats.eps[ii][:, None] - s, M)
        scale = np.sqrt(beta_k * stats.beta[ii]) * eta(
            stats.sin_az[kk], stats.sin_az[ii], stats.n_antennas, stats.d_H
        )
        d[row] = (Ii * scale[:, None]).T
    return CfVectors(k=k, s=s, b=b, c=c, d=d, interferers=others, lam=beta_k.copy())


def system_matrix(vec: CfVectors, powers, sigma2: float, N: int,
                  ui_sum_includes_diagonal: bool = True) -> np.ndarray:
    """Interference-plus-noise matrix A of the SINR quotient (L x L, Hermitian)."""
    powers = np.asarray(powers, dtype=float)
    p_k = powers[vec.k - 1]
    A = p_k * N**2 * (vec.c.T @ vec.c.conj())
    drows = vec.d_rows(ui_sum_includes_diagonal)
    for row, i in enumerate(vec.interferers):
        A = A + powers[i - 1] * (drows[row].T @ drows[row].conj())
    A = A + sigma2 * N * np.diag(vec.lam)
    return A


def se_cf_with_weights(vec: CfVectors, weights, powers, sigma2: float, N: int,
                       ui_sum_includes_diagonal: bool = True) -> float:
    """SE in bit/s/Hz of TA ``vec.k`` on subcarrier ``vec.s`` for CPU weights ``weights``.

    ``powers`` is the length-K vector of transmit powers.
    """
    a = np.asarray(weights, dtype=complex)
    if not np.any(a != 0):
        raise ValueError("combining weights must not all be zero")
    powers = np.asarray(powers, dtype=float)
    p_k = powers[vec.k - 1]
    signal = p_k * N**2 * abs(np.vdot(a, vec.b)) ** 2
    ici = p_k * N**2 * np.sum(np.abs(vec.c @ a.conj()) ** 2)
    drows = vec.d_rows(ui_sum_includes_diagonal)
    ui = sum(
        powers[i - 1] * np.sum(np.abs(drows[row] @ a.conj()) ** 2)
        for row, i in enumerate(vec.interferers)
    )
    noise = sigma2 * N * np.real(np.vdot(a, vec.lam * a))
    return float(np.log2(1 + signal / (ici + ui + noise)))


def _cholesky(A: np.ndarray):
    if not np.all(np.isfinite(A)):
        raise NumericalError("system matrix has non-finite entries")
    try:
        return scipy.linalg.cho_factor(A, lower=True, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"system matrix is not positive definite: {exc}") from exc


def lsfd_weights(vec: CfVectors, powers, sigma2: float, N: int,
                 ui_sum_includes_diagonal: bool = True) -> np.ndarray:
    """SINR-maximizing CPU weights A^{-1} b, via a Cholesky solve."""
    A = system_matrix(vec, powers, sigma2, N, ui_sum_includes_diagonal)
    a = scipy.linalg.cho_solve(_cholesky(A), vec.b, check_finite=False)
    if not np.all(np.isfinite(a)):
        raise NumericalError("LSFD weights are not finite")
    return a


def se_cf_lsfd_closed_form(vec: CfVectors, powers, sigma2: float, N: int,
                           ui_sum_includes_diagonal: bool = True) -> float:
    """log2(1 + p_k N^2 b^H A^{-1} b) without forming the weights explicitly."""
    A = system_matrix(vec, powers, sigma2, N, ui_sum_includes_diagonal)
    factor, lower = _cholesky(A)
    z = scipy.linalg.solve_triangular(factor, vec.b, lower=lower, check_finite=False)
    p_k = np.asarray(powers, dtype=float)[vec.k - 1]
    return float(np.log2(1 + p_k * N**2 * np.real(np.vdot(z, z))))


def se_cf_mf(stats: LinkStatistics, k: int, s: int,
             ui_sum_includes_diagonal: bool = True) -> float:
    vec = build_cf_vectors(stats, k, s)
    weights = np.full(stats.num_aps, 1 / stats.num_aps)
    return se_cf_with_weights(vec, weights, stats.tx_power_w, stats.noise_power_w,
                              stats.n_antennas, ui_sum_includes_diagonal)


def se_cf_lsfd(stats: LinkStatistics, k: int, s: int,
               ui_sum_includes_diagonal: bool = True) -> float:
    vec = build_cf_vectors(stats, k, s)
    return se_cf_lsfd_closed_form(vec, stats.tx_power_w, stats.noise_power_w,
                                  stats.n_antennas, ui_sum_includes_diagonal)


def cf_se_grid(stats: LinkStatistics, combining: str = "lsfd",
               ui_sum_includes_diagonal: bool = True) -> np.ndarray:
    """SE of every TA on every subcarrier, shape (K, M).

    Batched equivalent of :func:`se_cf_mf` / :func:`se_cf_lsfd`. The sums over
    m are formed as Gram matrices of the ICI rows, so the work per position is
    O(K^2 M L^2 + K M^2 L^2).
    """
    if combining not in ("mf", "lsfd"):
        raise ValueError(f"unknown combining {combining!r}")
    K, L, M = stats.num_tas, stats.num_aps, stats.num_subcarriers
    N = stats.n_antennas
    p = np.asarray(stats.tx_power_w, dtype=float)
    beta = stats.beta

    I = ici_tensor(stats.eps, M)  # (K, L, m, s)
    I0 = ici_kernel(stats.eps, M)  # (K, L)
    Is = np.moveaxis(I, 3, 1)  # (K, s, L, m)
    gram = Is @ np.swapaxes(Is, -1, -2).conj()  # (K, s, L, L)
    diag_term = I0[:, :, None] * I0[:, None, :].conj()  # (K, L, L)
    gram_off = gram - diag_term[:, None]
    gram_ui = gram if ui_sum_includes_diagonal else gram_off

    bb = beta[:, :, None] * beta[:, None, :]
    A = (p * N**2)[:, None, None, None] * gram_off * bb[:, None]
    # u[k, i, l] = sqrt(beta_kl beta_il) eta(phi_kl, phi_il)
    u = np.sqrt(beta[:, None, :] * beta[None, :, :]) * eta(
        stats.sin_az[:, None, :], stats.sin_az[None, :, :], N, stats.d_H
    )
    uu = u[:, :, :, None] * u[:, :, None, :].conj()  # (K, K, L, L)
    mask = ~np.eye(K, dtype=bool)
    weighted = (p[None, :, None, None] * mask[:, :, None, None]) * uu
    A = A + np.einsum("kilp,islp->kslp", weighted, gram_ui)
    A = A + stats.noise_power_w * N * np.einsum("kl,lp->klp", beta, np.eye(L))[:, None]

    if not np.all(np.isfinite(A)):
        raise NumericalError("system matrix has non-finite entries")
    b = I0 * beta  # (K, L)
    if combining == "mf":
        num = p * N**2 * np.abs(b.sum(axis=1)) ** 2  # (K,)
        den = np.real(A.sum(axis=(-2, -1)))  # (K, M)
        sinr = num[:, None] / den
    else:
        try:
            chol = np.linalg.cholesky(A)
        except np.linalg.LinAlgError as exc:
            raise NumericalError(f"system matrix is not positive definite: {exc}") from exc
        rhs = np.broadcast_to(b[:, None, :, None], (K, M, L, 1))
        z = np.linalg.solve(chol, rhs)[..., 0]
        sinr = (p * N**2)[:, None] * np.sum(np.abs(z) ** 2, axis=-1)
    return np.log2(1 + sinr)
