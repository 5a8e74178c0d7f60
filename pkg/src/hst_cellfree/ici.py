"""Doppler-induced inter-carrier interference (ICI) coefficients.

A normalized Doppler offset ``eps`` (in subcarrier spacings) leaks subcarrier
m into subcarrier s through the Dirichlet kernel evaluated at
x = m - s + eps::

    I[m - s] = sin(pi x) / (M sin(pi x / M)) * exp(j pi (1 - 1/M) x)

Subcarrier indices are 1-based. The kernel is M-periodic in x, and the powers
|I[m - s]|^2 over any full set of M subcarriers sum to one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "IciRow",
    "normalized_dfo",
    "ici_coefficient",
    "ici_kernel",
    "ici_row",
    "ici_tensor",
]

# below this |sin(pi x / M)| the ratio is replaced by its limit
SINGULAR_TOL = 1e-12


@dataclass(frozen=True)
class IciRow:
    eps: float
    target_subcarrier: int
    coeffs: np.ndarray  # coeffs[m - 1] multiplies subcarrier m

    def power_sum(self) -> float:
        return float(np.sum(np.abs(self.coeffs) ** 2))


def normalized_dfo(w, cos_aoa):
    """eps = w cos(theta)."""
    return w * cos_aoa


def ici_kernel(x, M: int):
    """Dirichlet ICI kernel at real offset(s) ``x``, vectorised."""
    x = np.asarray(x, dtype=float)
    # the kernel is M-periodic; reducing first keeps both sines well conditioned
    r = x - M * np.rint(x / M)
    num = np.sin(np.pi * (r - 2 * np.rint(r / 2)))
    den = M * np.sin(np.pi * r / M)
    # 0/0 at r = 0, where the ratio tends to 1
    singular = np.abs(den) < M * SINGULAR_TOL
    ratio = np.where(singular, 1.0, num / np.where(singular, 1.0, den))
    out = ratio * np.exp(1j * np.pi * (1 - 1 / M) * r)
    out = np.where(r == 0, 1.0 + 0j, out)
    return out if out.ndim else complex(out)


def ici_coefficient(eps: float, m: int, s: int, M: int) -> complex:
    """ICI coefficient coupling subcarrier ``m`` into ``s`` (both 1-based)."""
    if not (1 <= m <= M and 1 <= s <= M):
        raise IndexError(f"subcarrier indices must lie in 1..{M}")
    return ici_kernel(m + eps - s, M)


def ici_row(eps: float, s: int, M: int) -> IciRow:
    """Coefficients I[m - s] for m = 1..M feeding target subcarrier ``s``."""
    if not 1 <= s <= M:
        raise IndexError(f"subcarrier index {s} out of range 1..{M}")
    m = np.arange(1, M + 1)
    return IciRow(eps=float(eps), target_subcarrier=s, coeffs=ici_kernel(m + eps - s, M))


def ici_tensor(eps: np.ndarray, M: int) -> np.ndarray:
    """Kernel for an array of offsets at every (m, s) pair.

    Returns an array of shape ``eps.shape + (M, M)`` with element
    ``[..., m - 1, s - 1] = I[m - s]``.
    """
    eps = np.asarray(eps, dtype=float)
    offsets = np.arange(-(M - 1), M)
    values = ici_kernel(eps[..., None] + offsets, M)
    idx = np.arange(M)
    # I[m - s] depends on m - s only; gather from the 2M - 1 distinct offsets
    return values[..., idx[:, None] - idx[None, :] + (M - 1)]
