"""The long-range potential v = (-gamma^2 Lap)^(-1) (u - m) for step profiles.

Three routes are provided and cross-checked against each other:

* an explicit piecewise-quadratic formula for the equidistributed profile,
  v(x) = -(1/gamma^2) (-1/(8N^2) + x^2/2 + sum_k (-1)^k (x - x_k)^2 H(x - x_k)),
  with v(0) = 1/(8 N^2 gamma^2) and v'(0) = v'(1) = 0;
* an exact piecewise solver for arbitrary step profiles (v is quadratic on
  each block, glued C^1, zero mean, periodic);
* a truncated Fourier series with source coefficients computed exactly from
  the interface positions (coefficient decay ~ 1/k^3).

K(u) = (1/2) int (u - m) v is evaluated in closed form from the piecewise
representation; it must agree with the Green-rectangle route in sharp_energy
to 1e-10 relative and equals 1/(24 gamma^2 N^2) at the equidistributed
profile.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .kernels import GreenParams
from .profiles import StepProfile


def v_explicit(x, n: int, gp: GreenParams):
    """Explicit potential of the equidistributed N-interface profile at x in [0, 1]."""
    if n < 2 or n % 2 != 0:
        raise DomainError("N must be even and >= 2")
    x = np.asarray(x, dtype=float)
    xk = (2.0 * np.arange(1, n + 1) - 1.0) / (2.0 * n)
    signs = np.where(np.arange(1, n + 1) % 2 == 0, 1.0, -1.0)
    dx = x[..., None] - xk
    acc = np.sum(signs * dx * dx * (dx >= 0.0), axis=-1)
    out = -(-1.0 / (8.0 * n * n) + 0.5 * x * x + acc) / gp.gamma**2
    return float(out) if out.ndim == 0 else out


def vprime_explicit(x, n: int, gp: GreenParams):
    """Derivative of v_explicit: piecewise linear, v'(0) = v'(1) = 0."""
    if n < 2 or n % 2 != 0:
        raise DomainError("N must be even and >= 2")
    x = np.asarray(x, dtype=float)
    xk = (2.0 * np.arange(1, n + 1) - 1.0) / (2.0 * n)
    signs = np.where(np.arange(1, n + 1) % 2 == 0, 1.0, -1.0)
    dx = x[..., None] - xk
    acc = np.sum(signs * dx * (dx >= 0.0), axis=-1)
    out = -(x + 2.0 * acc) / gp.gamma**2
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class PiecewisePotential:
    """v on each block [e_j, e_(j+1)]: v = a_j + b_j (x-e_j) - r_j (x-e_j)^2 / 2."""

    edges: np.ndarray
    a: np.ndarray
    b: np.ndarray
    r: np.ndarray  # (sigma_j - m) / gamma^2 per block

    def __call__(self, x):
        x = np.asarray(x, dtype=float) % 1.0
        j = np.clip(np.searchsorted(self.edges, x, side="right") - 1, 0, self.a.size - 1)
        dx = x - self.edges[j]
        out = self.a[j] + self.b[j] * dx - 0.5 * self.r[j] * dx * dx
        return float(out) if out.ndim == 0 else out


def solve_potential(p: StepProfile, gp: GreenParams) -> PiecewisePotential:
    """Exact zero-mean periodic solution of -gamma^2 v'' = u - m for a step profile."""
    e = np.concatenate(([0.0], p.x, [1.0]))
    w = np.diff(e)
    sigma = np.where(np.arange(p.n_interfaces + 1) % 2 == 0, 1.0, -1.0)
    r = (sigma - p.mass) / gp.gamma**2  # -v'' on each block

    # v'(x) = v'(0) - int_0^x (u - m)/gamma^2; periodicity fixes nothing here
    # (the integral over a period vanishes); v'(0) comes from v(0) = v(1).
    drops = r * w  # decrease of v' across each block
    vp_left = -np.concatenate(([0.0], np.cumsum(drops)))[:-1]  # v'(e_j) - v'(0)
    # v(e_{j+1}) - v(e_j) = (v'(e_j) - v'(0)) w_j - r_j w_j^2/2 + v'(0) w_j
    seg = vp_left * w - 0.5 * r * w * w
    total = float(np.sum(seg))  # v(1) - v(0) - v'(0) * 1
    vp0 = -total  # enforce v(1) = v(0)

    b = vp_left + vp0
    a = np.concatenate(([0.0], np.cumsum(b * w - 0.5 * r * w * w)))[:-1]
    # zero mean: subtract int_0^1 v
    block_int = a * w + 0.5 * b * w * w - r * w**3 / 6.0
    a = a - float(np.sum(block_int))
    return PiecewisePotential(e, a, b, r)


def K_from_v(p: StepProfile, gp: GreenParams) -> float:
    """Long-range energy K = (1/2) int (u - m) v, exactly from the piecewise v."""
    v = solve_potential(p, gp)
    w = np.diff(v.edges)
    sigma = np.where(np.arange(p.n_interfaces + 1) % 2 == 0, 1.0, -1.0)
    block_int = v.a * w + 0.5 * v.b * w * w - v.r * w**3 / 6.0
    return 0.5 * float(np.sum((sigma - p.mass) * block_int))


@dataclass(frozen=True)
class PotentialSeries:
    """Truncated zero-mean Fourier series of v (no constant coefficient)."""

    modes: int
    cosine_coefficients: np.ndarray
    sine_coefficients: np.ndarray

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        k = np.arange(1, self.modes + 1)
        phase = 2.0 * np.pi * k * x[..., None]
        out = np.sum(
            self.cosine_coefficients * np.cos(phase)
            + self.sine_coefficients * np.sin(phase),
            axis=-1,
        )
        return float(out) if out.ndim == 0 else out

    def to_json_dict(self) -> dict:
        return {
            "modes": self.modes,
            "cosine_coefficients": list(self.cosine_coefficients),
            "sine_coefficients": list(self.sine_coefficients),
        }


DEFAULT_MODES = 4096


def v_fourier(p: StepProfile, gp: GreenParams, modes: int = DEFAULT_MODES) -> PotentialSeries:
    """Fourier solution of -gamma^2 v'' = u - m, truncated after `modes` modes.

    Source coefficients come exactly from the jump decomposition of u:
    u_k = -(2/(pi k)) sum_j (-1)^j sin(2 pi k x_j), and dividing by
    (2 pi gamma k)^2 gives the potential coefficients (decay ~ 1/k^3, so the
    truncation error in the maximum norm is O(modes^-2)).
    """
    if modes < 1:
        raise DomainError("modes must be >= 1")
    k = np.arange(1, modes + 1, dtype=float)
    signs = np.where(np.arange(1, p.n_interfaces + 1) % 2 == 0, 1.0, -1.0)
    phase = 2.0 * np.pi * np.outer(k, p.x)
    uk = -(2.0 / (np.pi * k)) * (np.sin(phase) @ signs)
    uk_t = (2.0 / (np.pi * k)) * (np.cos(phase) @ signs)
    lam = (2.0 * np.pi * gp.gamma * k) ** 2
    return PotentialSeries(modes, uk / lam, uk_t / lam)


def series_K(series: PotentialSeries, gp: GreenParams) -> float:
    """Parseval form of the long-range energy from the potential coefficients."""
    k = np.arange(1, series.modes + 1, dtype=float)
    lam = (2.0 * np.pi * gp.gamma * k) ** 2
    return 0.25 * float(
        np.sum((series.cosine_coefficients**2 + series.sine_coefficients**2) * lam)
    )
