"""Pure-numpy lattice sums for the periodic fractional kernel.

All three sums run over integer images n of the unit circle.  Near images
(|n| <= 8) are evaluated directly; far images are folded into rapidly
converging power series in t whose coefficients are partial zeta sums closed
with a midpoint Euler-Maclaurin tail

    sum_{n>M} n^(-p) = A^(1-p)/(p-1) - p A^(-p-1)/24 + 7 p(p+1)(p+2) A^(-p-3)/5760,

A = M + 1/2.  The far-image series have single-signed terms (no cancellation)
so the absolute accuracy of every sum sits near machine precision, which the
rectangle-assembled energies inherit.
"""

import numpy as np

_NEAR_IMAGES = 8
_SERIES_TERMS = 12


def em_tail(p, a):
    """Midpoint Euler-Maclaurin closure of sum_{n > M} g(n), g(x) = x^(-p), a = M + 1/2."""
    a = np.asarray(a, dtype=float)
    return (
        a ** (1.0 - p) / (p - 1.0)
        - p * a ** (-p - 1.0) / 24.0
        + 7.0 * p * (p + 1.0) * (p + 2.0) * a ** (-p - 3.0) / 5760.0
    )


def zeta_tail(p, terms):
    """sum_{n > terms} n^(-p) for p > 1."""
    return float(em_tail(p, terms + 0.5))


def _far_sum(p, n_near, terms):
    """sum_{n_near < n <= terms} n^(-p) + sum_{n > terms} n^(-p)."""
    if terms > n_near:
        n = np.arange(n_near + 1, terms + 1, dtype=float)
        explicit = float(np.sum(n**-p))
    else:
        explicit = 0.0
    return explicit + float(em_tail(p, max(terms, n_near) + 0.5))


def point_sum(t, s, terms):
    """sum_{n in Z} |t - n|^(-1-2s) for t in [0, 1/2].

    The two image families (n + t) and (n + 1 - t) are summed separately so
    that t and 1 - t follow the identical floating-point path.
    """
    t = np.asarray(t, dtype=float)
    p = 1.0 + 2.0 * s
    n = np.arange(0, terms + 1, dtype=float)
    total = np.sum((t[..., None] + n) ** (-p), axis=-1)
    total += np.sum((n + 1.0 - t[..., None]) ** (-p), axis=-1)
    total += em_tail(p, terms + 0.5 + t)
    total += em_tail(p, terms + 1.5 - t)
    return total


def _phi_far_coeffs(s, terms):
    """c[k] such that sum_{n>8} [(n-t)^r + (n+t)^r - 2 n^r] = sum_k c[k] t^(2k+2).

    Even binomial series of (1 -+ t/n)^r, r = 1 - 2s; every coefficient is
    negative, so the series accumulates without cancellation.
    """
    r = 1.0 - 2.0 * s
    near = min(_NEAR_IMAGES, terms)
    coeffs = np.empty(_SERIES_TERMS)
    b = 1.0  # running binom(r, j)
    j = 0
    for k in range(_SERIES_TERMS):
        b *= (r - j) / (j + 1) * ((r - j - 1) / (j + 2))
        j += 2
        coeffs[k] = 2.0 * b * _far_sum(2.0 * (k + 1) - r, near, terms)
    return near, coeffs


def phi_sum(t, s, terms):
    """Regularized sum_n Phi(t - n) with Phi(u) = |u|^(1-2s)/(2s(1-2s)), |t| <= 1.

    An additive constant (divergent over images but independent of t) is
    dropped; only second differences of this function are meaningful.
    """
    t = np.asarray(t, dtype=float)
    r = 1.0 - 2.0 * s
    near, coeffs = _phi_far_coeffs(s, terms)
    n = np.arange(1, near + 1, dtype=float)
    total = np.abs(t) ** r
    total += np.sum(
        (n - t[..., None]) ** r + (n + t[..., None]) ** r - 2.0 * n**r, axis=-1
    )
    t2 = t * t
    horner = np.zeros_like(t)
    for k in range(_SERIES_TERMS - 1, -1, -1):
        horner = t2 * (coeffs[k] + horner)
    total += horner
    return total / (2.0 * s * (1.0 - 2.0 * s))


def _f_far_coeffs(s, terms):
    """c[k] such that sum_{n>8} [f(t-n) + f(t+n)] = sum_k c[k] t^(2k+1).

    Odd binomial series of (1 -+ t/n)^(-2s) / (2s); all coefficients positive.
    """
    q = 2.0 * s
    near = min(_NEAR_IMAGES, terms)
    coeffs = np.empty(_SERIES_TERMS)
    a = 1.0  # running q(q+1)...(q+j-1)/j! at odd j
    j = 0
    for k in range(_SERIES_TERMS):
        a *= (q + j) / (j + 1) if j == 0 else (q + j - 1) / j * ((q + j) / (j + 1))
        j += 2
        coeffs[k] = a * _far_sum(q + 2.0 * k + 1.0, near, terms) / s
    return near, coeffs


def f_sum(t, s, terms):
    """Odd antiderivative of the lattice kernel: sum_n f(t - n), |t| < 1.

    f(u) = -sign(u) |u|^(-2s) / (2s) with the principal-value convention
    f(0) = 0, so block integrals through an interface pair up exactly.
    """
    t = np.asarray(t, dtype=float)
    q = 2.0 * s
    near, coeffs = _f_far_coeffs(s, terms)
    n = np.arange(1, near + 1, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        total = -np.sign(t) * np.abs(t) ** (-q)
    total = np.where(t == 0.0, 0.0, total)
    total += np.sum((n - t[..., None]) ** (-q) - (n + t[..., None]) ** (-q), axis=-1)
    total /= 2.0 * s
    t2 = t * t
    horner = np.zeros_like(t)
    for k in range(_SERIES_TERMS - 1, -1, -1):
        horner = coeffs[k] + t2 * horner
    return total + t * horner
