"""Circulant Hessian spectra at the equidistributed profile and stability.

At the equidistributed profile the interface Hessian of E = H + K is a
symmetric circulant matrix with first row

    a_0 = 4 sum_{k=1}^{N-1} (-1)^k (C K - G)(k/N),
    a_k = 4 (-1)^(k-1) (C K - G)(k/N),      k = 1 .. N-1,

(the same combined kernel C*K - G that drives the gradient; rows sum to
zero exactly).  Its eigenvalues split into a kernel part and a Green part,

    lambda_l = 8 sum_k (-1)^k CK(k/N) sin^2(pi k l / N)
             + 8 sum_k (-1)^(k-1) G(k/N) sin^2(pi k l / N),

and the Green sum has exact closed forms

    tan^2(pi l / N) / (gamma^2 N)   for l != N/2,
    -2 / (3 gamma^2 N)              for l = N/2,

proved by expanding G in Fourier modes and folding the alias sums with
sum_j (j + theta)^(-2) = pi^2 / sin^2(pi theta).  The kernel part is bounded
by 100 C(s) N^(1+2s) in magnitude.

Stability on the mass-preserving subspace ignores l = 0 (translations) and
l = N/2 (the constraint normal, an inadmissible direction); the profile is a
constrained local minimizer whenever the remaining eigenvalues are
nonnegative, which holds for all gamma below the explicit sufficient
threshold gamma_0(N, s) = tan(pi/N) / (100 sqrt(s) N^(1+s)).
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DomainError, NoBracketError
from .kernels import DEFAULT_TAIL_TERMS, GreenParams, KernelParams
from .sharp_energy import ModelParams

LOCAL_MIN = "LocalMin"
SADDLE = "Saddle"
MARGINAL = "Marginal"

CLASSIFY_REL_TOL = 1e-9


def _check_even(n):
    if n < 2 or n % 2 != 0:
        raise DomainError(f"N must be even and >= 2, got {n}")


@dataclass(frozen=True)
class CirculantRow:
    """First row of a symmetric circulant matrix with zero row sum."""

    n: int
    entries: tuple

    def __post_init__(self):
        _check_even(self.n)
        a = np.asarray(self.entries, dtype=float)
        if a.size != self.n:
            raise DomainError("entry count must equal N")
        scale = float(np.max(np.abs(a))) or 1.0
        if np.max(np.abs(a[1:] - a[1:][::-1])) > 1e-12 * scale:
            raise DomainError("row is not symmetric: a_k must equal a_(N-k)")
        if abs(float(np.sum(a))) > 1e-10 * scale:
            raise DomainError("row sum must vanish (translation invariance)")
        object.__setattr__(self, "entries", tuple(float(v) for v in a))

    @property
    def a(self):
        return np.asarray(self.entries)


@dataclass(frozen=True)
class SpectrumReport:
    """Eigenvalues, constrained classification, and the sufficient threshold."""

    eigenvalues: tuple
    constrained_classification: str
    gamma0: float
    min_constrained_eigenvalue: float
    lambda_half: float

    def rows(self):
        return list(enumerate(self.eigenvalues))

    def to_json_dict(self) -> dict:
        return {
            "eigenvalues": list(self.eigenvalues),
            "constrained_classification": self.constrained_classification,
            "gamma0": self.gamma0,
            "min_constrained_eigenvalue": self.min_constrained_eigenvalue,
            "lambda_half": self.lambda_half,
        }


def combined_kernel_at_gaps(n: int, mp: ModelParams, tail_terms: int = DEFAULT_TAIL_TERMS):
    """(C K - G)(k/N) for k = 1 .. N-1, with one kernel evaluation per gap."""
    kp = mp.kernel_params(tail_terms)
    gp = mp.green_params()
    gaps = np.arange(1, n) / n
    return kernels.kernel_value(gaps, kp) - kernels.green_value(gaps, gp)


def circulant_row_at_UN(
    n: int, mp: ModelParams, tail_terms: int = DEFAULT_TAIL_TERMS
) -> CirculantRow:
    """First Hessian row at the equidistributed profile (requires m = 0)."""
    _check_even(n)
    if mp.m != 0.0:
        raise DomainError("the closed-form circulant row assumes m = 0")
    vals = combined_kernel_at_gaps(n, mp, tail_terms)
    k = np.arange(1, n)
    a = np.empty(n)
    a[1:] = 4.0 * np.where(k % 2 == 1, 1.0, -1.0) * vals
    a[0] = -float(np.sum(a[1:]))
    return CirculantRow(n, tuple(a))


def circulant_eigenvalues(row: CirculantRow):
    """Real spectrum lambda_l = sum_k a_k cos(2 pi k l / N), l = 0 .. N-1."""
    a = row.a
    n = row.n
    k = np.arange(n)
    ll = np.arange(n)
    # reduce k*l mod N in integer arithmetic so the trig arguments stay small
    m = np.outer(ll, k) % n
    return np.cos(2.0 * np.pi * m / n) @ a


def green_part_direct(n: int, l: int, gp: GreenParams) -> float:
    """Green contribution 8 sum_k (-1)^(k-1) G(k/N) sin^2(pi k l / N)."""
    _check_even(n)
    k = np.arange(1, n)
    signs = np.where(k % 2 == 1, 1.0, -1.0)
    g = kernels.green_value(k / n, gp)
    # the sum cancels by ~5 orders: reduce k*l mod N exactly and compensate
    m = np.minimum((k * l) % n, n - (k * l) % n)
    return 8.0 * math.fsum(signs * g * np.sin(np.pi * m / n) ** 2)


def green_part_closed_form(n: int, l: int, gp: GreenParams) -> float:
    """Closed form of the Green contribution to lambda_l.

    tan^2(pi l / N) / (gamma^2 N) for l != N/2 and -2/(3 gamma^2 N) at the
    constraint mode l = N/2; the direct trigonometric sum agrees to 1e-10.
    """
    _check_even(n)
    if not 1 <= l <= n - 1:
        raise DomainError("l must lie in 1 .. N-1")
    if 2 * l == n:
        return -2.0 / (3.0 * gp.gamma**2 * n)
    return math.tan(math.pi * l / n) ** 2 / (gp.gamma**2 * n)


def kernel_part(n: int, l: int, kp: KernelParams) -> float:
    """Fractional-kernel contribution 8 sum_k (-1)^k CK(k/N) sin^2(pi k l / N).

    Bounded in magnitude by 100 C(s) N^(1+2s).
    """
    _check_even(n)
    k = np.arange(1, n)
    signs = np.where(k % 2 == 1, -1.0, 1.0)
    vals = kernels.kernel_value(k / n, kp)
    m = np.minimum((k * l) % n, n - (k * l) % n)
    return 8.0 * math.fsum(signs * vals * np.sin(np.pi * m / n) ** 2)


def kernel_part_bound(n: int, s: float) -> float:
    """The a-priori bound 100 C(s) N^(1+2s) on |kernel_part|."""
    return 100.0 * kernels.normalization_c1s(s) * n ** (1.0 + 2.0 * s)


def gamma0(n: int, s: float) -> float:
    """Sufficient threshold tan(pi/N) / (100 sqrt(s) N^(1+s)); inf for N = 2.

    For N = 2 the constrained eigenvalue set {1,...,N-1} minus {N/2} is
    empty, so no condition on gamma remains and the threshold is unbounded.
    """
    _check_even(n)
    if not (0.0 < s < 0.5):
        raise DomainError(f"s must lie in (0, 1/2), got {s}")
    if n == 2:
        return math.inf
    return math.tan(math.pi / n) / (100.0 * math.sqrt(s) * n ** (1.0 + s))


def _constrained_indices(n: int):
    return [l for l in range(1, n) if 2 * l != n]


def classify(n: int, mp: ModelParams, tail_terms: int = DEFAULT_TAIL_TERMS) -> SpectrumReport:
    """Stability of the equidistributed profile on the constrained subspace.

    LocalMin / Saddle / Marginal according to the sign of the smallest
    eigenvalue over l not in {0, N/2}, with a scale-relative tolerance;
    lambda_(N/2) is reported but never classified (that direction violates
    the mass constraint).
    """
    _check_even(n)
    if mp.m != 0.0:
        raise DomainError("classification assumes m = 0")
    row = circulant_row_at_UN(n, mp, tail_terms)
    lam = circulant_eigenvalues(row)
    tol = CLASSIFY_REL_TOL * float(np.max(np.abs(lam)))
    idx = _constrained_indices(n)
    if idx:
        mn = float(np.min(lam[idx]))
        if mn < -tol:
            label = SADDLE
        elif mn <= tol:
            label = MARGINAL
        else:
            label = LOCAL_MIN
    else:
        mn = math.inf
        label = LOCAL_MIN
    return SpectrumReport(
        eigenvalues=tuple(float(v) for v in lam),
        constrained_classification=label,
        gamma0=gamma0(n, mp.s),
        min_constrained_eigenvalue=mn,
        lambda_half=float(lam[n // 2]),
    )


def min_constrained_eigenvalue(
    n: int, s: float, gamma: float, tail_terms: int = DEFAULT_TAIL_TERMS
) -> float:
    """min over l not in {0, N/2} of lambda_l, for bisection in gamma."""
    mp = ModelParams(s, gamma)
    row = circulant_row_at_UN(n, mp, tail_terms)
    lam = circulant_eigenvalues(row)
    return float(np.min(lam[_constrained_indices(n)]))


def critical_gamma(
    n: int,
    s: float,
    tail_terms: int = DEFAULT_TAIL_TERMS,
    lo: float = 1e-6,
    hi: float = 1e3,
    rtol: float = 1e-6,
) -> float:
    """Empirical stability threshold: bisection for the sign change of the
    smallest constrained eigenvalue.

    gamma enters the eigenvalues only through the positive Green part
    ~ 1/gamma^2, so the minimum is strictly decreasing in gamma and the
    bracketed sign change is unique.  Always >= gamma0(n, s).
    """
    _check_even(n)
    if n < 4:
        raise DomainError("critical_gamma needs N >= 4 (N = 2 is always stable)")
    # cache the gamma-independent pieces: lambda_l = kp_l + gp1_l / gamma^2
    kpar = KernelParams(s, tail_terms)
    idx = _constrained_indices(n)
    kp_l = np.array([kernel_part(n, l, kpar) for l in idx])
    gp1_l = np.array([green_part_direct(n, l, GreenParams(1.0)) for l in idx])

    def f(g):
        return float(np.min(kp_l + gp1_l / g**2))

    flo, fhi = f(lo), f(hi)
    if not (flo > 0.0 > fhi):
        raise NoBracketError(
            f"no sign change of the minimum eigenvalue in [{lo}, {hi}] "
            f"(f({lo}) = {flo:.3e}, f({hi}) = {fhi:.3e})"
        )
    while (hi - lo) > rtol * lo:
        mid = math.sqrt(lo * hi)
        if f(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return math.sqrt(lo * hi)
