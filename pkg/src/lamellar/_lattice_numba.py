"""Numba twin of _lattice_numpy: identical contracts, explicit hot loops."""

import numpy as np
from numba import njit

_NEAR_IMAGES = 8
_SERIES_TERMS = 12


@njit(cache=True)
def _em_tail(p, a):
    return (
        a ** (1.0 - p) / (p - 1.0)
        - p * a ** (-p - 1.0) / 24.0
        + 7.0 * p * (p + 1.0) * (p + 2.0) * a ** (-p - 3.0) / 5760.0
    )


def em_tail(p, a):
    a = np.asarray(a, dtype=float)
    return (
        a ** (1.0 - p) / (p - 1.0)
        - p * a ** (-p - 1.0) / 24.0
        + 7.0 * p * (p + 1.0) * (p + 2.0) * a ** (-p - 3.0) / 5760.0
    )


def zeta_tail(p, terms):
    return float(_em_tail(p, terms + 0.5))


@njit(cache=True)
def _far_sum(p, n_near, terms):
    acc = 0.0
    for n in range(n_near + 1, terms + 1):
        acc += float(n) ** (-p)
    hi = terms if terms > n_near else n_near
    return acc + _em_tail(p, hi + 0.5)


@njit(cache=True)
def _point_sum(t, s, terms):
    p = 1.0 + 2.0 * s
    out = np.empty_like(t)
    for i in range(t.size):
        ti = t[i]
        acc = 0.0
        for n in range(terms + 1):
            acc += (n + ti) ** (-p)
            acc += (n + 1.0 - ti) ** (-p)
        acc += _em_tail(p, terms + 0.5 + ti)
        acc += _em_tail(p, terms + 1.5 - ti)
        out[i] = acc
    return out


@njit(cache=True)
def _phi_sum(t, s, terms):
    r = 1.0 - 2.0 * s
    near = min(_NEAR_IMAGES, terms)
    coeffs = np.empty(_SERIES_TERMS)
    b = 1.0
    j = 0
    for k in range(_SERIES_TERMS):
        b *= (r - j) / (j + 1) * ((r - j - 1) / (j + 2))
        j += 2
        coeffs[k] = 2.0 * b * _far_sum(2.0 * (k + 1) - r, near, terms)
    out = np.empty_like(t)
    for i in range(t.size):
        ti = t[i]
        acc = abs(ti) ** r
        for n in range(1, near + 1):
            fn = float(n)
            acc += (fn - ti) ** r + (fn + ti) ** r - 2.0 * fn**r
        t2 = ti * ti
        horner = 0.0
        for k in range(_SERIES_TERMS - 1, -1, -1):
            horner = t2 * (coeffs[k] + horner)
        out[i] = (acc + horner) / (2.0 * s * (1.0 - 2.0 * s))
    return out


@njit(cache=True)
def _f_sum(t, s, terms):
    q = 2.0 * s
    near = min(_NEAR_IMAGES, terms)
    coeffs = np.empty(_SERIES_TERMS)
    a = 1.0
    j = 0
    for k in range(_SERIES_TERMS):
        if j == 0:
            a *= q
        else:
            a *= (q + j - 1) / j * ((q + j) / (j + 1))
        j += 2
        coeffs[k] = a * _far_sum(q + 2.0 * k + 1.0, near, terms) / s
    out = np.empty_like(t)
    for i in range(t.size):
        ti = t[i]
        if ti > 0.0:
            acc = -(ti ** (-q))
        elif ti < 0.0:
            acc = (-ti) ** (-q)
        else:
            acc = 0.0
        for n in range(1, near + 1):
            fn = float(n)
            acc += (fn - ti) ** (-q) - (fn + ti) ** (-q)
        acc /= 2.0 * s
        t2 = ti * ti
        horner = 0.0
        for k in range(_SERIES_TERMS - 1, -1, -1):
            horner = coeffs[k] + t2 * horner
        out[i] = acc + ti * horner
    return out


def point_sum(t, s, terms):
    t = np.ascontiguousarray(np.atleast_1d(np.asarray(t, dtype=float)))
    return _point_sum(t.ravel(), float(s), int(terms)).reshape(t.shape)


def phi_sum(t, s, terms):
    t = np.ascontiguousarray(np.atleast_1d(np.asarray(t, dtype=float)))
    return _phi_sum(t.ravel(), float(s), int(terms)).reshape(t.shape)


def f_sum(t, s, terms):
    t = np.ascontiguousarray(np.atleast_1d(np.asarray(t, dtype=float)))
    return _f_sum(t.ravel(), float(s), int(terms)).reshape(t.shape)
