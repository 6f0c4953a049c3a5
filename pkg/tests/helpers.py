"""Shared test utilities: random admissible profiles and FD oracles."""

import numpy as np

from lamellar.profiles import StepProfile, from_interfaces, make_equidistributed, perturb, tangent_project
from lamellar.sharp_energy import energy_total


def random_profile(rng, n=None, max_shift=0.25):
    """Random admissible profile: U_N plus a bounded tangent perturbation."""
    if n is None:
        n = int(rng.choice([2, 4, 6, 8]))
    base = make_equidistributed(n)
    v = tangent_project(rng.standard_normal(n))
    scale = float(np.max(np.abs(v.v))) or 1.0
    t = max_shift / (n * scale)
    return perturb(base, v, t)


def random_profile_any_mass(rng, n):
    """Random strictly ordered interfaces with a healthy minimum gap."""
    while True:
        xs = np.sort(rng.uniform(0.02, 0.98, n))
        if np.min(np.diff(xs)) > 0.4 / n and xs[0] > 0.02 and xs[-1] < 0.98:
            return from_interfaces(xs)


def fd_gradient(p: StepProfile, mp, h=1e-6, tail_terms=1000):
    """Central finite differences of the total energy in each interface."""
    x0 = p.x
    n = p.n_interfaces
    out = np.empty(n)
    for i in range(n):
        e = np.zeros(n)
        e[i] = h
        ep = energy_total(from_interfaces(x0 + e), mp, tail_terms).total
        em = energy_total(from_interfaces(x0 - e), mp, tail_terms).total
        out[i] = (ep - em) / (2 * h)
    return out


def fd_hessian(p: StepProfile, mp, h=1e-5, tail_terms=1000):
    """Central second differences of the total energy."""
    x0 = p.x
    n = p.n_interfaces

    def E(xs):
        return energy_total(from_interfaces(xs), mp, tail_terms).total

    e0 = E(x0)
    out = np.empty((n, n))
    for i in range(n):
        ei = np.zeros(n)
        ei[i] = h
        out[i, i] = (E(x0 + ei) - 2 * e0 + E(x0 - ei)) / h**2
        for j in range(i + 1, n):
            ej = np.zeros(n)
            ej[j] = h
            out[i, j] = out[j, i] = (
                E(x0 + ei + ej) - E(x0 + ei - ej) - E(x0 - ei + ej) + E(x0 - ei - ej)
            ) / (4 * h**2)
    return out
