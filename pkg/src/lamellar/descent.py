"""Projected gradient descent on the sharp energy over interface positions.

The search direction is the negative tangent-projected gradient (mass is
preserved exactly); the step comes from a doubling/backtracking line search
on the total energy.  Because the energy is translation invariant, the
gradient is orthogonal to (1, ..., 1) and descent never drifts the profile
sideways; perturbations are therefore drawn mean-free as well, so a run that
converges lands on the equidistributed profile itself rather than one of its
translates.

Near the minimum at small gamma the energy is O(1/gamma^2) while its
floating-point resolution is O(eps_mach / gamma^2), so the line search stops
making progress at interface displacements around 1e-9 long before a
gradient threshold of 1e-9 is reachable; a line-search failure after earlier
accepted steps smaller than `stall_displacement` is reported as status
"stalled" rather than an error.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import LineSearchError
from .kernels import DEFAULT_TAIL_TERMS
from .profiles import StepProfile, tangent_project
from .sharp_energy import ModelParams, energy_total, grad_E

MAX_HALVINGS = 60


def seeded_tangent_noise(n: int, amplitude: float, seed: int):
    """Mean-free tangent perturbation with max-norm `amplitude`."""
    rng = np.random.default_rng(seed)
    w = rng.uniform(-1.0, 1.0, n)
    v = tangent_project(w).v
    v = v - np.mean(v)
    scale = float(np.max(np.abs(v)))
    if scale == 0.0:
        return np.zeros(n)
    return amplitude * v / scale


@dataclass
class DescentResult:
    profile: StepProfile
    energies: list = field(default_factory=list)
    grad_norms: list = field(default_factory=list)
    iterations: int = 0
    status: str = "converged"


def _try_profile(p: StepProfile, step):
    xs = p.x + step
    if not (xs[0] > 0.0 and xs[-1] < 1.0 and np.all(np.diff(xs) > 0.0)):
        return None
    return StepProfile(p.n_interfaces, tuple(float(v) for v in xs), p.mass)


def projected_descent(
    p: StepProfile,
    mp: ModelParams,
    gtol: float = 1e-9,
    max_iters: int = 500,
    tail_terms: int = DEFAULT_TAIL_TERMS,
    stall_displacement: float = 1e-6,
) -> DescentResult:
    """Minimize the sharp energy over mass-preserving interface motions."""
    res = DescentResult(profile=p)
    energy = energy_total(p, mp, tail_terms).total
    res.energies.append(energy)
    eta = None
    last_disp = np.inf
    for it in range(max_iters):
        g = tangent_project(grad_E(p, mp, tail_terms)).v
        gn = float(np.max(np.abs(g)))
        res.grad_norms.append(gn)
        if gn < gtol:
            res.status = "converged"
            res.iterations = it
            res.profile = p
            return res
        if eta is None:
            gaps = np.diff(np.concatenate(([0.0], p.x, [1.0])))
            eta = 0.25 * float(np.min(gaps)) / gn
        else:
            eta *= 2.0
        accepted = False
        for _ in range(MAX_HALVINGS):
            cand = _try_profile(p, -eta * g)
            if cand is not None:
                e_new = energy_total(cand, mp, tail_terms).total
                if e_new < energy:
                    p, energy = cand, e_new
                    last_disp = eta * gn
                    res.energies.append(energy)
                    accepted = True
                    break
            eta *= 0.5
        if not accepted:
            res.iterations = it
            res.profile = p
            if it > 0 and last_disp < stall_displacement:
                res.status = "stalled"
                return res
            raise LineSearchError(
                f"line search failed after {MAX_HALVINGS} halvings at iteration {it} "
                f"(gradient max-norm {gn:.3e})"
            )
    res.status = "max_iterations"
    res.iterations = max_iters
    res.profile = p
    return res
