"""Step profiles on the periodic unit interval.

A profile has an even number N of ordered interfaces 0 < x_1 < ... < x_N < 1,
takes the value +1 on [0, x_1) and alternates at each interface (so the block
containing 0 is always +1 by convention), and satisfies the mass identity

    sum_k (-1)^k x_k = (1 - m) / 2,        m = integral of the profile.

Tangent vectors are interface displacements orthogonal to the alternating
vector e = (1, -1, ..., 1, -1); these are exactly the mass-preserving
directions.  Profiles and tangent vectors are immutable.
"""

import json
from dataclasses import dataclass

import numpy as np

from .errors import DetectionError, DomainError, OrderingError

MASS_TOL = 1e-12


def _as_float_tuple(values):
    arr = np.asarray(values, dtype=float).ravel()
    return tuple(float(v) for v in arr)


@dataclass(frozen=True)
class StepProfile:
    """Immutable element of the admissible step-function class."""

    n_interfaces: int
    interfaces: tuple
    mass: float

    def __post_init__(self):
        n = int(self.n_interfaces)
        if n < 2 or n % 2 != 0:
            raise DomainError(f"number of interfaces must be even and >= 2, got {n}")
        xs = _as_float_tuple(self.interfaces)
        if len(xs) != n:
            raise DomainError(f"expected {n} interfaces, got {len(xs)}")
        arr = np.asarray(xs)
        if not (arr[0] > 0.0 and arr[-1] < 1.0 and np.all(np.diff(arr) > 0.0)):
            raise OrderingError("interfaces must be strictly increasing inside (0, 1)")
        if not (-1.0 < float(self.mass) < 1.0):
            raise DomainError(f"mass must lie in (-1, 1), got {self.mass}")
        derived = derived_mass(arr)
        if abs(derived - float(self.mass)) > MASS_TOL:
            raise DomainError(
                f"stored mass {self.mass} disagrees with interface mass {derived}"
            )
        object.__setattr__(self, "n_interfaces", n)
        object.__setattr__(self, "interfaces", xs)
        object.__setattr__(self, "mass", float(self.mass))

    @property
    def x(self):
        return np.asarray(self.interfaces)

    def to_json(self) -> str:
        return json.dumps(
            {"N": self.n_interfaces, "m": self.mass, "interfaces": list(self.interfaces)}
        )

    @staticmethod
    def from_json(text: str) -> "StepProfile":
        doc = json.loads(text)
        return StepProfile(int(doc["N"]), tuple(doc["interfaces"]), float(doc["m"]))


def derived_mass(interfaces) -> float:
    """Mass 1 - 2 sum_k (-1)^k x_k computed from interface positions alone."""
    xs = np.asarray(interfaces, dtype=float)
    signs = np.where(np.arange(1, xs.size + 1) % 2 == 0, 1.0, -1.0)
    return 1.0 - 2.0 * float(np.dot(signs, xs))


def from_interfaces(interfaces) -> StepProfile:
    """Build a profile taking the mass from the interfaces."""
    xs = _as_float_tuple(interfaces)
    return StepProfile(len(xs), xs, derived_mass(xs))


@dataclass(frozen=True)
class TangentVector:
    """Mass-preserving interface displacement: orthogonal to (1,-1,...,1,-1)."""

    components: tuple

    def __post_init__(self):
        comp = _as_float_tuple(self.components)
        n = len(comp)
        if n < 2 or n % 2 != 0:
            raise DomainError("tangent vectors live over an even number of interfaces")
        arr = np.asarray(comp)
        scale = max(1.0, float(np.max(np.abs(arr))))
        if abs(_alt_sum(arr)) > 1e-12 * scale:
            raise DomainError("tangent vector must be orthogonal to (1,-1,...,1,-1)")
        object.__setattr__(self, "components", comp)

    @property
    def v(self):
        return np.asarray(self.components)


def _alt_sum(arr):
    signs = np.where(np.arange(1, arr.size + 1) % 2 == 0, -1.0, 1.0)
    return float(np.dot(signs, arr))


def make_equidistributed(n: int) -> StepProfile:
    """The lamellar candidate with interfaces x_k = (2k - 1) / (2N), mass 0."""
    if n < 2 or n % 2 != 0:
        raise DomainError(f"N must be even and >= 2, got {n}")
    xs = (2.0 * np.arange(1, n + 1) - 1.0) / (2.0 * n)
    return StepProfile(n, tuple(float(v) for v in xs), 0.0)


def evaluate(p: StepProfile, x):
    """Profile value in {-1, +1}; right-continuous at interfaces."""
    xs = np.asarray(x, dtype=float) % 1.0
    # number of interfaces <= x, counting the interface itself (value from the right)
    crossed = np.searchsorted(p.x, xs, side="right")
    out = np.where(crossed % 2 == 0, 1, -1)
    return int(out) if out.ndim == 0 else out


def mass(p: StepProfile) -> float:
    """Mass recomputed from the interfaces (equals the stored mass)."""
    return derived_mass(p.x)


def perturb(p: StepProfile, v: TangentVector, t: float) -> StepProfile:
    """Move interfaces along a tangent direction: x_k + t v_k, mass unchanged."""
    if len(v.components) != p.n_interfaces:
        raise DomainError("tangent vector dimension mismatch")
    xs = p.x + t * v.v
    if not (xs[0] > 0.0 and xs[-1] < 1.0 and np.all(np.diff(xs) > 0.0)):
        raise OrderingError("perturbation collides interfaces or exits (0, 1)")
    return StepProfile(p.n_interfaces, tuple(float(u) for u in xs), p.mass)


def tangent_project(w) -> TangentVector:
    """Orthogonal projection w - (<w, e>/N) e onto the tangent space."""
    arr = np.asarray(w, dtype=float).ravel()
    n = arr.size
    if n < 2 or n % 2 != 0:
        raise DomainError("projection requires an even number of components")
    e = np.where(np.arange(1, n + 1) % 2 == 0, -1.0, 1.0)
    proj = arr - (np.dot(arr, e) / n) * e
    # kill the residual roundoff so construction never rejects
    proj -= (np.dot(proj, e) / n) * e
    return TangentVector(tuple(float(u) for u in proj))


def l2_distance(p: StepProfile, q: StepProfile) -> float:
    """Exact L2([0,1]) distance between the two step functions.

    Each interval of disagreement contributes 4 * its length to the squared
    distance; the breakpoints are the sorted union of both interface sets.
    """
    cuts = np.concatenate(([0.0], np.sort(np.concatenate((p.x, q.x))), [1.0]))
    mids = 0.5 * (cuts[:-1] + cuts[1:])
    lengths = np.diff(cuts)
    disagree = evaluate(p, mids) != evaluate(q, mids)
    return float(np.sqrt(4.0 * np.sum(lengths[disagree])))


def _crossings_from_samples(samples):
    """Sub-grid zero crossings of periodic samples, via linear interpolation."""
    s = np.asarray(samples, dtype=float)
    m = s.size
    nxt = np.roll(s, -1)
    idx = np.nonzero(np.sign(s) * np.sign(nxt) < 0)[0]
    frac = s[idx] / (s[idx] - nxt[idx])
    return ((idx + frac) / m) % 1.0


def nearest_step_profile(samples, n: int) -> StepProfile:
    """Closest N-interface profile to periodic grid samples.

    Initializes interfaces at the N dominant zero crossings, shifts them along
    the constraint normal so the profile mass equals the sample mean, then
    refines with coordinate descent over adjacent-pair tangent moves against
    the grid-discretized L2 distance.
    """
    s = np.asarray(samples, dtype=float)
    m = s.size
    if n < 2 or n % 2 != 0:
        raise DomainError("N must be even and >= 2")
    if m < 2 * n:
        raise DomainError("need at least 2N samples")
    if s[0] < 0.0:
        raise DetectionError(
            "samples are negative at 0; the admissible class starts with a +1 block"
        )
    crossings = np.sort(_crossings_from_samples(s))
    if crossings.size < n:
        raise DetectionError(f"found {crossings.size} sign changes, need {n}")
    while crossings.size > n:
        # drop the pair bounding the shortest block (weakest feature)
        gaps = np.diff(np.concatenate((crossings, [crossings[0] + 1.0])))
        k = int(np.argmin(gaps))
        keep = np.ones(crossings.size, dtype=bool)
        keep[k] = keep[(k + 1) % crossings.size] = False
        crossings = crossings[keep]

    target = (1.0 - float(np.mean(s))) / 2.0
    signs = np.where(np.arange(1, n + 1) % 2 == 0, 1.0, -1.0)  # (-1)^k
    delta = (target - float(np.dot(signs, crossings))) / n
    xs = crossings + delta * signs

    grid = np.arange(m) / m

    def dist2(x):
        vals = np.where(np.searchsorted(x, grid, side="right") % 2 == 0, 1.0, -1.0)
        return float(np.mean((s - vals) ** 2))

    steps = np.array([4.0, 2.0, 1.0, 0.5]) / m
    for _ in range(3):
        for i in range(n - 1):
            best = dist2(xs)
            best_move = 0.0
            for h in steps:
                for move in (h, -h):
                    cand = xs.copy()
                    cand[i] += move
                    cand[i + 1] += move
                    if not (cand[0] > 0 and cand[-1] < 1 and np.all(np.diff(cand) > 0)):
                        continue
                    d = dist2(cand)
                    if d < best:
                        best, best_move = d, move
            xs[i] += best_move
            xs[i + 1] += best_move

    # land exactly back on the sample-mean mass identity
    xs += ((target - float(np.dot(signs, xs))) / n) * signs
    return StepProfile(n, tuple(float(u) for u in xs), float(np.mean(s)))
