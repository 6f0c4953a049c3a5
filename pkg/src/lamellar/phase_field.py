"""Spectral diffuse-interface flow for the full free energy on a periodic grid.

The diffuse energy of a grid function u (samples at j/M, M a power of two) is

    E_eps(u) = (1/2) sum_k s_H(k) |u_k|^2
             + eps^(-2s) * mean(W(u))
             + (1/2) sum_k s_K(k) |u_k|^2,

with Fourier multipliers s_H(k) = (2 pi |k|)^(2s), s_K(k) = (2 pi gamma k)^(-2)
(both zero at k = 0), double well W(u) = (1 - u^2)^2 / 4, and the
energy-unitary transform convention u_k = FFT(u)_k / M so that
sum_k |u_k|^2 = mean(u^2).

Relaxation uses a mass-conserving semi-implicit step: the two linear
multipliers are treated implicitly, the well term explicitly with an extra
stabilization kappa, and mode 0 is frozen.  A step that raises the energy is
retried with half the time step (up to 20 halvings), so accepted energy
traces are non-increasing by construction.  The flow is a relaxation device:
only its critical points carry meaning.
"""

import struct
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import profiles, sharp_energy
from .errors import DomainError, StepFailureError
from .profiles import StepProfile
from .sharp_energy import EnergyBreakdown, ModelParams

CHECKPOINT_MAGIC = b"LLPF"
CHECKPOINT_VERSION = 1
OVERSHOOT_BUDGET = 0.1


def _check_power_of_two(m):
    if m < 2 or (m & (m - 1)) != 0:
        raise DomainError(f"grid size must be a power of two, got {m}")


@dataclass(frozen=True)
class GridState:
    """Periodic grid samples of the order parameter, mean pinned to params.m."""

    values: np.ndarray
    params: ModelParams

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        _check_power_of_two(vals.size)
        if not np.all(np.isfinite(vals)):
            raise DomainError("grid values must be finite")
        if abs(float(np.mean(vals)) - self.params.m) > 1e-12:
            raise DomainError(
                f"grid mean {float(np.mean(vals))!r} differs from m = {self.params.m}"
            )
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def points(self) -> int:
        return self.values.size

    def within_budget(self, budget: float = OVERSHOOT_BUDGET) -> bool:
        """Health check |u| <= 1 + budget; monitored, never projected."""
        return float(np.max(np.abs(self.values))) <= 1.0 + budget


@dataclass(frozen=True)
class FlowConfig:
    """Time step, explicit-term stabilization, and stopping control."""

    dt: float = 1e-3
    stabilization: Optional[float] = None  # None: 2 eps^(-2s) at runtime
    max_steps: int = 10000
    energy_tolerance: float = 1e-12

    def __post_init__(self):
        if not self.dt > 0.0:
            raise DomainError("dt must be positive")
        if self.stabilization is not None and self.stabilization < 0.0:
            raise DomainError("stabilization must be nonnegative")
        if self.max_steps < 1:
            raise DomainError("max_steps must be positive")
        if not self.energy_tolerance > 0.0:
            raise DomainError("energy_tolerance must be positive")


def spectral_symbols(m: int, mp: ModelParams):
    """Multiplier arrays (s_H, s_K) on the signed FFT frequencies of a size-M grid."""
    _check_power_of_two(m)
    k = np.abs(np.fft.fftfreq(m, d=1.0 / m))
    s_h = np.zeros(m)
    s_k = np.zeros(m)
    nz = k > 0
    s_h[nz] = (2.0 * np.pi * k[nz]) ** (2.0 * mp.s)
    s_k[nz] = 1.0 / (2.0 * np.pi * mp.gamma * k[nz]) ** 2
    return s_h, s_k


def double_well(u):
    """W(u) = (1 - u^2)^2 / 4, minima at +-1, W(0) = 1/4."""
    return (1.0 - u * u) ** 2 / 4.0


def double_well_prime(u):
    """W'(u) = u^3 - u."""
    return u**3 - u


def energy_eps(state: GridState) -> EnergyBreakdown:
    """Diffuse energy breakdown of a grid state."""
    u = state.values
    m = u.size
    uk = np.fft.fft(u) / m
    s_h, s_k = spectral_symbols(m, state.params)
    power = np.abs(uk) ** 2
    h = 0.5 * float(np.sum(s_h * power))
    k = 0.5 * float(np.sum(s_k * power))
    w = state.params.epsilon ** (-2.0 * state.params.s) * float(np.mean(double_well(u)))
    return EnergyBreakdown(h, w, k, h + w + k)


@dataclass(frozen=True)
class StepResult:
    state: GridState
    dt: float
    energy: EnergyBreakdown
    halvings: int


def _semi_implicit_update(state: GridState, dt: float, kappa: float, include_well: bool):
    u = state.values
    m = u.size
    s_h, s_k = spectral_symbols(m, state.params)
    uk = np.fft.fft(u) / m
    if include_well:
        phi = state.params.epsilon ** (-2.0 * state.params.s) * double_well_prime(u)
        phik = np.fft.fft(phi) / m
    else:
        phik = np.zeros_like(uk)
    new = (uk * (1.0 + dt * kappa) - dt * phik) / (1.0 + dt * (s_h + s_k + kappa))
    new[0] = uk[0]  # frozen mean: exact mass conservation
    return np.real(np.fft.ifft(new * m))


def flow_step(
    state: GridState, cfg: FlowConfig, include_well: bool = True, max_halvings: int = 20
) -> StepResult:
    """One mass-conserving semi-implicit step with energy-decrease retry.

    Starts from cfg.dt and halves the step until the energy does not
    increase; raises StepFailureError after max_halvings rejections.
    """
    kappa = (
        cfg.stabilization
        if cfg.stabilization is not None
        else 2.0 * state.params.epsilon ** (-2.0 * state.params.s)
    )
    e_old = energy_eps(state).total
    dt = cfg.dt
    for _ in range(max_halvings + 1):
        candidate = GridState(
            _semi_implicit_update(state, dt, kappa, include_well), state.params
        )
        e_new = energy_eps(candidate)
        if e_new.total <= e_old:
            return StepResult(candidate, dt, e_new, 0)
        dt *= 0.5
    raise StepFailureError(
        f"step rejected after {max_halvings} halvings (dt down to {dt:.3e})"
    )


@dataclass
class FlowDiagnostics:
    """Energy trace, accepted step sizes, and mass history of a flow run."""

    energies: list = field(default_factory=list)
    dts: list = field(default_factory=list)
    masses: list = field(default_factory=list)
    steps: int = 0
    converged: bool = False
    max_abs: float = 0.0  # health monitor: overshoot beyond 1 is not projected


def run_flow(state: GridState, cfg: FlowConfig):
    """Relax until |dE| < energy_tolerance over 50 consecutive steps or max_steps."""
    diag = FlowDiagnostics()
    diag.energies.append(energy_eps(state))
    diag.masses.append(float(np.mean(state.values)))
    diag.max_abs = float(np.max(np.abs(state.values)))
    quiet = 0
    for _ in range(cfg.max_steps):
        res = flow_step(state, cfg)
        state = res.state
        diag.steps += 1
        diag.dts.append(res.dt)
        diag.energies.append(res.energy)
        diag.masses.append(float(np.mean(state.values)))
        diag.max_abs = max(diag.max_abs, float(np.max(np.abs(state.values))))
        if abs(diag.energies[-1].total - diag.energies[-2].total) < cfg.energy_tolerance:
            quiet += 1
            if quiet >= 50:
                diag.converged = True
                break
        else:
            quiet = 0
    return state, diag


def sample_profile(p: StepProfile, m: int, mp: ModelParams) -> GridState:
    """Grid samples of a step profile (right-continuous at interfaces)."""
    vals = profiles.evaluate(p, np.arange(m) / m).astype(float)
    params = ModelParams(mp.s, mp.gamma, float(np.mean(vals)), mp.epsilon)
    return GridState(vals, params)


def smoothed_profile(p: StepProfile, m: int, mp: ModelParams, width: float) -> GridState:
    """Gaussian-mollified profile samples, mean-corrected to the profile mass."""
    raw = profiles.evaluate(p, np.arange(m) / m).astype(float)
    k = np.fft.fftfreq(m, d=1.0 / m)
    filt = np.exp(-0.5 * (2.0 * np.pi * k * width) ** 2)
    vals = np.real(np.fft.ifft(np.fft.fft(raw) * filt))
    vals += p.mass - np.mean(vals)
    params = ModelParams(mp.s, mp.gamma, float(np.mean(vals)), mp.epsilon)
    return GridState(vals, params)


def add_noise(state: GridState, amplitude: float, seed: int) -> GridState:
    """Seeded mean-free uniform noise of the given max amplitude."""
    rng = np.random.default_rng(seed)
    noise = rng.uniform(-1.0, 1.0, state.points)
    noise -= np.mean(noise)
    noise *= amplitude / max(1e-300, float(np.max(np.abs(noise))))
    noise -= np.mean(noise)
    return GridState(state.values + noise, state.params)


def grid_distance(state: GridState, p: StepProfile) -> float:
    """Grid-discretized L2 distance between the state and a step profile."""
    step = profiles.evaluate(p, np.arange(state.points) / state.points)
    return float(np.sqrt(np.mean((state.values - step) ** 2)))


@dataclass(frozen=True)
class GammaLimitRecord:
    """Per-epsilon outcome of the sharp-interface limit experiment."""

    epsilon: float
    energy: EnergyBreakdown
    distance: float
    energy_gap: float
    steps: int
    nearest: StepProfile


def gamma_limit_experiment(
    eps_schedule, base: GridState, cfg: FlowConfig, n_target: int, tail_terms: int = None
):
    """Relax along a decreasing epsilon schedule and track the sharp limit.

    Every epsilon restarts from the same base state so the runs differ only
    through the well stiffness eps^(-2s); with a fixed step budget the
    relaxed state stays the closer to the sharp-interface class the smaller
    eps is.  Records the final diffuse energy, the grid L2 distance to the
    nearest admissible N-interface profile, and the gap to that profile's
    sharp energy.
    """
    eps = [float(e) for e in eps_schedule]
    if any(b >= a for a, b in zip(eps, eps[1:])):
        raise DomainError("epsilon schedule must be strictly decreasing")
    records = []
    state = base
    for e in eps:
        params = ModelParams(base.params.s, base.params.gamma, base.params.m, e)
        state = GridState(base.values, params)
        state, diag = run_flow(state, cfg)
        nearest = profiles.nearest_step_profile(state.values, n_target)
        kwargs = {} if tail_terms is None else {"tail_terms": tail_terms}
        sharp = sharp_energy.energy_total(nearest, params, **kwargs)
        final = diag.energies[-1]
        records.append(
            GammaLimitRecord(
                epsilon=e,
                energy=final,
                distance=grid_distance(state, nearest),
                energy_gap=final.total - sharp.total,
                steps=diag.steps,
                nearest=nearest,
            )
        )
    return state, records


def save_state(state: GridState, path) -> None:
    """Binary checkpoint: magic 'LLPF', version u32, M u32, then M float64 (LE)."""
    with open(path, "wb") as fh:
        fh.write(CHECKPOINT_MAGIC)
        fh.write(struct.pack("<II", CHECKPOINT_VERSION, state.points))
        fh.write(state.values.astype("<f8").tobytes())


def load_state(path, mp: ModelParams) -> GridState:
    """Read a checkpoint back; model parameters are supplied by the caller."""
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != CHECKPOINT_MAGIC:
            raise DomainError(f"bad checkpoint magic {magic!r}")
        version, m = struct.unpack("<II", fh.read(8))
        if version != CHECKPOINT_VERSION:
            raise DomainError(f"unsupported checkpoint version {version}")
        vals = np.frombuffer(fh.read(8 * m), dtype="<f8").astype(float)
    if vals.size != m:
        raise DomainError("truncated checkpoint")
    params = ModelParams(mp.s, mp.gamma, float(np.mean(vals)), mp.epsilon)
    return GridState(vals, params)
