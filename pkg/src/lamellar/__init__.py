"""Numerical laboratory for a doubly nonlocal lamellar energy on the circle.

Sharp-interface energies, gradients, Hessians and stability spectra of
alternating step profiles under the free energy H + K (fractional seminorm
plus long-range H^-1 term), together with a spectral diffuse-interface
relaxation of the full eps-dependent functional.
"""

__version__ = "0.1.0"

from .kernels import (
    GreenParams,
    KernelParams,
    green_value,
    kernel_primitive,
    kernel_value,
    normalization_c1s,
)
from .profiles import (
    StepProfile,
    TangentVector,
    evaluate,
    from_interfaces,
    l2_distance,
    make_equidistributed,
    mass,
    nearest_step_profile,
    perturb,
    tangent_project,
)
from .sharp_energy import (
    EnergyBreakdown,
    ModelParams,
    energy_H,
    energy_K,
    energy_total,
    grad_E,
    hessian_E,
    lagrange_multiplier,
)
from .spectrum import (
    CirculantRow,
    SpectrumReport,
    circulant_eigenvalues,
    circulant_row_at_UN,
    classify,
    critical_gamma,
    gamma0,
    green_part_closed_form,
    green_part_direct,
    kernel_part,
)
from .potential import K_from_v, PotentialSeries, v_explicit, v_fourier, vprime_explicit
from .phase_field import (
    FlowConfig,
    GridState,
    energy_eps,
    flow_step,
    gamma_limit_experiment,
    run_flow,
    spectral_symbols,
)
