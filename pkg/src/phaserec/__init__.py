"""Fixed-energy scattering by compact potentials and phase recovery from phaseless data."""

from .errors import (
    DegenerateOffsetsError,
    DegeneratePairError,
    DomainError,
    GeometryError,
    InsufficientDataError,
    PhaserecError,
    SolverError,
    ValidationError,
)
from .far_field import (
    FarFieldConstant,
    FarFieldEntry,
    background_a0,
    farfield_constant,
    leading_field,
    phaseless_a,
    scattering_amplitude,
)
from .forward import (
    PlaneWaveContext,
    ScatteringSolution,
    born_amplitude,
    evaluate_psi,
    green_free,
    solve_psi_on_support,
)
from .medium import GridDiscretization, Potential, acoustic_to_potential, discretize, make_potential
from .recovery import (
    PhaseRecoveryResult,
    RaySampleSet,
    estimate_decay_slope,
    generate_ray_samples,
    period_T,
    recover_f_at_n,
    recover_f_sequence,
)
from .resolvent import (
    ResolventField,
    evaluate_resolvent,
    psi_sq_from_resolvent,
    reciprocity_defect,
    solve_resolvent_field,
)
from .special_functions import bessel_j0, bessel_y0, hankel1_0

__version__ = "0.1.0"
