"""Angular-momentum coherent states for d-level systems in time-dependent fields.

One 2x2 integration of ``i dw/dt = -w H2(t)`` yields the evolution of every
spin-j block at once.  The package also provides direct d-level integration,
a Fock-space oracle for the spin matrices, and Perelomov coherent states.
"""

from .benchmark import bench
from .coherent import (
    AmcsState,
    amcs_amplitudes,
    amcs_norm_sq,
    amcs_trajectory,
    apply_annihilator,
    cs_representation,
)
from .config import ExperimentConfig, load_config, parse_config
from .dlevel import DLevelState, DLevelTrajectory, axial_solution, evolve_d, expectations, recurrence_residual
from .errors import (
    AmcsError,
    BenchmarkError,
    ChartSingularityError,
    ConfigError,
    ContractError,
    DimensionError,
    DomainError,
    IntegrationError,
    NumericDomainError,
)
from .fields import (
    AxialField,
    ConstantField,
    FieldProfile,
    RotatingField,
    SumField,
    TabulatedField,
    primitive_xi,
    zero_field,
)
from .fock import build_fock, project_block
from .numerics import TimeGrid, mat_exp, propagate, step_unitary
from .pscs import (
    PscsState,
    amcs_to_pscs,
    dinverse_reduction,
    dispersion_saturation,
    pscs_state,
    resolution_of_identity,
    stereographic,
)
from .spin2 import WTrajectory, solve_w
from .spin_ops import SpinOperatorSet, displacement, displacement_inverse, spin_matrices
from .verification import VerificationReport, verify

__version__ = "0.1.0"
