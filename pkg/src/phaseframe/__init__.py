"""Frame transformations that convert geometric quantum gates into dynamical ones
with identical first-order noise response."""
__version__ = '0.1.0'

from .algebra import GeneratorBasis, adjoint_of, gell_mann_basis, pauli_basis  # noqa: E402,F401
from .control import (ControlSchedule, LambdaParams, NuProfile, Su2Params,  # noqa: E402,F401
                      lambda_schedule, modified_lambda_schedule, modified_su2_schedule,
                      orange_slice_schedule, su2_schedule)
from .propagation import Trajectory, propagate  # noqa: E402,F401
from .noise import NoiseChannel, su2_standard_channels, su3_standard_channels  # noqa: E402,F401
from .filterfn import avg_infidelity, filter_function  # noqa: E402,F401
from .equivalence import check_conditions, verify_equivalence, z_axis_transform  # noqa: E402,F401
from .phases import abelian_decompose, nonabelian_connection  # noqa: E402,F401
from .calibrate import zero_phase  # noqa: E402,F401
