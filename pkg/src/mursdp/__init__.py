"""
Measurement uncertainty relations for finite-dimensional observables.

Optimal transport costs between outcome distributions, three error
measures for approximate joint measurements, and semidefinite programs
for the offsets of the resulting uncertainty regions.
"""

__version__ = "0.1.0"

from .errors import ErrorMeasure, appleby_pointwise, cost_caps, err_cal, err_ent, err_max
from .numerics import NumericalError, ValidationError, eig_hermitian
from .observables import (
    JointMeasurement,
    Observable,
    State,
    fourier_pair,
    marginal,
    outcome_distribution,
    projective_from_basis,
    random_joint_measurement,
    spin1_triple,
)
from .region import BoundaryPoint, ProblemInstance, RegionSample, offset, trace_boundary
from .sdp import SdpBuilder, SdpProblem, SdpSolution, residuals, solve
from .transport import (
    CostFunction,
    PricingScheme,
    SchemeFamily,
    enumerate_mccm,
    pricing_from_ccm,
    scheme_family,
    transport_cost_dual,
    transport_cost_primal,
)
