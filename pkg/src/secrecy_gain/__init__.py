"""Exact secrecy gains of unimodular lattices from their theta series."""

from .errors import DomainError, InternalError
from .qexp import QSeries, named_form_series, theta_series
from .poly import ZPoly
from .thetasolve import LatticePrefix, ThetaWeights, reconstruct_theta, solve, solve_even, solve_general
from .secrecy import (
    MinimumCertificate,
    certify_minimum,
    even_zpoly,
    gain_at_unity,
    general_zpoly,
    lin_oggier_gain,
    theorem1_unit_difference,
    theorem2_unit_difference,
)

__version__ = "0.1.0"
