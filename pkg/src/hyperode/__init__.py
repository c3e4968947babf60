"""Linear second-order ODEs u'' + h(x) u = 0 through geodesics of a hyperbolic half-plane."""

from __future__ import annotations

from .errors import (DegeneracyError, DomainError, HyperodeError, NumericalError, ParseError,
                     PreconditionError, UnboundParameterError, UnknownFunctionError)
from .expr import HFunction, Jet2, eval_jet, parse
from .geometry import (ChristoffelSet, MetricTensor2, MhPoint, christoffel, fd_christoffel, metric,
                       ricci, riemann_xphixphi, sectional_curvature)
from .geodesic import (ExplicitGeodesic, GeodesicState, GeodesicTrajectory, MinusOmega2,
                       PlusOmega2, Termination, Zero, closed_form_geodesic, explicit_from_parametric,
                       explicit_rhs, geodesic_rhs, integrate_explicit, integrate_geodesic)
from .solutions import (SolutionPair, build_solution_pair, direct_solve, general_solution,
                        geodesic_from_pair, ode_residual, phi_from_pair, reduce_general, theta,
                        verify_reconstruction)
from .halfplane import (DiffeoSpec, HalfPlanePoint, KillingCharges, geodesic_image, jacobian,
                        killing_charges, pde_residual, pullback_check, spec_from_pair,
                        to_halfplane)

__version__ = "0.1.0"

__all__ = [
    "HyperodeError", "ParseError", "UnknownFunctionError", "UnboundParameterError",
    "DomainError", "DegeneracyError", "PreconditionError", "NumericalError",
    "HFunction", "Jet2", "eval_jet", "parse",
    "MhPoint", "MetricTensor2", "ChristoffelSet", "metric", "christoffel", "fd_christoffel",
    "riemann_xphixphi", "sectional_curvature", "ricci",
    "GeodesicState", "GeodesicTrajectory", "ExplicitGeodesic", "Termination", "geodesic_rhs",
    "integrate_geodesic", "explicit_rhs", "integrate_explicit", "explicit_from_parametric",
    "Zero", "MinusOmega2", "PlusOmega2", "closed_form_geodesic",
    "theta", "SolutionPair", "build_solution_pair", "ode_residual", "direct_solve",
    "phi_from_pair", "geodesic_from_pair", "verify_reconstruction", "general_solution",
    "reduce_general",
    "HalfPlanePoint", "DiffeoSpec", "KillingCharges", "spec_from_pair", "to_halfplane",
    "jacobian", "pullback_check", "pde_residual", "killing_charges", "geodesic_image",
]
