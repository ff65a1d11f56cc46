"""Minimal geodesics on R^D via discrete energy minimization over point sequences."""

from .bounds import TheoryConstants, compute_constants, envelope
from .config import ConfigError, Problem, load_problem, problem_from_dict
from .curve import (LinearInterpolant, PointSequence, continuous_energy, continuous_length,
                    evaluate_interpolant, finite_difference)
from .estimator import DiscreteGeodesic
from .metric import (MetricField, christoffel, christoffel_bound, conformal, conformal_cos,
                     default_conformal_phi, euclidean, from_callable, quadratic_form,
                     validate_bounds)
from .objectives import (DiscreteObjective, Functional, NondifferentiableError, Rule,
                         energy_left, energy_trapezoidal, length_left, length_trapezoidal)
from .oracle import OracleFailure, integrate_geodesic, shoot
from .sets import Ball, Box, EndpointSet, HalfSpace, Point
from .solver import SolveConfig, SolveReport, SolverError, minimize, solve_ladder

__version__ = "0.1.0"

__all__ = [
    "Ball", "Box", "ConfigError", "DiscreteGeodesic", "DiscreteObjective", "EndpointSet",
    "Functional", "HalfSpace", "LinearInterpolant", "MetricField", "NondifferentiableError",
    "OracleFailure", "Point", "PointSequence", "Problem", "Rule", "SolveConfig", "SolveReport",
    "SolverError", "TheoryConstants", "christoffel", "christoffel_bound", "compute_constants",
    "conformal", "conformal_cos", "continuous_energy", "continuous_length",
    "default_conformal_phi", "energy_left", "energy_trapezoidal", "envelope", "euclidean",
    "evaluate_interpolant", "finite_difference", "from_callable", "integrate_geodesic",
    "length_left", "length_trapezoidal", "load_problem", "minimize", "problem_from_dict",
    "quadratic_form", "shoot", "solve_ladder", "validate_bounds",
]
