"""Exact cnoidal and solitary traveling waves of coupled Schrodinger-KdV/BBM systems."""
from cnoidal.elliptic import BACKEND, complete_K, jacobi_arrays, jacobi_triple
from cnoidal.errors import (
    CnoidalError,
    ConfigError,
    ConstraintError,
    DegenerateError,
    DomainError,
    NumericalError,
    StabilityError,
    StencilError,
)
from cnoidal.model import PhysicalParams, ProfileCoeffs, SystemKind, WaveParams
from cnoidal.solutions import (
    Branch,
    CnoidalSolution,
    RSign,
    SemiTrivialSolution,
    SolitarySolution,
    cnoidal_params,
    evaluate_fields,
    evaluate_profiles,
    feasible_solutions,
    semi_trivial_catalog,
    semi_trivial_family,
    solitary_limit,
    synchronized_condition,
    synchronized_speed,
    validity,
)

__all__ = [
    "BACKEND",
    "Branch",
    "CnoidalError",
    "CnoidalSolution",
    "ConfigError",
    "ConstraintError",
    "DegenerateError",
    "DomainError",
    "NumericalError",
    "PhysicalParams",
    "ProfileCoeffs",
    "RSign",
    "SemiTrivialSolution",
    "SolitarySolution",
    "StabilityError",
    "StencilError",
    "SystemKind",
    "WaveParams",
    "cnoidal_params",
    "complete_K",
    "evaluate_fields",
    "evaluate_profiles",
    "feasible_solutions",
    "jacobi_arrays",
    "jacobi_triple",
    "semi_trivial_catalog",
    "semi_trivial_family",
    "solitary_limit",
    "synchronized_condition",
    "synchronized_speed",
    "validity",
]

__version__ = "0.1.0"
