"""Truncated Dirichlet series supported on multiplicative subsemigroups of N."""

from .bohr import (
    Basis,
    ExponentVector,
    MultiPowerSeries,
    drop,
    exponent_vector,
    homogeneous_parts,
    lift,
    poly_evaluate,
    poly_multiply,
)
from .scalars import FLOAT, RATIONAL, GaussianRational
from .semigroup import (
    AtomReport,
    MembershipSieve,
    SemigroupSpec,
    atoms,
    contains,
    factorizations,
    parse_spec,
    sieve,
    verify_closure,
)
from .series import (
    DirichletSeries,
    EvalResult,
    HalfPlanePoint,
    convolve,
    evaluate,
    invert,
    l1_norm,
    l2_norm,
    zeta,
)
from .stable_rank import BezoutSystem, unimodular_tuple, verify_bezout

__version__ = "0.1.0"
