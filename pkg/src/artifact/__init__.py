"""Truncated matricial Hausdorff moment problem on a compact interval."""
from .matlin import DEFAULT_TOL, DomainError, Tolerance
from .hausdorff_seq import (
    CanonicalParams,
    MomentSequence,
    canonical_moments,
    classify,
    extend,
    f_params,
    from_canonical,
    interval_data,
)
from .schur_transform import f_transform, transform_chain
from .measures import ContourConfig, MolecularMeasure, arcsine, moments, moments_from_transform, stieltjes_eval
from .resolvent import MatrixPoly2q, SingularDenominator, lft, resolvent_polynomial, step_polynomial
from .solutions import (
    ParameterPair,
    check_pair_admissible,
    check_rab_membership,
    make_pair,
    solution,
    solve,
    special,
)

__version__ = "0.1.0"
