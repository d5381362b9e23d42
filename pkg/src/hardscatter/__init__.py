"""Scattering maps and collision invariants for planar convex hard particles and hard spheres."""

__version__ = "0.1.0"

from .errors import DomainError, InputError, InvalidStateError, UnsupportedBodyError
from .geometry import (
    CollisionParam2D,
    ContactData,
    ConvexBody2D,
    MassInertia,
    body_from_dict,
    contact_data,
    docd,
    docd_partials,
    gap_function,
    load_body,
    support,
)
from .scattering import (
    ScatteringMatrix2D,
    VelocityState2D,
    apply,
    e_beta,
    e_hats,
    elementwise_canonical,
    elementwise_noncanonical,
    sigma_canonical,
    sigma_noncanonical,
    unit_normal_N,
    verify_family,
    verify_physical,
)

__all__ = [
    "CollisionParam2D", "ContactData", "ConvexBody2D", "DomainError", "InputError", "InvalidStateError",
    "MassInertia", "ScatteringMatrix2D", "UnsupportedBodyError", "VelocityState2D", "apply", "body_from_dict",
    "contact_data", "docd", "docd_partials", "e_beta", "e_hats", "elementwise_canonical",
    "elementwise_noncanonical", "gap_function", "load_body", "sigma_canonical", "sigma_noncanonical",
    "support", "unit_normal_N", "verify_family", "verify_physical",
]
