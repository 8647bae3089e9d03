"""Finite Miquelian Moebius planes M(p^m) and Steiner chains in them."""

from .errors import *  # noqa: F401,F403  (re-export the exception hierarchy)
from .gf import ExtElem, ExtField, Field, FieldElem, ext_create, field_create, mult_order
from .plane import (
    INF,
    Circle1,
    Circle2,
    MoebiusMap,
    Plane,
    circle_points,
    circle_through,
    format_circle,
    intersect,
    moebius_apply_circle,
    parse_circle,
)
from .tangency import common_tangents, tangent_families, tangent_point
from .steiner import (
    Chain,
    build_chain,
    capacitance,
    chain_length,
    chain_rotors,
    closed_form_mu,
    concentric_reduction,
    general_criterion,
    proper_lengths,
    search_mu,
)

__version__ = "0.1.0"
