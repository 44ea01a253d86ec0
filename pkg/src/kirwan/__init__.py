"""Exact computation of Kirwan images through abelianization.

Everything runs over Q (or Q(x) after inverting the equivariant parameter):
Groebner bases with certified S-criterion checks, colon-ideal presentations
of quotient cohomology, Atiyah-Bott style localization against explicit
fixed-point models, and the hyperpolygon family as the worked class of
examples, complete with replayable membership certificates.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .errors import (
    BudgetExceeded,
    InexactDivisionError,
    KirwanError,
    NonGenericError,
    ParseError,
    VerificationError,
)
from .rings import (
    Polynomial,
    VariableTable,
    format_polynomial,
    parse_polynomial,
)
from .ratfield import RationalFunction
from .ideals import Budgets, Ideal, QuotientRing, formality_check
from .cofactors import express_in_ideal
from .localization import (
    CircleCompactModel,
    EquivariantClass,
    FixedComponent,
    ModelMap,
    ProductModel,
    diagonal_basis,
    load_fixture,
    verify_integration_adjunction,
)
from .abelianize import (
    DagQuiver,
    KirwanPresentation,
    RootDatum,
    class_b,
    class_e,
    class_eprime,
    kirwan_image,
    proper_quiver_weights,
    verify_second_iso,
)
from .hyperpolygon import (
    EdgeLengths,
    HyperpolygonInstance,
    MembershipCertificate,
    betti_numbers,
    certify_membership,
    full_report,
    konno_ring,
    prop_hp,
)

__all__ = [
    "__version__",
    "BudgetExceeded",
    "Budgets",
    "CircleCompactModel",
    "DagQuiver",
    "EdgeLengths",
    "EquivariantClass",
    "FixedComponent",
    "HyperpolygonInstance",
    "Ideal",
    "InexactDivisionError",
    "KirwanError",
    "KirwanPresentation",
    "MembershipCertificate",
    "ModelMap",
    "NonGenericError",
    "ParseError",
    "Polynomial",
    "ProductModel",
    "QuotientRing",
    "RationalFunction",
    "RootDatum",
    "VariableTable",
    "VerificationError",
    "betti_numbers",
    "certify_membership",
    "class_b",
    "class_e",
    "class_eprime",
    "diagonal_basis",
    "express_in_ideal",
    "formality_check",
    "format_polynomial",
    "full_report",
    "kirwan_image",
    "konno_ring",
    "load_fixture",
    "parse_polynomial",
    "prop_hp",
    "proper_quiver_weights",
    "verify_integration_adjunction",
    "verify_second_iso",
]
