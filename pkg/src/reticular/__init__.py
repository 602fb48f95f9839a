"""Exact local algebra of germs on an r-corner and numerical caustics/wavefronts."""
from .jet_algebra import (
    CornerPoly,
    GermSyntaxError,
    JetSpace,
    derivative,
    monomial_basis,
    multiply,
    parse_poly,
    substitute,
    truncate,
)
from .local_algebra import (
    INFINITE,
    IndeterminateError,
    QuotientReport,
    TangentModule,
    codimension,
    determinacy_bound,
    membership,
    tangent_module,
)
from .classifier import NOT_SIMPLE, GermClass, SplitReport, UnsupportedError, classify, is_simple, split

__version__ = "0.1.0"
