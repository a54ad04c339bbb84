"""Braid monodromy, van Kampen presentations and group invariants for quadric arrangements."""

from .braids import Braid, FullTwistSpec, HalfTwist, artin_apply, band_generator, fulltwist
from .invariants import (
    AbelianInvariants,
    FiniteGroup,
    Fingerprint,
    abelianization,
    bigness_certificate,
    count_homs,
    fingerprint,
    smith_normal_form,
)
from .monodromy import (
    MonodromyTable,
    SingularFactor,
    builtin_table,
    formula_relations,
    parse_table,
    tangency_relations,
    target_presentation,
)
from .presentation import Presentation, involution_transform, quotient_kill, simplify
from .vankampen import present, relations_from_factor
from .words import Word

__all__ = [
    "AbelianInvariants", "Braid", "FiniteGroup", "Fingerprint", "FullTwistSpec", "HalfTwist",
    "MonodromyTable", "Presentation", "SingularFactor", "Word", "abelianization", "artin_apply",
    "band_generator", "bigness_certificate", "builtin_table", "count_homs", "fingerprint",
    "formula_relations", "fulltwist", "involution_transform", "parse_table", "present",
    "quotient_kill", "relations_from_factor", "simplify", "smith_normal_form",
    "tangency_relations", "target_presentation",
]
