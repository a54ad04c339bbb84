"""Presentations from monodromy tables via the van Kampen rule."""

from __future__ import annotations

from typing import Sequence

from .braids import DEFAULT_CONVENTION, Braid, path_conjugator_word
from .monodromy import RANGE, MonodromyTable, SingularFactor, tangency_relations
from .presentation import Presentation, normalize_relators
from .words import Word, commutator

ORIENTATIONS = ("descending", "ascending")


def relations_from_factor(b: Braid, convention: str = DEFAULT_CONVENTION) -> list[Word]:
    """Relators ``phi_b(x_i) x_i^-1`` for every i, reduced, deduplicated, nontrivial."""
    rels = [img * Word.gen(i).inverse() for i, img in enumerate(b.images(convention), 1)]
    return list(normalize_relators(rels))


def template_relations(f: SingularFactor, p: int,
                       convention: str = DEFAULT_CONVENTION) -> list[Word]:
    """The per-type relation read off the endpoints of the twisted arc.

    With A, B the images of the two meridians the half-twist exchanges:
    branch point A = B, node [A, B], tangency (AB)^2 = (BA)^2, and fourth
    powers for epsilon 8.  Range factors give the rotated-product family.
    Used only to cross-check :func:`relations_from_factor`.
    """
    conj = Braid(p, f.conjugator)
    if f.path == RANGE:
        ends = [conj.act(Word.gen(m), convention) for m in range(f.i, f.j + 1)]
        return list(normalize_relators(tangency_relations(ends, f.epsilon // 2)))
    full = conj * Braid(p, path_conjugator_word(f.i, f.j, f.path))
    a, b = (full.act(Word.gen(k), convention) for k in (f.i, f.i + 1))
    if f.epsilon == 1:
        rel = a * b.inverse()
    elif f.epsilon == 2:
        rel = commutator(a, b)
    else:
        m = f.epsilon // 2
        rel = (a * b) ** m * ((b * a) ** m).inverse()
    return list(normalize_relators([rel]))


def projective_word(p: int, orientation: str = "descending") -> Word:
    if orientation not in ORIENTATIONS:
        raise ValueError(f"orientation must be one of {ORIENTATIONS}")
    order = range(p, 0, -1) if orientation == "descending" else range(1, p + 1)
    return Word.product(order)


def present(table: MonodromyTable, orientation: str = "descending",
            convention: str = DEFAULT_CONVENTION, names: Sequence[str] | None = None) -> Presentation:
    """Generators x_1..x_p; relators from every factor plus the projective one."""
    p = table.points
    rels: list[Word] = []
    for b in table.braids():
        rels.extend(relations_from_factor(b, convention))
    proj = None
    if table.include_projective:
        proj = projective_word(p, orientation)
        rels.append(proj)
    gens = tuple(names) if names else tuple(f"x{i}" for i in range(1, p + 1))
    meta = {"source": "braid", "table": table.name, "points": p}
    if table.reconstructed:
        meta["reconstructed"] = True
    return Presentation(gens, tuple(rels), meta, proj)
