"""Mordell-Weil groups as Pic(X) modulo the trivial lattice.

The trivial lattice is generated by the fiber class F, the zero section and
the proper vertical classes; its cokernel in Pic(X) = Z^(d+1) is the group of
rational sections.
"""

from __future__ import annotations

from .abelian import FgAbelianGroup, quotient
from .catalog import FibrationType
from .piclattice import DivisorClass, fiber_class

__all__ = ["trivial_subgroup", "mordell_weil", "trivial_lattice_rank"]


def trivial_subgroup(t: FibrationType, zero_section: int | None = None) -> list[DivisorClass]:
    """Generators [F, O, V1, V2, ...] of the trivial lattice.

    ``zero_section`` overrides the catalog's choice of origin.
    """
    idx = t.zero_section if zero_section is None else zero_section
    return [fiber_class(t.lattice), t.sections[idx], *t.verticals]


def mordell_weil(t: FibrationType, zero_section: int | None = None) -> FgAbelianGroup:
    gens = trivial_subgroup(t, zero_section)
    return quotient(t.lattice.rank, [g.coords for g in gens])


def trivial_lattice_rank(t: FibrationType) -> int:
    """Rank of the trivial lattice, computed independently of the quotient."""
    from fractions import Fraction

    rows = [[Fraction(x) for x in g.coords] for g in trivial_subgroup(t)]
    rank = 0
    cols = t.lattice.rank
    for c in range(cols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][c] != 0:
                f = rows[r][c] / rows[rank][c]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank
