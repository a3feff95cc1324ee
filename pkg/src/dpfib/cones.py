"""Exact rational polyhedral cones and the nef / effective / moving cones.

Cones are kept in a canonical double representation:

* ``rays`` and ``lineality`` generate the cone,
* ``facets`` (``f . x >= 0``) and ``equations`` (``e . x == 0``) cut it out.

All vectors are primitive integer tuples.  Rays are taken modulo the
lineality space (projected onto its orthogonal complement), facets modulo
the equations, and both lists are sorted, so two cones are equal exactly
when their dataclass fields are equal.

Conversion between the two representations is the double description
method run in exact integer arithmetic with gcd normalization after each
step and the combinatorial adjacency test.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Iterable, NamedTuple, Sequence

from .catalog import FibrationType
from .errors import DomainError, InvalidInputError, UnsupportedTypeError
from .piclattice import DivisorClass, f_subset_class, fiber_class

__all__ = [
    "RationalCone",
    "cone",
    "dual_cone",
    "extremal_rays",
    "curve_cone",
    "nef_cone",
    "nef_cone_from_curves",
    "nef_decompose",
    "NefTerm",
    "eff_cone",
    "mov_cone",
    "identity_pairing",
]

Vec = tuple[int, ...]


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def primitive(v: Iterable) -> Vec:
    """Scale a rational vector to the primitive integer vector on its ray."""
    v = list(v)
    if any(isinstance(x, Fraction) for x in v):
        den = 1
        for x in v:
            den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
        v = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        return tuple(0 for _ in v)
    return tuple(x // g for x in v)


def _rref(vectors: Sequence[Sequence[int]], n: int) -> list[list[Fraction]]:
    rows = [[Fraction(x) for x in v] for v in vectors]
    out: list[list[Fraction]] = []
    for c in range(n):
        piv = next((r for r in rows if r[c] != 0), None)
        if piv is None:
            continue
        rows.remove(piv)
        piv = [x / piv[c] for x in piv]
        rows = [[a - r[c] * b for a, b in zip(r, piv)] for r in rows]
        out = [[a - r[c] * b for a, b in zip(r, piv)] for r in out]
        out.append(piv)
        rows = [r for r in rows if any(r)]
    return out


def span_basis(vectors: Sequence[Sequence[int]], n: int) -> tuple[Vec, ...]:
    """Canonical integer basis of a linear span: primitive rows of the RREF."""
    return tuple(sorted(primitive(r) for r in _rref(vectors, n)))


def orthogonal_complement(vectors: Sequence[Sequence[int]], n: int) -> tuple[Vec, ...]:
    rref = _rref(vectors, n)
    pivots = [next(i for i, x in enumerate(r) if x != 0) for r in rref]
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for r, p in zip(rref, pivots):
            v[p] = -r[f]
        basis.append(v)
    return span_basis([primitive(v) for v in basis], n)


def _project_out(v: Sequence[int], basis: Sequence[Vec]) -> Vec:
    """Orthogonal projection of ``v`` onto the complement of span(basis)."""
    if not basis:
        return tuple(v)
    k = len(basis)
    gram = [[Fraction(_dot(a, b)) for b in basis] for a in basis]
    rhs = [Fraction(_dot(a, v)) for a in basis]
    # solve gram * c = rhs (gram is positive definite)
    m = [row + [r] for row, r in zip(gram, rhs)]
    for c in range(k):
        piv = next(r for r in range(c, k) if m[r][c] != 0)
        m[c], m[piv] = m[piv], m[c]
        m[c] = [x / m[c][c] for x in m[c]]
        for r in range(k):
            if r != c and m[r][c] != 0:
                m[r] = [a - m[r][c] * b for a, b in zip(m[r], m[c])]
    coef = [m[i][k] for i in range(k)]
    out = [Fraction(x) for x in v]
    for c, b in zip(coef, basis):
        out = [x - c * y for x, y in zip(out, b)]
    return primitive(out)


def _double_description(
    inequalities: Sequence[Vec], equations: Sequence[Vec], n: int
) -> tuple[list[Vec], list[Vec]]:
    """Generators (rays, lineality) of {x : a.x >= 0, e.x == 0}."""
    lineality: list[Vec] = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    rays: list[Vec] = []
    zeros: list[frozenset] = []

    for e in equations:
        idx = next((k for k, l in enumerate(lineality) if _dot(e, l) != 0), None)
        if idx is not None:
            l = lineality.pop(idx)
            el = _dot(e, l)
            lineality = [primitive(tuple(el * x - _dot(e, m) * y for x, y in zip(m, l))) for m in lineality]
            rays = [primitive(tuple(el * x - _dot(e, r) * y for x, y in zip(r, l))) for r in rays]
            continue
        vals = [_dot(e, r) for r in rays]
        pos = [k for k, v in enumerate(vals) if v > 0]
        neg = [k for k, v in enumerate(vals) if v < 0]
        new_rays = [rays[k] for k, v in enumerate(vals) if v == 0]
        new_zeros = [zeros[k] for k, v in enumerate(vals) if v == 0]
        for p in pos:
            for q in neg:
                common = zeros[p] & zeros[q]
                if _adjacent(common, p, q, zeros):
                    r = primitive(
                        tuple(vals[p] * y - vals[q] * x for x, y in zip(rays[p], rays[q]))
                    )
                    new_rays.append(r)
                    new_zeros.append(common)
        rays, zeros = new_rays, new_zeros

    for step, a in enumerate(inequalities):
        idx = next((k for k, l in enumerate(lineality) if _dot(a, l) != 0), None)
        if idx is not None:
            l = lineality.pop(idx)
            al = _dot(a, l)
            if al < 0:
                l, al = tuple(-x for x in l), -al
            lineality = [primitive(tuple(al * x - _dot(a, m) * y for x, y in zip(m, l))) for m in lineality]
            rays = [primitive(tuple(al * x - _dot(a, r) * y for x, y in zip(r, l))) for r in rays]
            zeros = [z | {step} for z in zeros]
            rays.append(l)
            zeros.append(frozenset(range(step)))
            continue
        vals = [_dot(a, r) for r in rays]
        keep = [k for k, v in enumerate(vals) if v >= 0]
        pos = [k for k, v in enumerate(vals) if v > 0]
        neg = [k for k, v in enumerate(vals) if v < 0]
        new_rays = [rays[k] for k in keep]
        new_zeros = [zeros[k] | ({step} if vals[k] == 0 else frozenset()) for k in keep]
        for p in pos:
            for q in neg:
                common = zeros[p] & zeros[q]
                if _adjacent(common, p, q, zeros):
                    r = primitive(
                        tuple(vals[p] * y - vals[q] * x for x, y in zip(rays[p], rays[q]))
                    )
                    new_rays.append(r)
                    new_zeros.append(common | {step})
        rays, zeros = new_rays, new_zeros
    return rays, lineality


def _adjacent(common: frozenset, p: int, q: int, zeros: Sequence[frozenset]) -> bool:
    return not any(k != p and k != q and common <= z for k, z in enumerate(zeros))


def _canonical_pair(gens: Iterable[Sequence[int]], lin: Iterable[Sequence[int]], n: int):
    lin_basis = span_basis([tuple(v) for v in lin], n)
    out = set()
    for g in gens:
        r = _project_out(g, lin_basis)
        if any(r):
            out.add(r)
    return tuple(sorted(out)), lin_basis


@dataclass(frozen=True)
class RationalCone:
    """Polyhedral cone in Q^ambient_rank in canonical form."""

    ambient_rank: int
    rays: tuple[Vec, ...]
    facets: tuple[Vec, ...]
    lineality: tuple[Vec, ...] = ()
    equations: tuple[Vec, ...] = ()

    @classmethod
    def from_generators(
        cls,
        generators: Iterable[Sequence[int]],
        ambient_rank: int | None = None,
        lineality: Iterable[Sequence[int]] = (),
    ) -> "RationalCone":
        gens = [tuple(int(x) for x in g) for g in generators]
        lin = [tuple(int(x) for x in g) for g in lineality]
        n = _rank_of(gens + lin, ambient_rank)
        # H-representation: the dual cone's generators
        f_gens, f_lin = _double_description(gens, lin, n)
        facets, equations = _canonical_pair(f_gens, f_lin, n)
        # V-representation recomputed from the irredundant H-representation
        r_gens, r_lin = _double_description(facets, equations, n)
        rays, lin_basis = _canonical_pair(r_gens, r_lin, n)
        return cls(n, rays, facets, lin_basis, equations)

    @classmethod
    def from_inequalities(
        cls,
        inequalities: Iterable[Sequence[int]],
        equations: Iterable[Sequence[int]] = (),
        ambient_rank: int | None = None,
    ) -> "RationalCone":
        ineqs = [tuple(int(x) for x in a) for a in inequalities]
        eqs = [tuple(int(x) for x in a) for a in equations]
        n = _rank_of(ineqs + eqs, ambient_rank)
        r_gens, r_lin = _double_description(ineqs, eqs, n)
        return cls.from_generators(r_gens, n, r_lin)

    @property
    def dim(self) -> int:
        return self.ambient_rank - len(self.equations)

    @property
    def is_full_dimensional(self) -> bool:
        return not self.equations

    @property
    def is_pointed(self) -> bool:
        return not self.lineality

    def contains(self, v: Sequence[int]) -> bool:
        v = tuple(v)
        if len(v) != self.ambient_rank:
            raise InvalidInputError(f"expected a vector of length {self.ambient_rank}")
        return all(_dot(f, v) >= 0 for f in self.facets) and all(
            _dot(e, v) == 0 for e in self.equations
        )

    def contains_cone(self, other: "RationalCone") -> bool:
        return all(self.contains(r) for r in other.rays) and all(
            self.contains(l) and self.contains(tuple(-x for x in l)) for l in other.lineality
        )

    def interior_contains(self, v: Sequence[int]) -> bool:
        """Strictly inside the relative interior."""
        return self.contains(v) and all(_dot(f, v) > 0 for f in self.facets)

    def facet_rays(self, facet: Sequence[int]) -> tuple[Vec, ...]:
        return tuple(r for r in self.rays if _dot(facet, r) == 0)

    def intersection(self, other: "RationalCone") -> "RationalCone":
        if other.ambient_rank != self.ambient_rank:
            raise InvalidInputError("cones live in different ambient spaces")
        return RationalCone.from_inequalities(
            self.facets + other.facets, self.equations + other.equations, self.ambient_rank
        )

    def to_json(self) -> dict:
        return {
            "rays": [list(r) for r in self.rays],
            "facets": [list(f) for f in self.facets],
            "lineality": [list(l) for l in self.lineality],
            "equations": [list(e) for e in self.equations],
        }

    @classmethod
    def from_json(cls, data: dict) -> "RationalCone":
        rays = [tuple(r) for r in data["rays"]]
        lin = [tuple(r) for r in data.get("lineality", [])]
        n = len(rays[0]) if rays else len(lin[0]) if lin else len(data["facets"][0])
        return cls.from_generators(rays, n, lin)


def _rank_of(vectors: Sequence[Vec], ambient_rank: int | None) -> int:
    lengths = {len(v) for v in vectors}
    if ambient_rank is not None:
        lengths.add(ambient_rank)
    if len(lengths) != 1:
        if not lengths:
            raise InvalidInputError("ambient rank required for an empty generator list")
        raise InvalidInputError(f"vectors of inconsistent lengths {sorted(lengths)}")
    return lengths.pop()


def cone(
    generators: Iterable[Sequence[int]],
    ambient_rank: int | None = None,
    lineality: Iterable[Sequence[int]] = (),
) -> RationalCone:
    """The cone generated by ``generators`` (vectors or class objects)."""
    gens = [tuple(g) for g in generators]
    lin = [tuple(g) for g in lineality]
    return RationalCone.from_generators(gens, ambient_rank, lin)


def identity_pairing(n: int) -> tuple[Vec, ...]:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def _matvec(m: Sequence[Sequence[int]], v: Sequence[int]) -> Vec:
    return tuple(_dot(row, v) for row in m)


def dual_cone(c: RationalCone, pairing: Sequence[Sequence[int]] | None = None) -> RationalCone:
    """{x : x^T P r >= 0 for every r in c} for the pairing matrix P."""
    n = c.ambient_rank
    p = identity_pairing(n) if pairing is None else tuple(tuple(r) for r in pairing)
    if len(p) != n or any(len(r) != n for r in p):
        raise InvalidInputError(f"pairing must be a {n}x{n} matrix")
    ineqs = [_matvec(p, r) for r in c.rays]
    eqs = [_matvec(p, l) for l in c.lineality]
    return RationalCone.from_inequalities(ineqs, eqs, n)


def extremal_rays(vectors: Iterable[Sequence[int]]) -> list[Vec]:
    """Primitive, sorted extremal rays of the cone spanned by ``vectors``."""
    vs = [tuple(v) for v in vectors]
    if not vs:
        return []
    return list(cone(vs).rays)


# --- cones attached to a fibration type -------------------------------------


def curve_cone(t: FibrationType) -> RationalCone:
    """The subcone of the Mori cone spanned by ei (Ei a section),
    ei - ej (Ei - Ej vertical) and h - ei for every i."""
    n = t.lattice.rank
    gens = []
    for i in t.section_indices():
        gens.append(_unit(n, i))
    for i, j in t.exceptional_verticals():
        v = [0] * n
        v[i], v[j] = 1, -1
        gens.append(tuple(v))
    for i in range(1, n):
        v = [0] * n
        v[0], v[i] = 1, -1
        gens.append(tuple(v))
    return cone(gens, n)


def _unit(n: int, i: int) -> Vec:
    return tuple(int(k == i) for k in range(n))


def nef_subsets(t: FibrationType) -> list[tuple[int, ...]]:
    """Index sets I with <F_I, Ei - Ej> >= 0 for every exceptional vertical class."""
    d = t.degree
    pairs = t.exceptional_verticals()
    out = []
    for size in range(d + 1):
        for subset in combinations(range(1, d + 1), size):
            s = set(subset)
            # <F_I, Ei - Ej> = [i in I] - [j in I]
            if all((i in s) >= (j in s) for i, j in pairs):
                out.append(subset)
    return out


def nef_cone(t: FibrationType) -> RationalCone:
    """Cone spanned by the F_I surviving the exceptional-vertical filter."""
    lattice = t.lattice
    return cone([f_subset_class(lattice, s).coords for s in nef_subsets(t)], lattice.rank)


def nef_cone_from_curves(t: FibrationType) -> RationalCone:
    """Nef cone as the dual of the curve cone under the divisor-curve pairing."""
    return dual_cone(curve_cone(t), t.lattice.curve_pairing)


class NefTerm(NamedTuple):
    """One summand ``coefficient * divisor`` of a nef decomposition.

    ``subset`` is the index set I of F_I, or None for the H term.
    """

    subset: tuple[int, ...] | None
    divisor: DivisorClass
    coefficient: int


def nef_decompose(t: FibrationType, divisor: DivisorClass | Sequence[int]) -> list[NefTerm]:
    """Write a nef class D = aH - sum mi Ei as a non-negative combination of H and F_I.

    With 0 = mu_0 <= mu_1 < ... < mu_r the distinct multiplicities and
    I_k = {j : mj >= mu_k}, D = (a - mu_r) H + sum (mu_k - mu_(k-1)) F_(I_k).
    Zero coefficients are omitted.
    """
    lattice = t.lattice
    coords = tuple(divisor.coords if isinstance(divisor, DivisorClass) else divisor)
    if len(coords) != lattice.rank:
        raise InvalidInputError(f"expected a class with {lattice.rank} coordinates")
    cc = curve_cone(t)
    pairing = lattice.curve_pairing
    for c in cc.rays:
        value = _dot(coords, _matvec(pairing, c))
        if value < 0:
            from .piclattice import CurveClass

            raise DomainError(
                f"{DivisorClass(coords)} is not nef: it meets the curve class "
                f"{CurveClass(c)} negatively ({value})"
            )
    alpha = coords[0]
    m = [-x for x in coords[1:]]
    mus = sorted(set(m))
    terms = []
    prev = 0
    for mu in mus:
        subset = tuple(j + 1 for j, mj in enumerate(m) if mj >= mu)
        if mu - prev:
            terms.append(NefTerm(subset, f_subset_class(lattice, subset), mu - prev))
        prev = mu
    if alpha - prev:
        terms.append(NefTerm(None, lattice.H, alpha - prev))
    return terms


def eff_cone(t: FibrationType) -> RationalCone:
    """Cone spanned by sections, vertical classes and F (finite Mordell-Weil only)."""
    if not t.finite_mw:
        raise UnsupportedTypeError(
            f"infinite Mordell-Weil group: effective cone of {t.key_str} "
            "is not rational polyhedral"
        )
    gens = [s.coords for s in t.sections] + [v.coords for v in t.verticals]
    gens.append(fiber_class(t.lattice).coords)
    return cone(gens, t.lattice.rank)


def mov_cone(t: FibrationType) -> RationalCone:
    """Dual of the effective cone under the bilinear form."""
    if not t.finite_mw:
        raise UnsupportedTypeError(
            "infinite Mordell-Weil group: moving cone is not rational polyhedral"
        )
    return dual_cone(eff_cone(t), t.lattice.gram)
