"""Randomized property checks shared by the module tests and the acceptance suite.

Each ``check_*`` function is a hypothesis test; ``examples`` sets how many
cases it draws.  The oracles here are deliberately naive: brute-force coset
counting, floating-point non-negative least squares, and direct expansion.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st
from scipy.optimize import nnls

from dpfib.abelian import quotient, smith_normal_form
from dpfib.catalog import default_catalog
from dpfib.cones import cone, dual_cone, nef_cone, nef_decompose
from dpfib.piclattice import DivisorClass, PicardLattice, bilinear, pairing

SUPPRESS = [HealthCheck.too_slow, HealthCheck.data_too_large]


def _settings(examples: int):
    return settings(max_examples=examples, deadline=None, suppress_health_check=SUPPRESS)


# --- pairing -----------------------------------------------------------------


@st.composite
def lattice_and_vectors(draw, count: int = 3):
    d = draw(st.integers(1, 4))
    vec = st.lists(st.integers(-20, 20), min_size=d + 1, max_size=d + 1).map(tuple)
    return PicardLattice(d), [draw(vec) for _ in range(count)]


def check_pairing_symmetry(examples: int = 100):
    @_settings(examples)
    @given(lattice_and_vectors(), st.integers(-5, 5))
    def run(lv, k):
        lattice, (a, b, c) = lv
        assert pairing(lattice, a, b) == pairing(lattice, b, a)
        # bilinearity in the first slot
        ka_c = tuple(k * x + z for x, z in zip(a, c))
        assert pairing(lattice, ka_c, b) == k * pairing(lattice, a, b) + pairing(lattice, c, b)
        # agrees with the explicit Gram matrix
        assert pairing(lattice, a, b) == bilinear(lattice.gram, a, b)

    run()


# --- Smith normal form vs brute force ----------------------------------------


def _span_size_mod(gens: list[tuple[int, ...]], n: int, m: int) -> int:
    """Size of the subgroup of (Z/m)^n spanned by ``gens``, by closure."""
    reached = np.zeros((m,) * n, dtype=bool)
    reached[(0,) * n] = True
    while True:
        new = reached.copy()
        for g in gens:
            new |= np.roll(reached, shift=[x % m for x in g], axis=tuple(range(n)))
        if (new == reached).all():
            return int(reached.sum())
        reached = new


def _predicted_size_mod(rank: int, torsion: tuple[int, ...], m: int) -> int:
    """|G/mG| for G = Z^rank + sum Z/t."""
    size = m**rank
    for t in torsion:
        size *= np.gcd(t, m)
    return int(size)


def _rational_rank(rows: list[tuple[int, ...]]) -> int:
    rows = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    for c in range(len(rows[0]) if rows else 0):
        piv = next((r for r in range(rank, len(rows)) if rows[r][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][c]:
                f = rows[r][c] / rows[rank][c]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


@st.composite
def small_generators(draw):
    n = draw(st.integers(1, 3))
    k = draw(st.integers(0, 4))
    vec = st.lists(st.integers(-4, 4), min_size=n, max_size=n).map(tuple)
    return n, [draw(vec) for _ in range(k)]


MODULI = (2, 3, 4, 5, 6, 8, 9, 12)


def check_snf_against_cosets(examples: int = 100):
    @_settings(examples)
    @given(small_generators())
    def run(case):
        n, gens = case
        g = quotient(n, gens)
        assert g.rank == n - (_rational_rank(gens) if gens else 0)
        for m in MODULI:
            index = m**n // _span_size_mod(gens, n, m)
            assert index == _predicted_size_mod(g.rank, g.torsion, m), (m, g)

    run()


def _matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def check_snf_factorization(examples: int = 100):
    @_settings(examples)
    @given(
        st.integers(1, 4).flatmap(
            lambda r: st.integers(1, 4).flatmap(
                lambda c: st.lists(
                    st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r, max_size=r
                )
            )
        )
    )
    def run(m):
        u, d, v = smith_normal_form(m)
        assert _matmul(_matmul(u, m), v) == d
        assert abs(round(np.linalg.det(np.array(u, dtype=float)))) == 1
        assert abs(round(np.linalg.det(np.array(v, dtype=float)))) == 1
        diag = [d[i][i] for i in range(min(len(d), len(d[0])))]
        assert all(d[i][j] == 0 for i in range(len(d)) for j in range(len(d[0])) if i != j)
        assert all(x >= 0 for x in diag)
        for a, b in zip(diag, diag[1:]):
            assert (b == 0) if a == 0 else b % a == 0

    run()


# --- cones ---------------------------------------------------------------------


@st.composite
def random_cones(draw):
    n = draw(st.integers(1, 5))
    k = draw(st.integers(1, 7))
    vec = st.lists(st.integers(-3, 3), min_size=n, max_size=n).map(tuple)
    gens = [draw(vec) for _ in range(k)]
    return n, gens


def _in_cone_numeric(v, rays, lineality) -> bool:
    """Float oracle: v in cone(rays) + span(lineality) via non-negative least squares."""
    cols = list(rays) + list(lineality) + [tuple(-x for x in l) for l in lineality]
    if not cols:
        return not any(v)
    a = np.array(cols, dtype=float).T
    _, resid = nnls(a, np.array(v, dtype=float))
    return resid < 1e-7


def check_cone_double_dual(examples: int = 100):
    @_settings(examples)
    @given(random_cones(), st.booleans())
    def run(case, use_lorentz):
        n, gens = case
        c = cone(gens, n)
        pairing_matrix = None
        if use_lorentz:
            pairing_matrix = [[(n - 1 if i == 0 else -1) if i == j else 0 for j in range(n)] for i in range(n)]
            pairing_matrix[0][0] = max(pairing_matrix[0][0], 1)
        back = dual_cone(dual_cone(c, pairing_matrix), _transpose(pairing_matrix))
        assert back == c
        # independent check: every input generator lies in cone(rays) + lineality
        for g in gens:
            assert _in_cone_numeric(g, c.rays, c.lineality)
            assert c.contains(g)
        # every ray and lineality vector satisfies the facet description
        for r in c.rays:
            assert c.contains(r)
        for f in c.facets:
            assert all(sum(a * b for a, b in zip(f, g)) >= 0 for g in gens)

    run()


def _transpose(m):
    return None if m is None else [list(r) for r in zip(*m)]


# --- nef decomposition -------------------------------------------------------

_CATALOG = default_catalog()


def check_nef_decompose_roundtrip(examples: int = 100):
    @_settings(examples)
    @given(st.data())
    def run(data):
        t = data.draw(st.sampled_from(_CATALOG))
        rays = nef_cone(t).rays
        coeffs = data.draw(st.lists(st.integers(0, 6), min_size=len(rays), max_size=len(rays)))
        d = tuple(sum(c * r[i] for c, r in zip(coeffs, rays)) for i in range(len(rays[0])))
        terms = nef_decompose(t, DivisorClass(d))
        assert all(k > 0 for *_, k in terms)
        rebuilt = [0] * len(d)
        for _, cls, k in terms:
            rebuilt = [x + k * y for x, y in zip(rebuilt, cls.coords)]
        assert tuple(rebuilt) == d

    run()


ALL_PROPERTY_SUITES = {
    "pairing symmetry": check_pairing_symmetry,
    "SNF quotient vs coset oracle": check_snf_against_cosets,
    "SNF factorization": check_snf_factorization,
    "cone double dual": check_cone_double_dual,
    "nef_decompose round trip": check_nef_decompose_roundtrip,
}
