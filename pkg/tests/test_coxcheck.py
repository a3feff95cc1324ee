import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dpfib.coxcheck import (
    Polynomial,
    builtin_presentations,
    check_homogeneity,
    format_polynomial,
    load_presentation,
    monomial_degree,
    parse_polynomial,
    presentation_from_json,
)
from dpfib.errors import InvalidInputError, PolynomialSyntaxError

V = ("T1", "T2", "T3", "S")


def P(text, variables=V):
    return parse_polynomial(text, variables)


# --- parsing -------------------------------------------------------------------


def test_precedence_and_unary_minus():
    assert P("T1 + T2*T3^2") == P("T1 + (T2*(T3^2))")
    assert P("-T1^2") == P("-(T1^2)")
    assert P("--T1") == P("T1")
    assert P("(T1+T2)^2") == P("T1^2 + 2*T1*T2 + T2^2")
    assert P("T1 - T1").is_zero()


def test_rationals_and_formatting():
    p = P("3/4*T2 - 1/2*T2 + 5")
    assert p.terms[(0, 1, 0, 0)] == Fraction(1, 4)
    assert format_polynomial(P("T1^2 - 3/4*T2 + 5")) == "T1^2 - 3/4*T2 + 5"
    assert format_polynomial(P("0")) == "0"


@pytest.mark.parametrize(
    "text,pos",
    [
        ("T1^2 - T2^(3)", 10),
        ("T1^-1", 3),
        ("T1^1/2", 3),
        ("T1 +", 4),
        ("(T1 + T2", 8),
        ("T1 $ T2", 3),
        ("", 0),
        ("T1 T2", 3),
        ("1/0", 0),
    ],
)
def test_syntax_errors_carry_position(text, pos):
    with pytest.raises(PolynomialSyntaxError) as info:
        P(text)
    assert info.value.position == pos


def test_negative_exponent_message():
    with pytest.raises(PolynomialSyntaxError, match="negative exponent"):
        P("T1^-2")


def test_unknown_variable():
    with pytest.raises(InvalidInputError, match="X9"):
        P("T1 + X9")


# --- degrees -------------------------------------------------------------------


def test_monomial_degree_examples():
    lemma = load_presentation("blowup_point")
    e = P("T2*T3*S^2", lemma.variables).terms
    assert monomial_degree(next(iter(e)), lemma.degrees) == (2, -2)
    x43 = load_presentation("x43")
    (mono,) = P("T4*T9", x43.variables).terms
    assert monomial_degree(mono, x43.degrees) == (2, -2, -2, -2, -2)
    assert monomial_degree((0,) * len(x43.variables), x43.degrees) == (0,) * 5


# --- fixtures ------------------------------------------------------------------

RANKS = {"blowup_point": 2, "x1": 2, "x_ss": 3, "x2": 3, "x43": 5, "x22": 5}


def test_fixture_list():
    assert builtin_presentations() == sorted(RANKS)


@pytest.mark.parametrize("name", sorted(RANKS))
def test_corrected_fixtures_are_homogeneous(name):
    p = load_presentation(name)
    assert p.picard_rank == RANKS[name] == p.grading_rank
    report = check_homogeneity(p)
    assert report.homogeneous, report.to_text()


def test_relation_degrees():
    deg = lambda name: [r.degree for r in check_homogeneity(load_presentation(name)).relations]
    assert deg("blowup_point") == [(2, -2), (2, -2)]
    assert deg("x1") == [(6, 0)]
    assert deg("x2") == [(4, -2, 0)]
    assert deg("x_ss") == [(2, 0, 0), (4, -4, -4)]
    assert len(deg("x43")) == 8
    assert len(deg("x22")) == 2


@pytest.mark.parametrize("name", ["x1", "x2"])
def test_as_printed_offenders(name):
    p = load_presentation(name, as_printed=True)
    report = check_homogeneity(p)
    assert not report.homogeneous
    assert report.offender_set() == set(p.expected_offenders)


def test_x1_as_printed_details():
    report = check_homogeneity(load_presentation("x1", as_printed=True))
    (rel,) = report.relations
    assert rel.degree == (6, 0)
    assert {o[0]: o[3] for o in rel.offenders} == {
        "T2*T3^4*S^8": (0, 4),
        "T2*T4^2*T5^2*S^8": (0, 4),
        "T3^6*S^12": (0, 6),
        "T3*T4^2*T5^3*S^12": (0, 6),
    }
    assert "NOT homogeneous" in report.to_text()


def test_no_as_printed_variant():
    with pytest.raises(InvalidInputError, match="as-printed"):
        load_presentation("x43", as_printed=True)


def test_presentation_validation(tmp_path):
    good = {"name": "toy", "variables": ["A", "B"], "degrees": [[1], [2]], "relations": ["A^2 - B"]}
    assert check_homogeneity(presentation_from_json(good)).homogeneous
    with pytest.raises(InvalidInputError, match="Picard rank"):
        presentation_from_json(dict(good, picard_rank=2))
    with pytest.raises(InvalidInputError, match="degree vectors"):
        presentation_from_json(dict(good, degrees=[[1]]))
    with pytest.raises(InvalidInputError, match="missing"):
        presentation_from_json({"name": "x"})
    path = tmp_path / "toy.json"
    path.write_text(json.dumps(good))
    assert load_presentation(str(path)).name == "toy"
    path.write_text("{")
    with pytest.raises(InvalidInputError, match="JSON"):
        load_presentation(str(path))
    with pytest.raises(InvalidInputError, match="fixtures"):
        load_presentation("nowhere")


def test_reference_degree_tie_goes_to_first_monomial():
    data = {"name": "tie", "variables": ["A", "B"], "degrees": [[1], [2]], "relations": ["B - A"]}
    rel = check_homogeneity(presentation_from_json(data)).relations[0]
    assert rel.degree == (2,)
    assert [o[0] for o in rel.offenders] == ["A"]


# --- properties ----------------------------------------------------------------

coefficients = st.fractions(min_value=-20, max_value=20, max_denominator=6).filter(lambda c: c != 0)
monomials = st.tuples(*[st.integers(0, 4)] * len(V))
polynomials = st.dictionaries(monomials, coefficients, max_size=6).map(lambda t: Polynomial(V, t))


@settings(max_examples=200, deadline=None)
@given(polynomials)
def test_print_parse_roundtrip(p):
    assert P(format_polynomial(p)) == p


@settings(max_examples=100, deadline=None)
@given(polynomials, polynomials)
def test_ring_operations(p, q):
    assert P(f"({format_polynomial(p)})*({format_polynomial(q)})") == p * q
    assert (p + q) - q == p


VARIANTS = [(n, False) for n in sorted(RANKS)] + [("x1", True), ("x2", True)]


@pytest.mark.parametrize("name,as_printed", VARIANTS)
def test_verdict_invariant_under_renaming_and_reordering(name, as_printed):
    p = load_presentation(name, as_printed=as_printed)
    base = check_homogeneity(p)
    rng = random.Random(name)
    fresh = [f"Y{k}" for k in range(len(p.variables))]
    rng.shuffle(fresh)
    mapping = dict(zip(p.variables, fresh))
    order = list(range(len(p.relations)))
    rng.shuffle(order)
    renamed = type(p)(
        name=p.name,
        variables=tuple(mapping[v] for v in p.variables),
        degrees=p.degrees,
        relations=tuple(p.relations[i].rename(mapping) for i in order),
    )
    other = check_homogeneity(renamed)
    assert other.homogeneous == base.homogeneous
    assert sorted(r.degree for r in other.relations) == sorted(r.degree for r in base.relations)
    rename = lambda m: "*".join(mapping.get(f.split("^")[0], f.split("^")[0]) + f[len(f.split("^")[0]):] for f in m.split("*"))
    assert {(rename(m), d) for m, d in base.offender_set()} == other.offender_set()
