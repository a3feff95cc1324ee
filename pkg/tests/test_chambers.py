import pytest

from dpfib.catalog import get_type, list_types
from dpfib.chambers import (
    SIGMA_10,
    SIGMA_21,
    X11_GRAM,
    X11_SIGMA,
    apply_matrix,
    certify,
    chamber_Ni,
    flop_image,
    mori_chambers,
    x11_closed_form,
    x11_deg2_chamber,
    x11_sigma_images,
    x11_sigma_power,
    x11_to_standard,
    x11_walk,
)
from dpfib.cones import cone, dual_cone, mov_cone, nef_cone
from dpfib.errors import DomainError, InvalidInputError, UnsupportedTypeError
from dpfib.piclattice import CurveClass, PicardLattice, parse_curve, parse_divisor

LAT4 = PicardLattice(4)
G4 = [list(r) for r in LAT4.gram]


def mul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def T(a):
    return [list(r) for r in zip(*a)]


def D(text):
    return parse_divisor(text, 4).coords


# --- involutions ---------------------------------------------------------------


@pytest.mark.parametrize("m", [SIGMA_21, SIGMA_10], ids=["sigma21", "sigma10"])
def test_involution_identities(m):
    ident = [[int(i == j) for j in range(5)] for i in range(5)]
    assert mul(m, m) == ident
    assert mul(mul(T(m), G4), m) == G4
    assert mul(m, [[1], [-1], [-1], [-1], [-1]]) == [[1], [-1], [-1], [-1], [-1]]


def test_sigma21_image_of_h():
    assert apply_matrix(SIGMA_21, cone([D("H")], 5)).rays == (D("3H-4E1-4E2"),)


def test_catalog_involutions_match_constants():
    assert get_type("4:X_21:a").involution == SIGMA_21
    assert get_type("4:X_10").involution == SIGMA_10


def test_apply_matrix_rejects_non_unimodular():
    with pytest.raises(InvalidInputError, match="unimodular"):
        apply_matrix([[2, 0], [0, 1]], cone([(1, 0)], 2))
    with pytest.raises(InvalidInputError):
        apply_matrix([[1]], cone([(1, 0)], 2))


# --- flops ---------------------------------------------------------------------


def test_flop_image():
    c = parse_curve("h-e1", 4)
    assert flop_image(parse_curve("2h-e1-e2", 4), 1, c) == parse_curve("3h-2e1-e2", 4)
    g = parse_curve("e2", 4)
    assert flop_image(g, 0, c) == g
    assert flop_image(parse_curve("e1", 4), 1, c) == parse_curve("h", 4)
    with pytest.raises(InvalidInputError):
        flop_image(g, -1, c)


# --- N_i -----------------------------------------------------------------------


def test_n1_of_x43():
    t = get_type("4:X_43")
    n1 = chamber_Ni(t, 1)
    f_with_1 = [r for r in nef_cone(t).rays if r[1] == -1]
    assert len(f_with_1) == 8
    assert set(n1.rays) == set(f_with_1) | {D("H-2E1")}


def test_n1_of_x11():
    want = {D(s) for s in ["H-E1", "H-E1-E2", "H-E1-E2-E3", "H-E1-E2-E3-E4", "H-2E1"]}
    assert set(chamber_Ni(get_type("4:X_11"), 1).rays) == want


def test_ni_errors():
    with pytest.raises(DomainError, match="N_3"):
        chamber_Ni(get_type("4:X_22"), 3)
    with pytest.raises(UnsupportedTypeError):
        chamber_Ni(get_type("4:X_40"), 1)
    with pytest.raises(UnsupportedTypeError):
        mori_chambers(get_type("2:X_SS"))


# --- chamber decompositions -----------------------------------------------------

COUNTS = {"4:X_43": 5, "4:X_22": 3, "4:X_21:a": 6, "4:X_11": 2, "4:X_10": 4}


def test_supported_types_are_the_finite_degree_four_ones():
    assert sorted(COUNTS) == sorted(list_types(degree=4, finite_mw=True))


@pytest.mark.parametrize("key", sorted(COUNTS))
def test_mori_chambers_certified(key):
    t = get_type(key)
    dec = mori_chambers(t)
    assert len(dec.chambers) == COUNTS[key]
    assert dec.certificate.ok
    assert dec.cover_target == mov_cone(t)
    assert dec.chamber("N") == nef_cone(t)
    # every interior facet is counted once from each side
    assert not dec.certificate.unmatched_facets


def test_x21_pullbacks():
    t = get_type("4:X_21:a")
    dec = mori_chambers(t)
    for name in ("N", "N1", "N2"):
        assert dec.chamber("s:" + name) == apply_matrix(SIGMA_21, dec.chamber(name))


def test_certificate_detects_gaps_and_overlaps():
    t = get_type("4:X_43")
    dec = mori_chambers(t)
    missing = certify(dec.chambers[:-1], dec.cover_target)
    assert not missing.ok and missing.unmatched_facets
    doubled = certify(dec.chambers + (("again", dec.chambers[0][1]),), dec.cover_target)
    assert not doubled.ok and doubled.overlapping_pairs


def test_certificate_json_shape():
    data = mori_chambers(get_type("4:X_11")).to_json()
    assert data["certificate"]["ok"] is True
    assert [c["name"] for c in data["chambers"]] == ["N", "N1"]


# Extremal rays of the dual of N_1, written in the catalog labelling.
DUAL_N1 = {
    "4:X_43": ["-h+e1", "e2", "e3", "e4", "2h-e1-e2", "2h-e1-e3", "2h-e1-e4"],
    # printed with E2 and E3 exchanged: e2, e4, 2h-e1-e2, 2h-e1-e3, e3-e4
    "4:X_22": ["-h+e1", "e3", "e4", "2h-e1-e3", "2h-e1-e2", "e2-e4"],
    "4:X_21:a": ["-h+e1", "e3", "e4", "2h-e1-e3", "2h-e1-e2", "e2-e4"],
    "4:X_11": ["-h+e1", "e4", "e2-e3", "e3-e4", "2h-e1-e2"],
    "4:X_10": ["-h+e1", "e4", "e2-e3", "e3-e4", "2h-e1-e2"],
}


@pytest.mark.parametrize("key", sorted(DUAL_N1))
def test_dual_of_n1(key):
    got = dual_cone(chamber_Ni(get_type(key), 1), LAT4.curve_pairing)
    assert sorted(got.rays) == sorted(parse_curve(s, 4).coords for s in DUAL_N1[key])


# --- degree-2 X_11 --------------------------------------------------------------


def test_x11_basis_gram_and_sigma():
    assert mul(mul(T(X11_SIGMA), X11_GRAM), X11_SIGMA) == [list(r) for r in X11_GRAM]
    assert mul(X11_SIGMA, [[1], [0], [0]]) == [[1], [0], [0]]
    # Gram of the basis from diag(2, -1, -1)
    basis = [x11_to_standard(v) for v in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]
    g2 = PicardLattice(2).gram
    gram = [[sum(a[i] * g2[i][i] * b[i] for i in range(3)) for b in basis] for a in basis]
    assert gram == [list(r) for r in X11_GRAM]


def test_x11_k0_is_nef():
    assert set(x11_deg2_chamber(0).rays) == {(1, 0, 0), (1, 1, 1), (1, 0, 1), (1, 1, 2)}
    standard = {x11_to_standard(r) for r in x11_deg2_chamber(0).rays}
    assert standard == set(nef_cone(get_type("2:X_11")).rays)


def test_x11_k1_columns():
    assert x11_closed_form(1) == ((1, 0, 0), (3, 2, 1), (1, 1, 1), (3, 3, 2))


@pytest.mark.parametrize("k", range(-10, 11))
def test_x11_walk_identities(k):
    assert x11_deg2_chamber(k) == cone(x11_closed_form(k), 3)
    a, b = x11_sigma_images(k), x11_sigma_images(k + 1)
    assert a["H-E1"] == b["H-E2"]
    assert [x + y for x, y in zip(a["H"], b["H"])] == [4 * z for z in a["H-E1"]]
    shared = x11_deg2_chamber(k).intersection(x11_deg2_chamber(k + 1))
    assert shared == cone([a["F"], a["H-E1"]], 3)


def test_x11_power_inverse_and_bound():
    assert mul(x11_sigma_power(5), x11_sigma_power(-5)) == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    big = 10**6
    assert x11_deg2_chamber(big) == cone(x11_closed_form(big), 3)
    with pytest.raises(InvalidInputError):
        x11_sigma_power(big + 1)


def test_x11_walk_steps():
    steps = x11_walk(-2, 2)
    assert [s.k for s in steps] == [-2, -1, 0, 1, 2]
    assert steps[-1].shared_face_with_next is None
    assert all(len(s.shared_face_with_next) == 2 for s in steps[:-1])
    with pytest.raises(InvalidInputError):
        x11_walk(3, 1)
