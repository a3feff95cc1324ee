import random

import pytest
import sympy
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from dpfib.abelian import FgAbelianGroup, determinant, quotient, smith_normal_form
from dpfib.errors import InvalidInputError

import properties


def test_snf_small_example():
    _, d, _ = smith_normal_form([[2, 4], [0, 6]])
    assert d == [[2, 0], [0, 6]]


def test_snf_zero_and_empty():
    _, d, _ = smith_normal_form([[0, 0], [0, 0]])
    assert d == [[0, 0], [0, 0]]
    u, d, v = smith_normal_form([[5]])
    assert d == [[5]]
    _, d, _ = smith_normal_form([[-3]])
    assert d == [[3]]


@pytest.mark.parametrize(
    "rank,gens,expected",
    [
        (2, [(1, -1), (2, 2)], FgAbelianGroup(0, (4,))),
        (3, [(1, 0, 0)], FgAbelianGroup(2)),
        (2, [], FgAbelianGroup(2)),
        (2, [(2, 0), (0, 2)], FgAbelianGroup(0, (2, 2))),
        (2, [(2, 0), (0, 3)], FgAbelianGroup(0, (6,))),
        (1, [(0,)], FgAbelianGroup(1)),
    ],
)
def test_quotient_examples(rank, gens, expected):
    assert quotient(rank, gens) == expected


def test_quotient_rejects_wrong_length():
    with pytest.raises(InvalidInputError):
        quotient(2, [(1, 2, 3)])


def test_group_formatting():
    assert str(FgAbelianGroup(0)) == "0"
    assert str(FgAbelianGroup(1)) == "Z"
    assert str(FgAbelianGroup(3)) == "Z^3"
    assert str(FgAbelianGroup(0, (2,))) == "Z/2"
    assert str(FgAbelianGroup(0, (2, 2))) == "(Z/2)^2"
    assert str(FgAbelianGroup(1, (2,))) == "Z ⊕ Z/2"
    assert str(FgAbelianGroup(0, (2, 4, 4))) == "Z/2 ⊕ (Z/4)^2"


def test_group_validation_and_json():
    with pytest.raises(InvalidInputError):
        FgAbelianGroup(0, (2, 3))
    with pytest.raises(InvalidInputError):
        FgAbelianGroup(0, (1,))
    with pytest.raises(InvalidInputError):
        FgAbelianGroup(-1)
    g = FgAbelianGroup(1, (2, 6))
    assert FgAbelianGroup.from_json(g.to_json()) == g
    assert g.order is None
    assert FgAbelianGroup(0, (2, 6)).order == 12
    assert FgAbelianGroup(0).is_finite


def test_determinant():
    assert determinant([[1, 2], [3, 4]]) == -2
    assert determinant([[0, 1], [1, 0]]) == -1
    assert determinant([[2, 0, 0], [0, 3, 0], [0, 0, 4]]) == 24
    assert determinant([[1, 2], [2, 4]]) == 0
    assert determinant([]) == 1


def test_determinant_matches_sympy():
    rng = random.Random(7)
    for _ in range(100):
        n = rng.randint(1, 5)
        m = [[rng.randint(-6, 6) for _ in range(n)] for _ in range(n)]
        assert determinant(m) == sympy.Matrix(m).det()


def test_invariant_factors_match_sympy():
    rng = random.Random(11)
    for _ in range(150):
        r, c = rng.randint(1, 4), rng.randint(1, 4)
        m = [[rng.randint(-8, 8) for _ in range(c)] for _ in range(r)]
        _, d, _ = smith_normal_form(m)
        ours = [d[i][i] for i in range(min(r, c))]
        theirs = sympy_snf(sympy.Matrix(m), domain=sympy.ZZ)
        ref = [abs(int(theirs[i, i])) for i in range(min(r, c))]
        assert ours == ref, m


def test_snf_factorization_property():
    properties.check_snf_factorization(100)


def test_quotient_vs_coset_oracle_property():
    properties.check_snf_against_cosets(100)
