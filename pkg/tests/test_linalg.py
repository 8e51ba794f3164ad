from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from delsym.linalg import integer_rank, rational_rank

small_ints = st.integers(min_value=-4, max_value=4)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 6).flatmap(lambda r: st.lists(st.lists(small_ints, min_size=r, max_size=r), min_size=1, max_size=6)))
def test_integer_rank_matches_sympy(rows):
    assert integer_rank(rows) == sympy.Matrix(rows).rank()


@given(st.lists(st.lists(st.fractions(max_denominator=9), min_size=3, max_size=3), min_size=1, max_size=4))
def test_rational_rank_matches_sympy(rows):
    expected = sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) for v in r] for r in rows]).rank()
    assert rational_rank(rows) == expected


def test_rank_deficient_examples():
    assert integer_rank([[1, 2, 3], [2, 4, 6], [1, 0, 1]]) == 2
    assert integer_rank([[0, 0], [0, 0]]) == 0
    assert integer_rank([]) == 0
    assert rational_rank([[Fraction(1, 2), Fraction(1, 3)], [Fraction(3, 2), 1]]) == 1


def test_ragged_matrix_rejected():
    with pytest.raises(ValueError):
        integer_rank([[1, 2], [3]])
