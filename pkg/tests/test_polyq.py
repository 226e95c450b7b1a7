import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from schurzero.polyq import (
    ONE,
    ZERO,
    InterpolationError,
    QPoly,
    interpolate,
    q,
    quantum_factorial,
    quantum_int,
)

polys = st.lists(st.integers(-50, 50), max_size=6).map(QPoly)


def test_quantum_int_values():
    assert quantum_int(3) == q**2 + q + 1
    assert quantum_int(1) == ONE
    assert quantum_int(0) == ZERO
    with pytest.raises(ValueError):
        quantum_int(-1)


def test_quantum_factorial_values():
    assert quantum_factorial(2) == q + 1
    assert quantum_factorial(0) == ONE
    assert quantum_factorial(3) == QPoly([1, 2, 2, 1])


@pytest.mark.parametrize("m", range(13))
def test_quantum_int_at_one_and_zero(m):
    assert quantum_int(m)(1) == m
    assert quantum_int(m)(0) == (1 if m > 0 else 0)


def test_canonical_form_and_degree():
    assert QPoly([1, 2, 0, 0]).coeffs == (1, 2)
    assert ZERO.degree == -1
    assert (q**3).degree == 3


def test_string_and_json():
    assert str(q**2 + q + 1) == "q^2 + q + 1"
    assert str(QPoly([-1, 0, 3])) == "3*q^2 - 1"
    assert str(ZERO) == "0"
    p = QPoly([1, 1, 1])
    assert p.to_json() == [1, 1, 1]
    assert QPoly.from_json(p.to_json()) == p


def test_interpolate_examples():
    assert interpolate([(2, 3), (3, 4)], 1) == q + 1
    assert interpolate([(2, 1), (3, 1), (5, 1)], 2) == ONE
    assert interpolate([(2, 7), (3, 13), (5, 31)], 2) == quantum_int(3)


def test_interpolate_rejects_fractional_coefficients():
    # x(x-1)/2 through 0, 1, 3 has non-integral coefficients
    with pytest.raises(InterpolationError):
        interpolate([(0, 0), (1, 0), (2, 1)], 2)


def test_interpolate_held_out_point_is_checked():
    with pytest.raises(InterpolationError):
        interpolate([(2, 3), (3, 4), (5, 7)], 1)
    assert interpolate([(2, 3), (3, 4), (5, 6)], 1) == q + 1


def test_interpolate_input_errors():
    with pytest.raises(ValueError):
        interpolate([(2, 1), (2, 1)], 1)
    with pytest.raises(ValueError):
        interpolate([(2, 1)], 1)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(-1000, 1000), min_size=1, max_size=9))
def test_interpolation_inverts_evaluation(coeffs):
    p = QPoly(coeffs)
    bound = len(coeffs) - 1
    xs = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29][: bound + 2]
    assert interpolate([(x, p(x)) for x in xs], bound) == p


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a
    assert a - a == ZERO


@given(polys, st.integers(-5, 5))
def test_evaluation_is_a_homomorphism(a, x):
    assert (a * a + a)(x) == a(x) ** 2 + a(x)
