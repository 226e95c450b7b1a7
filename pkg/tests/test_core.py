import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from schurzero.core import (
    LinePairs,
    OrbitMatrix,
    Segment,
    compositions,
    delta,
    lower_segments,
    matrices_with_types,
    matrix_from_pairs,
    orbit_matrices,
    pairs_from_matrix,
    rank_matrix,
    segment_leq,
    shift,
    upper_segments,
)
from schurzero.linalg_fq import flag_pair_from_matrix, segments_from_ranks

M = OrbitMatrix.from_text


@st.composite
def orbit_matrix(draw, max_n=3, max_r=4):
    n = draw(st.integers(1, max_n))
    r = draw(st.integers(0, max_r))
    return draw(st.sampled_from(orbit_matrices(n, r)))


def test_compositions_examples():
    assert compositions(2, 2) == [(0, 2), (1, 1), (2, 0)]
    assert compositions(1, 5) == [(5,)]
    assert len(compositions(3, 3)) == 10
    with pytest.raises(ValueError):
        compositions(0, 2)
    with pytest.raises(ValueError):
        compositions(2, -1)


def test_delta_and_shift():
    assert delta(2, 3) == (0, 1, 0)
    assert shift((1, 1), plus=[1], minus=[2]) == (2, 0)
    assert shift((0, 2), plus=[2], minus=[1]) is None
    # index n + 1 is the zero root
    assert shift((1, 1), plus=[3]) == (1, 1)


def test_matrix_text_round_trip():
    A = M("0,1;1,0")
    assert A.to_text() == "0,1;1,0"
    assert A.row_type == (1, 1) and A.col_type == (1, 1) and A.r == 2
    with pytest.raises(ValueError):
        M("1,2;3")
    with pytest.raises(ValueError):
        M("a,b;c,d")
    with pytest.raises(ValueError):
        OrbitMatrix(((1, -1), (0, 0)))


def test_line_pair_examples():
    assert pairs_from_matrix(M("0,1;1,0")).pairs == ((2, 1), (1, 2))
    assert pairs_from_matrix(M("1,0;0,1")).pairs == ((1, 1), (2, 2))
    assert pairs_from_matrix(M("2,0;0,0")).pairs == ((1, 1), (1, 1))


@given(orbit_matrix())
def test_pairs_round_trip_and_margins(A):
    lp = pairs_from_matrix(A)
    assert matrix_from_pairs(lp) == A
    assert lp.r == A.r
    for k in range(A.n):
        assert sum(1 for i in lp.left_entries if i == k + 1) == A.row_type[k]
        assert sum(1 for j in lp.right_entries if j == k + 1) == A.col_type[k]
    assert list(lp.right_entries) == sorted(lp.right_entries)


def test_pairs_round_trip_exhaustive():
    for n in (1, 2, 3):
        for r in range(5):
            for A in orbit_matrices(n, r):
                assert LinePairs.from_matrix(A).to_matrix() == A


def test_matrices_with_types_margins():
    for d in compositions(3, 3):
        for e in compositions(3, 3):
            block = matrices_with_types(d, e)
            assert all(A.row_type == d and A.col_type == e for A in block)
    total = sum(len(matrices_with_types(d, e)) for d in compositions(3, 3) for e in compositions(3, 3))
    assert total == len(orbit_matrices(3, 3))


def test_segment_order_examples():
    assert segment_leq(Segment(1, 1), Segment(1, 2))
    assert segment_leq(Segment(1, 2), Segment(2, 2))
    assert not segment_leq(Segment(2, 2), Segment(1, 2))
    assert segment_leq(Segment(2, 3), Segment(2, 3))
    with pytest.raises(ValueError):
        Segment(2, 1)


def test_segment_order_is_total():
    segs = [Segment(a, b) for b in range(1, 5) for a in range(1, b + 1)]
    for s, t in itertools.product(segs, repeat=2):
        assert segment_leq(s, t) or segment_leq(t, s)
        if segment_leq(s, t) and segment_leq(t, s):
            assert s == t
        for u in segs:
            if segment_leq(s, t) and segment_leq(t, u):
                assert segment_leq(s, u)


def test_segment_examples():
    A = M("0,1;1,0")
    assert upper_segments(A) == (Segment(1, 1),)
    assert lower_segments(A) == (Segment(1, 1),)
    assert upper_segments(M("2,0;0,1")) == ()
    assert upper_segments(M("0,0,1;0,1,0;0,0,1")) == (Segment(1, 2),)


def test_rank_matrix_examples():
    assert rank_matrix(M("0,1;1,0")) == ((0, 1), (1, 2))
    assert rank_matrix(M("1,0;0,1")) == ((1, 1), (1, 2))
    assert rank_matrix(M("4")) == ((4,),)


def _quotient_segments(f, g, n):
    """Segments of the representation v -> f_v / (f_v cap g_v) from its rank table."""
    ranks = {}
    for a in range(1, n + 1):
        for b in range(a, n + 1):
            kernel = f.steps[b - 1] & g.steps[b - 1]
            ranks[a, b] = (f.steps[a - 1] + kernel).dim - kernel.dim
    return segments_from_ranks(n, ranks)


def test_segments_match_quotients_over_f2():
    for n in (1, 2, 3):
        for r in range(4):
            for A in orbit_matrices(n, r):
                f1, f2 = flag_pair_from_matrix(A, 2)
                assert _quotient_segments(f1, f2, n) == upper_segments(A), A
                assert _quotient_segments(f2, f1, n) == lower_segments(A), A
