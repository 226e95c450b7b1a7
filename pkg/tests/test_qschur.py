import dataclasses
import json
import random

import pytest

from schurzero.core import OrbitMatrix, orbit_matrices
from schurzero.linalg_fq import QuiverRep
from schurzero.polyq import ONE, QPoly, q, quantum_int
from schurzero.qschur import (
    AlgebraElement,
    basis_B_expand,
    basis_B_factors,
    basis_product,
    commutator_forms_q,
    e_generator,
    f_generator,
    fundamental_mult,
    hall_number,
    multiply,
    q_relations,
    segment_chain,
    specialize,
    structure_constant,
    theta_plus,
    verify_relations_q,
)

M = OrbitMatrix.from_text
e = AlgebraElement.basis


def test_small_example_product():
    prod = basis_product(M("1,0;1,0"), M("1,1;0,0"))
    assert prod == AlgebraElement(2, 2, {M("0,1;1,0"): ONE, M("1,0;0,1"): ONE})


def test_generator_times_open_orbit_is_q():
    assert basis_product(M("1,1;0,0"), M("0,1;1,0")) == e(M("1,1;0,0"), q)


def test_diagonal_idempotents():
    for A in orbit_matrices(2, 2):
        assert basis_product(OrbitMatrix.diagonal(A.row_type), A) == e(A)
        assert basis_product(A, OrbitMatrix.diagonal(A.col_type)) == e(A)
        wrong = tuple(reversed(A.row_type))
        if wrong != A.row_type:
            assert not basis_product(OrbitMatrix.diagonal(wrong), A)


def test_identity_element():
    one = AlgebraElement.identity(2, 2)
    for A in orbit_matrices(2, 2):
        assert multiply(one, e(A)) == e(A) == multiply(e(A), one)


def test_generators():
    assert e_generator(1, (1, 1)) == M("1,1;0,0")
    assert f_generator(1, (1, 1)) == M("0,0;1,1")
    assert e_generator(1, (2, 0)) is None
    assert f_generator(1, (0, 2)) is None


def test_closed_form_examples():
    assert fundamental_mult("E", 1, M("0,1;1,0")) == e(M("1,1;0,0"), q)
    assert fundamental_mult("F", 1, M("1,1;0,0")) == AlgebraElement(2, 2, {M("0,1;1,0"): ONE, M("1,0;0,1"): ONE})
    assert not fundamental_mult("E", 1, M("1,1;0,0"))
    with pytest.raises(ValueError):
        fundamental_mult("E", 2, M("1,1;0,0"))


@pytest.mark.parametrize("n,r", [(2, 2), (2, 3), (3, 2)])
def test_closed_forms_match_counting(n, r):
    for A in orbit_matrices(n, r):
        for kind, gen in (("E", e_generator), ("F", f_generator)):
            for h in range(1, n):
                B = gen(h, A.row_type)
                if B is None:
                    continue
                assert fundamental_mult(kind, h, A) == basis_product(B, A), (kind, h, A)


def test_associativity_on_random_triples():
    rng = random.Random(3)
    for n, r in [(2, 2), (2, 3), (3, 2), (3, 3)]:
        mats = orbit_matrices(n, r)
        for _ in range(6):
            A = rng.choice(mats)
            B = rng.choice([X for X in mats if X.row_type == A.col_type])
            C = rng.choice([X for X in mats if X.row_type == B.col_type])
            left = multiply(multiply(e(A), e(B)), e(C))
            right = multiply(e(A), multiply(e(B), e(C)))
            assert left == right


def test_structure_constants_with_type_mismatch_vanish():
    assert structure_constant(M("1,0;1,0"), M("0,1;1,0"), M("1,0;0,1")) == 0


def test_hall_number_examples():
    L = QuiverRep.from_segments(2, [(1, 2)])
    S1 = QuiverRep.from_segments(2, [(1, 1)])
    S2 = QuiverRep.from_segments(2, [(2, 2)])
    assert hall_number(L, S1, S2) == ONE
    assert hall_number(L, S2, S1) == 0
    two = QuiverRep.from_segments(2, [(1, 1), (1, 1)])
    assert hall_number(two, S1, S1) == q + 1


def test_theta_plus_examples():
    S1 = QuiverRep.from_segments(2, [(1, 1)])
    assert theta_plus(S1, 2, 2) == AlgebraElement(2, 2, {M("1,1;0,0"): ONE, M("0,1;0,1"): ONE})
    assert theta_plus(QuiverRep(2, ()), 2, 2) == AlgebraElement.identity(2, 2)
    assert not theta_plus(QuiverRep.from_segments(2, [(1, 1)] * 3), 2, 2)


def test_theta_plus_is_multiplicative():
    n = 2
    for r in (2, 3):
        reps = [QuiverRep.from_segments(n, [(1, 1)] * k) for k in range(r + 1)]
        for Mrep in reps:
            for Nrep in reps:
                lhs = multiply(theta_plus(Mrep, n, r), theta_plus(Nrep, n, r))
                rhs = AlgebraElement.zero(n, r)
                k = len(Mrep) + len(Nrep)
                if k > r:
                    assert not lhs
                    continue
                L = QuiverRep.from_segments(n, [(1, 1)] * k)
                rhs = rhs + theta_plus(L, n, r).scaled(hall_number(L, Mrep, Nrep))
                assert lhs == rhs


def test_segment_chain_factors_multiply_back():
    A = M("1,1,1;0,0,0;0,0,0")
    factors = segment_chain(A)
    x = e(factors[0])
    for F in factors[1:]:
        x = multiply(x, e(F))
    assert x.coeff(A) == ONE


def test_basis_b_examples():
    assert basis_B_expand(M("0,1;1,0")) == basis_product(M("1,0;1,0"), M("1,1;0,0"))
    assert basis_B_factors(M("0,1;1,0")) == (M("1,0;1,0"), M("1,1;0,0"))
    assert basis_B_expand(M("2,0;0,1")) == e(M("2,0;0,1"))
    assert basis_B_expand(M("1,1;0,0")) == e(M("1,1;0,0"))


def test_specialize_examples():
    A = M("1,1;0,0")
    assert not specialize(e(A, q), 0)
    assert specialize(e(A, q + 1), 1) == e(A, 2)
    assert specialize(e(A, quantum_int(3)), 0) == e(A, 1)


def test_json_round_trip():
    x = AlgebraElement(2, 2, {M("0,1;1,0"): q, M("1,0;0,1"): q + 1})
    text = x.dumps()
    assert json.loads(text)["terms"][0] == {"matrix": "0,1;1,0", "coeff": [0, 1]}
    assert AlgebraElement.from_json(json.loads(text)) == x
    y = AlgebraElement(2, 2, {M("0,1;1,0"): 3})
    assert AlgebraElement.from_json(y.to_json(), integer=True) == y


def test_mixed_algebras_rejected():
    with pytest.raises(ValueError):
        _ = e(M("1,0;0,1")) + e(M("1,0;0,2"))


@pytest.mark.parametrize("n,r", [(2, 2), (2, 3), (3, 2)])
def test_q_relations_hold(n, r):
    report = verify_relations_q(n, r)
    assert report.ok, report.failures[:3]
    assert report.nontrivial > 0


def test_perturbed_relation_is_caught():
    rels = [rel for rel in q_relations(3, 2) if rel.family == "P" and abs(rel.i - rel.j) == 1]
    bad = [
        dataclasses.replace(rel, terms=tuple(
            (c + 1 if c == -(q + 1) else c, w) for c, w in rel.terms))
        for rel in rels
    ]
    report = verify_relations_q(3, 2, relations=bad, backend="closed")
    assert not report.ok


def test_commutator_form():
    forms = commutator_forms_q(3, 2)
    assert forms == {"EiFj-FjEi": True, "EiFj-FiEj": False}


def test_coefficients_are_polynomials():
    for A in orbit_matrices(2, 2):
        for B in orbit_matrices(2, 2):
            for c in basis_product(A, B).terms.values():
                assert isinstance(c, QPoly)
