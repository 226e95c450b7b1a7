"""The q-Schur algebra S_q(n, r) on the orbit basis.

Structure constants come from counting middle flags over several primes and
interpolating; the closed-form generator products, Hall numbers and the
triangular basis are layered on top and checked against those counts.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence

from .core import (
    Composition,
    LinePairs,
    OrbitMatrix,
    Segment,
    compositions,
    join_type,
    matrices_with_types,
    shift,
    upper_segments,
)
from .linalg_fq import (
    QuiverRep,
    count_middle_flags,
    count_sandwiched_flags,
    count_submodules,
    oracle_primes,
    sandwich_degree,
)
from .polyq import ONE, ZERO, QPoly, interpolate, q, quantum_factorial, quantum_int


class AlgebraElement:
    """Finite formal sum of orbit matrices with polynomial (or integer) coefficients."""

    __slots__ = ("n", "r", "terms")

    def __init__(self, n: int, r: int, terms: Mapping[OrbitMatrix, object] | None = None):
        self.n = n
        self.r = r
        self.terms: dict[OrbitMatrix, object] = {}
        for A, c in (terms or {}).items():
            if A.n != n or A.r != r:
                raise ValueError(f"{A} is not an orbit matrix for (n, r) = ({n}, {r})")
            if c:
                self.terms[A] = c

    @classmethod
    def basis(cls, A: OrbitMatrix, coeff=ONE) -> AlgebraElement:
        return cls(A.n, A.r, {A: coeff})

    @classmethod
    def k(cls, d: Composition, coeff=ONE) -> AlgebraElement:
        return cls.basis(OrbitMatrix.diagonal(d), coeff)

    @classmethod
    def identity(cls, n: int, r: int, coeff=ONE) -> AlgebraElement:
        return cls(n, r, {OrbitMatrix.diagonal(d): coeff for d in compositions(n, r)})

    @classmethod
    def zero(cls, n: int, r: int) -> AlgebraElement:
        return cls(n, r)

    def _same_algebra(self, other: AlgebraElement) -> None:
        if (self.n, self.r) != (other.n, other.r):
            raise ValueError(f"elements of different algebras ({self.n},{self.r}) and ({other.n},{other.r})")

    def __add__(self, other: AlgebraElement) -> AlgebraElement:
        self._same_algebra(other)
        terms = dict(self.terms)
        for A, c in other.terms.items():
            terms[A] = terms[A] + c if A in terms else c
        return AlgebraElement(self.n, self.r, terms)

    def __neg__(self) -> AlgebraElement:
        return AlgebraElement(self.n, self.r, {A: -c for A, c in self.terms.items()})

    def __sub__(self, other: AlgebraElement) -> AlgebraElement:
        return self + (-other)

    def scaled(self, c) -> AlgebraElement:
        return AlgebraElement(self.n, self.r, {A: c * x for A, x in self.terms.items()})

    def __rmul__(self, c) -> AlgebraElement:
        return self.scaled(c)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return multiply(self, other)
        return self.scaled(other)

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return (self.n, self.r) == (other.n, other.r) and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def coeff(self, A: OrbitMatrix):
        return self.terms.get(A, 0)

    def items(self) -> list[tuple[OrbitMatrix, object]]:
        return sorted(self.terms.items(), key=lambda kv: kv[0])

    def support(self) -> list[OrbitMatrix]:
        return sorted(self.terms)

    def __repr__(self):
        if not self.terms:
            return f"AlgebraElement({self.n},{self.r}, 0)"
        body = " + ".join(f"({c})*e[{A}]" for A, c in self.items())
        return f"AlgebraElement({self.n},{self.r}, {body})"

    def to_json(self) -> dict:
        terms = []
        for A, c in self.items():
            coeff = c.to_json() if isinstance(c, QPoly) else QPoly.const(c).to_json()
            terms.append({"matrix": A.to_text(), "coeff": coeff})
        return {"n": self.n, "r": self.r, "terms": terms}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    @classmethod
    def from_json(cls, data: dict, integer: bool = False) -> AlgebraElement:
        terms: dict[OrbitMatrix, object] = {}
        for t in data["terms"]:
            A = OrbitMatrix.from_text(t["matrix"])
            c = QPoly.from_json(t["coeff"])
            if integer:
                if c.degree > 0:
                    raise ValueError(f"non-constant coefficient {c} in an integer element")
                c = c(0)
            terms[A] = terms[A] + c if A in terms else c
        return cls(data["n"], data["r"], terms)


# -- structure constants -----------------------------------------------------

def flag_degree(e: Composition) -> int:
    """Degree in q of the number of flags of type e: sum over i < j of e_i e_j."""
    return sum(e[i] * e[j] for i in range(len(e)) for j in range(i + 1, len(e)))


@dataclass
class InterpolationLog:
    """Running tally of interpolations and of held-out primes that were checked."""

    fits: int = 0
    held_out: int = 0
    by_kind: Counter = field(default_factory=Counter)

    def record(self, kind: str, extra_points: int) -> None:
        self.fits += 1
        if extra_points:
            self.held_out += 1
        self.by_kind[kind] += 1


LOG = InterpolationLog()


def _fit(kind: str, sample: Callable[[int], int], degree_bound: int, pool: Sequence[int] | None) -> QPoly:
    primes = tuple(pool[:degree_bound + 2]) if pool is not None else oracle_primes(degree_bound + 2)
    if len(primes) < degree_bound + 1:
        raise ValueError(f"prime pool {pool} too small for degree {degree_bound}")
    points = [(p, sample(p)) for p in primes]
    poly = interpolate(points, degree_bound)
    LOG.record(kind, len(points) - degree_bound - 1)
    return poly


@lru_cache(maxsize=None)
def structure_constant(A: OrbitMatrix, B: OrbitMatrix, C: OrbitMatrix, pool: tuple[int, ...] | None = None) -> QPoly:
    """g_{A,B,C}: coefficient of e_C in e_A e_B, as an exact polynomial."""
    if A.col_type != B.row_type or C.row_type != A.row_type or C.col_type != B.col_type:
        return ZERO
    return _fit("g", lambda p: count_middle_flags(A, B, C, p), flag_degree(A.col_type), pool)


@lru_cache(maxsize=None)
def structure_constant_upper(A: OrbitMatrix, B: OrbitMatrix, C: OrbitMatrix,
                             pool: tuple[int, ...] | None = None) -> QPoly:
    """g_{A,B,C} for upper-triangular orbits, counting only flags squeezed between the outer pair."""
    if A.col_type != B.row_type or C.row_type != A.row_type or C.col_type != B.col_type:
        return ZERO
    return _fit("g-upper", lambda p: count_sandwiched_flags(A, B, C, p), sandwich_degree(C, A.col_type), pool)


@lru_cache(maxsize=None)
def _block(d: Composition, e: Composition) -> tuple[OrbitMatrix, ...]:
    return tuple(matrices_with_types(d, e))


def multiply(x: AlgebraElement, y: AlgebraElement, pool: tuple[int, ...] | None = None) -> AlgebraElement:
    """Product in S_q(n, r), with every structure constant obtained by counting."""
    x._same_algebra(y)
    out: dict[OrbitMatrix, object] = {}
    for A, a in x.terms.items():
        for B, b in y.terms.items():
            if A.col_type != B.row_type:
                continue
            ab = a * b
            for C in _block(A.row_type, B.col_type):
                g = structure_constant(A, B, C, pool)
                if g:
                    out[C] = out.get(C, ZERO) + ab * g
    return AlgebraElement(x.n, x.r, out)


def basis_product(A: OrbitMatrix, B: OrbitMatrix) -> AlgebraElement:
    return multiply(AlgebraElement.basis(A), AlgebraElement.basis(B))


# -- generators and the closed-form products -----------------------------------

def e_generator(h: int, d: Composition) -> OrbitMatrix | None:
    """e_{h,d}: [f, f'] with f' of type d, f' in f, f/f' simple at h. None when it vanishes."""
    n = len(d)
    if not 1 <= h < n or d[h] == 0:
        return None
    base = shift(d, minus=[h + 1])
    return OrbitMatrix.diagonal(base).bumped({(h - 1, h): 1})


def f_generator(h: int, d: Composition) -> OrbitMatrix | None:
    """f_{h,d}: the transpose-shaped partner of e, with right type d. None when it vanishes."""
    n = len(d)
    if not 1 <= h < n or d[h - 1] == 0:
        return None
    base = shift(d, minus=[h])
    return OrbitMatrix.diagonal(base).bumped({(h, h - 1): 1})


def generator(kind: str, h: int, d: Composition) -> OrbitMatrix | None:
    if kind == "E":
        return e_generator(h, d)
    if kind == "F":
        return f_generator(h, d)
    raise ValueError(f"unknown generator kind {kind!r}")


def fundamental_mult(kind: str, h: int, A: OrbitMatrix) -> AlgebraElement:
    """Closed form for (generator of the given kind at h) * e_A, the generator's
    right type being row_type(A)."""
    n = A.n
    if not 1 <= h < n:
        raise ValueError(f"generator index {h} out of range for n={n}")
    top, bot = h - 1, h
    out: dict[OrbitMatrix, QPoly] = {}
    if kind == "E":
        for p in range(n):
            if A[bot, p] > 0:
                power = sum(A[top, j] for j in range(p + 1, n))
                X = A.bumped({(top, p): 1, (bot, p): -1})
                out[X] = out.get(X, ZERO) + q ** power * quantum_int(A[top, p] + 1)
    elif kind == "F":
        for p in range(n):
            if A[top, p] > 0:
                power = sum(A[bot, j] for j in range(p))
                Y = A.bumped({(top, p): -1, (bot, p): 1})
                out[Y] = out.get(Y, ZERO) + q ** power * quantum_int(A[bot, p] + 1)
    else:
        raise ValueError(f"unknown generator kind {kind!r}")
    return AlgebraElement(n, A.r, out)


def act(kind: str, h: int, x: AlgebraElement, backend: str = "closed",
        pool: tuple[int, ...] | None = None) -> AlgebraElement:
    """Left multiplication by E_h (or F_h), the sum of all generators at h."""
    out = AlgebraElement.zero(x.n, x.r)
    for A, c in x.terms.items():
        if backend == "closed":
            prod = fundamental_mult(kind, h, A)
        elif backend == "count":
            g = generator(kind, h, A.row_type)
            if g is None:
                continue
            prod = multiply(AlgebraElement.basis(g), AlgebraElement.basis(A), pool)
        else:
            raise ValueError(f"unknown backend {backend!r}")
        out = out + prod.scaled(c)
    return out


Word = tuple[tuple[str, int], ...]


def apply_word(word: Word, x: AlgebraElement, backend: str = "closed",
               pool: tuple[int, ...] | None = None) -> AlgebraElement:
    """word(x): the rightmost letter acts first."""
    for kind, h in reversed(word):
        x = act(kind, h, x, backend, pool)
    return x


# -- Hall numbers and the positive part ----------------------------------------

def hall_degree(L: QuiverRep, N: QuiverRep) -> int:
    """Degree bound for submodule counts: the dimension of the product of the
    Grassmannians Gr(dim N_v, L_v) that contains every candidate submodule."""
    return sum(max(0, b) * max(0, a - b) for a, b in zip(L.dim_vector, N.dim_vector))


@lru_cache(maxsize=None)
def hall_number(L: QuiverRep, M: QuiverRep, N: QuiverRep) -> QPoly:
    """h^L_{MN}: submodules X of L with X ~ N and L/X ~ M, as a polynomial."""
    if tuple(a + b for a, b in zip(M.dim_vector, N.dim_vector)) != L.dim_vector:
        return ZERO
    return _fit("hall", lambda p: count_submodules(L, M, N, p), hall_degree(L, N), None)


def segment_matrix(seg_counts: Iterable[Segment], n: int, diag: Sequence[int]) -> OrbitMatrix:
    """Upper-triangular orbit matrix: segment [a, b] sits at entry (a, b + 1)."""
    rows = [[0] * n for _ in range(n)]
    for s in seg_counts:
        if s.hi >= n:
            raise ValueError(f"segment {s} ends at vertex n and cannot be a flag quotient")
        rows[s.lo - 1][s.hi] += 1
    for k, x in enumerate(diag):
        rows[k][k] += x
    return OrbitMatrix(tuple(map(tuple, rows)))


def theta_plus(M: QuiverRep, n: int, r: int) -> AlgebraElement:
    """Sum of all orbits [f, f'] with f' in f and f/f' ~ M."""
    if M.n != n:
        raise ValueError("representation over a different quiver")
    k = len(M)
    if k > r or any(s.hi >= n for s in M.segments):
        return AlgebraElement.zero(n, r)
    return AlgebraElement(n, r, {segment_matrix(M.segments, n, diag): ONE for diag in compositions(n, r - k)})


def upper_rep(A: OrbitMatrix) -> QuiverRep:
    return QuiverRep(A.n, upper_segments(A))


def segment_chain(A: OrbitMatrix) -> list[OrbitMatrix]:
    """Factors [f_t, f_{t-1}], ..., [f_1, f_0] (leftmost first) of an upper-triangular A,
    each with one indecomposable quotient, smallest segment at the bottom."""
    if not A.is_upper():
        raise ValueError("chain factorisation needs f' contained in f")
    t = A.col_type
    factors = []
    for s in upper_segments(A):
        below = shift(t, minus=[s.hi + 1])
        factors.append(OrbitMatrix.diagonal(below).bumped({(s.lo - 1, s.hi): 1}))
        t = shift(t, plus=[s.lo], minus=[s.hi + 1])
    assert t == A.row_type
    return factors[::-1]


def chain_multiplicity(A: OrbitMatrix) -> QPoly:
    """Product of [m]! over the multiplicities m of the segments of A."""
    out = ONE
    for m in Counter(upper_segments(A)).values():
        out = out * quantum_factorial(m)
    return out


# -- the triangular basis ------------------------------------------------------

def basis_B_factors(A: OrbitMatrix) -> tuple[OrbitMatrix, OrbitMatrix]:
    """([f1, f1 + f2], [f1 + f2, f2]) for (f1, f2) in e_A."""
    lp = LinePairs.from_matrix(A)
    up = LinePairs(A.n, tuple((i, min(i, j)) for i, j in lp.pairs)).to_matrix()
    lo = LinePairs(A.n, tuple((min(i, j), j) for i, j in lp.pairs)).to_matrix()
    return up, lo


def basis_B_expand(A: OrbitMatrix) -> AlgebraElement:
    up, lo = basis_B_factors(A)
    return basis_product(up, lo)


def join_size(A: OrbitMatrix) -> tuple[int, ...]:
    """Dimensions of the steps of f1 + f2."""
    c = join_type(A)
    out, acc = [], 0
    for x in c:
        acc += x
        out.append(acc)
    return tuple(out)


def specialize(x: AlgebraElement, q0: int) -> AlgebraElement:
    """Evaluate every coefficient at q = q0."""
    return AlgebraElement(x.n, x.r, {A: (c(q0) if isinstance(c, QPoly) else c) for A, c in x.terms.items()})


# -- relations ---------------------------------------------------------------

@dataclass(frozen=True)
class Relation:
    """sum(coeff * word) applied to K_d; the empty word stands for K_d itself."""

    family: str
    i: int
    j: int
    d: Composition
    terms: tuple[tuple[object, Word], ...]

    def label(self) -> str:
        return f"{self.family}_{self.i}{self.j} at d={self.d}"


def _serre(kind: str, i: int, j: int, a, b, c) -> tuple[tuple[object, Word], ...]:
    X = kind
    return (
        (a, ((X, i), (X, i), (X, j))),
        (b, ((X, i), (X, j), (X, i))),
        (c, ((X, j), (X, i), (X, i))),
    )


def q_relations(n: int, r: int, commutator: str = "EiFj-FjEi") -> list[Relation]:
    """Every instance of P_ij, N_ij and C_ij at every vertex K_d."""
    out = []
    one = ONE
    for d in compositions(n, r):
        for i in range(1, n):
            for j in range(1, n):
                if i == j - 1:
                    P = _serre("E", i, j, one, -(q + 1), q)
                    N = _serre("F", i, j, q, -(q + 1), one)
                elif i == j + 1:
                    P = _serre("E", i, j, q, -(q + 1), one)
                    N = _serre("F", i, j, one, -(q + 1), q)
                elif i != j:
                    P = ((one, (("E", i), ("E", j))), (-one, (("E", j), ("E", i))))
                    N = ((one, (("F", i), ("F", j))), (-one, (("F", j), ("F", i))))
                else:
                    P = N = None
                if P is not None:
                    out.append(Relation("P", i, j, d, P))
                    out.append(Relation("N", i, j, d, N))
                out.append(Relation("C", i, j, d, _commutator(i, j, d, commutator, q_level=True)))
    return out


def _commutator(i: int, j: int, d: Composition, form: str, q_level: bool, lam=None):
    if form == "EiFj-FjEi":
        terms = [(1, (("E", i), ("F", j))), (-1, (("F", j), ("E", i)))]
    elif form == "EiFj-FiEj":
        terms = [(1, (("E", i), ("F", j))), (-1, (("F", i), ("E", j)))]
    else:
        raise ValueError(f"unknown commutator form {form!r}")
    if q_level:
        terms = [(QPoly.const(c), w) for c, w in terms]
    if i == j:
        if q_level:
            k_coeff = quantum_int(d[i - 1]) - quantum_int(d[i])
        else:
            k_coeff = (lam or zero_lambda)(i, d)
        terms.append((-k_coeff, ()))
    return tuple(terms)


@dataclass
class RelationReport:
    checked: int = 0
    nontrivial: int = 0
    failures: list[tuple[str, object]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def merge(self, other: RelationReport) -> RelationReport:
        return RelationReport(self.checked + other.checked, self.nontrivial + other.nontrivial,
                              self.failures + other.failures)


def verify_relations_q(n: int, r: int, primes: Sequence[int] | None = None,
                       relations: Sequence[Relation] | None = None,
                       backend: str = "count") -> RelationReport:
    """Evaluate each relation on K_d in S_q(n, r) and collect non-zero residuals."""
    rels = q_relations(n, r) if relations is None else relations
    pool = tuple(primes) if primes is not None else None
    report = RelationReport()
    for rel in rels:
        kd = AlgebraElement.k(rel.d)
        residual = AlgebraElement.zero(n, r)
        touched = False
        for coeff, word in rel.terms:
            val = apply_word(word, kd, backend, pool)
            touched = touched or bool(val)
            residual = residual + val.scaled(coeff)
        report.checked += 1
        report.nontrivial += touched
        if residual:
            report.failures.append((rel.label(), residual))
    return report


def zero_lambda(i: int, d: Composition) -> int:
    """Coefficient of K_d in E_iF_i - F_iE_i at q = 0."""
    a, b = d[i - 1], d[i]
    if a > b == 0:
        return 1
    if b > a == 0:
        return -1
    return 0


def commutator_forms_q(n: int, r: int, backend: str = "closed") -> dict[str, bool]:
    """Which of the two printed off-diagonal commutators vanish identically in S_q."""
    out = {}
    for form in ("EiFj-FjEi", "EiFj-FiEj"):
        rels = [
            Relation("C", i, j, d, _commutator(i, j, d, form, q_level=True))
            for d in compositions(n, r) for i in range(1, n) for j in range(1, n) if i != j
        ]
        out[form] = verify_relations_q(n, r, relations=rels, backend=backend).ok
    return out
