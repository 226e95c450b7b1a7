"""Enumerative linear algebra over prime fields.

Subspaces are kept in reduced row echelon form so that equal subspaces compare
equal. Flags carry an adapted basis (the first dim V_i vectors span V_i), which
is what the fast relative-position routine works from.
"""

from __future__ import annotations

import os
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from typing import Iterable, Iterator, Sequence

from .core import (
    Composition,
    LinePairs,
    OrbitMatrix,
    Segment,
    check_composition,
    sorted_segments,
)

PRIMES = (2, 3, 5, 7, 11, 13, 17, 19)
MAX_DIM = 4

Vector = tuple[int, ...]


class ResourceError(RuntimeError):
    """Requested enumeration is beyond the supported desk-scale bounds."""


def prime_limit() -> int:
    """Largest prime the oracles may use; ``SCHUR_PRIME_LIMIT`` lowers it."""
    raw = os.environ.get("SCHUR_PRIME_LIMIT")
    if raw is None:
        return PRIMES[-1]
    return min(int(raw), PRIMES[-1])


def oracle_primes(count: int) -> tuple[int, ...]:
    allowed = tuple(p for p in PRIMES if p <= prime_limit())
    if count > len(allowed):
        raise ResourceError(f"need {count} primes but only {allowed} are allowed")
    return allowed[:count]


def _guard(p: int, r: int) -> None:
    if p not in PRIMES:
        raise ResourceError(f"unsupported field size {p}; use one of {PRIMES}")
    if r > MAX_DIM:
        raise ResourceError(f"dimension {r} exceeds the enumeration bound {MAX_DIM}")


# -- row reduction -----------------------------------------------------------

def rref(rows: Iterable[Sequence[int]], p: int) -> tuple[Vector, ...]:
    """Reduced row echelon form over F_p with zero rows dropped."""
    m = [[x % p for x in row] for row in rows]
    if not m:
        return ()
    width = len(m[0])
    out: list[list[int]] = []
    for col in range(width):
        pivot = next((k for k in range(len(m)) if m[k][col]), None)
        if pivot is None:
            continue
        row = m.pop(pivot)
        inv = pow(row[col], p - 2, p)
        row = [x * inv % p for x in row]
        for other in m:
            c = other[col]
            if c:
                for t in range(col, width):
                    other[t] = (other[t] - c * row[t]) % p
        for other in out:
            c = other[col]
            if c:
                for t in range(col, width):
                    other[t] = (other[t] - c * row[t]) % p
        out.append(row)
    return tuple(tuple(row) for row in out)


def rank(rows: Iterable[Sequence[int]], p: int) -> int:
    return len(rref(rows, p))


class _Echelon:
    """Incremental row echelon basis; ``add`` reports whether a vector was new."""

    __slots__ = ("p", "rows")

    def __init__(self, p: int):
        self.p = p
        self.rows: list[tuple[int, list[int]]] = []  # (pivot column, row with pivot 1), by pivot

    def add(self, vec: Sequence[int]) -> bool:
        p = self.p
        v = list(vec)
        for col, row in self.rows:
            c = v[col]
            if c:
                for t in range(col, len(v)):
                    v[t] = (v[t] - c * row[t]) % p
        for col, x in enumerate(v):
            if x:
                inv = pow(x, p - 2, p)
                v = [y * inv % p for y in v]
                self.rows.append((col, v))
                self.rows.sort(key=lambda cr: cr[0])
                return True
        return False


# -- subspaces and flags ----------------------------------------------------

@dataclass(frozen=True)
class FqSubspace:
    p: int
    ambient_dim: int
    basis: tuple[Vector, ...]

    @classmethod
    def span(cls, vectors: Iterable[Sequence[int]], p: int, ambient_dim: int) -> FqSubspace:
        return cls(p, ambient_dim, rref(list(vectors), p))

    @classmethod
    def zero(cls, p: int, ambient_dim: int) -> FqSubspace:
        return cls(p, ambient_dim, ())

    @classmethod
    def whole(cls, p: int, ambient_dim: int) -> FqSubspace:
        return cls(p, ambient_dim, tuple(_unit(k, ambient_dim) for k in range(ambient_dim)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(k for k, x in enumerate(row) if x) for row in self.basis)

    def _check(self, other: FqSubspace) -> None:
        if (self.p, self.ambient_dim) != (other.p, other.ambient_dim):
            raise ValueError("subspaces live in different ambient spaces")

    def __add__(self, other: FqSubspace) -> FqSubspace:
        self._check(other)
        return FqSubspace.span(self.basis + other.basis, self.p, self.ambient_dim)

    def __and__(self, other: FqSubspace) -> FqSubspace:
        """Intersection by the Zassenhaus construction."""
        self._check(other)
        m = self.ambient_dim
        if not self.basis or not other.basis:
            return FqSubspace.zero(self.p, m)
        block = [row + row for row in self.basis] + [row + (0,) * m for row in other.basis]
        reduced = rref(block, self.p)
        inter = [row[m:] for row in reduced if not any(row[:m])]
        return FqSubspace.span(inter, self.p, m)

    def __le__(self, other: FqSubspace) -> bool:
        return (self + other).dim == other.dim

    def transformed(self, g: Sequence[Sequence[int]]) -> FqSubspace:
        return FqSubspace.span((_apply(g, v, self.p) for v in self.basis), self.p, self.ambient_dim)


def _unit(k: int, m: int) -> Vector:
    return tuple(1 if t == k else 0 for t in range(m))


def _apply(g: Sequence[Sequence[int]], v: Sequence[int], p: int) -> Vector:
    return tuple(sum(g[a][b] * v[b] for b in range(len(v))) % p for a in range(len(g)))


def enumerate_subspaces(m: int, k: int, p: int) -> Iterator[tuple[Vector, ...]]:
    """RREF bases of all k-dimensional subspaces of F_p^m."""
    for pivots in combinations(range(m), k):
        pivot_set = set(pivots)
        slots = [(row, col) for row, pc in enumerate(pivots) for col in range(pc + 1, m) if col not in pivot_set]
        for values in product(range(p), repeat=len(slots)):
            rows = [[0] * m for _ in range(k)]
            for row, pc in enumerate(pivots):
                rows[row][pc] = 1
            for (row, col), x in zip(slots, values):
                rows[row][col] = x
            yield tuple(tuple(row) for row in rows)


def enumerate_extensions(base: FqSubspace, extra: int) -> Iterator[tuple[FqSubspace, tuple[Vector, ...]]]:
    """Subspaces W containing ``base`` with dim W = dim base + extra.

    Yields (W, new vectors) where the new vectors complete a basis of base to W.
    """
    m, p = base.ambient_dim, base.p
    free = [k for k in range(m) if k not in set(base.pivots)]
    for sub in enumerate_subspaces(len(free), extra, p):
        new = []
        for row in sub:
            v = [0] * m
            for k, x in zip(free, row):
                v[k] = x
            new.append(tuple(v))
        yield FqSubspace.span(base.basis + tuple(new), p, m), tuple(new)


@dataclass(frozen=True)
class FqFlag:
    """Nested subspaces V_1 <= ... <= V_n = F_p^r, with an adapted basis."""

    p: int
    steps: tuple[FqSubspace, ...]
    adapted: tuple[Vector, ...]

    @classmethod
    def from_adapted(cls, vectors: Sequence[Sequence[int]], type_: Composition, p: int) -> FqFlag:
        vectors = tuple(tuple(x % p for x in v) for v in vectors)
        r = sum(type_)
        if len(vectors) != r:
            raise ValueError("adapted basis must have r vectors")
        steps = []
        acc = 0
        for part in type_:
            acc += part
            steps.append(FqSubspace.span(vectors[:acc], p, r))
        if steps[-1].dim != r:
            raise ValueError("adapted vectors are not a basis")
        return cls(p, tuple(steps), vectors)

    @property
    def r(self) -> int:
        return self.steps[-1].ambient_dim

    @property
    def n(self) -> int:
        return len(self.steps)

    @property
    def type(self) -> Composition:
        dims = [0] + [s.dim for s in self.steps]
        return tuple(dims[k + 1] - dims[k] for k in range(len(self.steps)))

    def transformed(self, g: Sequence[Sequence[int]]) -> FqFlag:
        return FqFlag.from_adapted([_apply(g, v, self.p) for v in self.adapted], self.type, self.p)


def enumerate_flags(p: int, type_: Composition) -> Iterator[FqFlag]:
    """Every flag of the given type in F_p^r exactly once."""
    type_ = check_composition(type_)
    r = sum(type_)
    _guard(p, r)
    yield from _flags(p, type_)


@lru_cache(maxsize=None)
def _flags(p: int, type_: Composition) -> tuple[FqFlag, ...]:
    r = sum(type_)
    out = []

    def rec(k: int, current: FqSubspace, adapted: tuple[Vector, ...], steps: tuple[FqSubspace, ...]):
        if k == len(type_):
            out.append(FqFlag(p, steps, adapted))
            return
        for nxt, new in enumerate_extensions(current, type_[k]):
            rec(k + 1, nxt, adapted + new, steps + (nxt,))

    rec(0, FqSubspace.zero(p, r), (), ())
    return tuple(out)


def flag_pair_from_matrix(A: OrbitMatrix, p: int) -> tuple[FqFlag, FqFlag]:
    """Coordinate flag pair in the orbit of A: pair (i, j) gives a basis vector in
    the left flag from step i and in the right flag from step j."""
    lp = LinePairs.from_matrix(A)
    r = lp.r
    basis = [_unit(k, r) for k in range(r)]
    left = sorted(range(r), key=lambda k: lp.pairs[k][0])
    right = sorted(range(r), key=lambda k: lp.pairs[k][1])
    f1 = FqFlag.from_adapted([basis[k] for k in left], A.row_type, p)
    f2 = FqFlag.from_adapted([basis[k] for k in right], A.col_type, p)
    return f1, f2


# -- relative position -------------------------------------------------------

def relative_position(f: FqFlag, f2: FqFlag) -> OrbitMatrix:
    """A_ij = dim(V_{i-1} + V_i cap V'_j) - dim(V_{i-1} + V_i cap V'_{j-1})."""
    if f.p != f2.p or f.r != f2.r or f.n != f2.n:
        raise ValueError("flags live in different ambient spaces")
    zero = FqSubspace.zero(f.p, f.r)
    left = (zero,) + f.steps
    right = (zero,) + f2.steps
    n = f.n
    rows = []
    for i in range(1, n + 1):
        dims = [(left[i - 1] + (left[i] & right[j])).dim for j in range(n + 1)]
        rows.append(tuple(dims[j] - dims[j - 1] for j in range(1, n + 1)))
    return OrbitMatrix(tuple(rows))


def _cumulative(type_: Composition) -> list[int]:
    acc, out = 0, [0]
    for part in type_:
        acc += part
        out.append(acc)
    return out


def relative_position_fast(f: FqFlag, f2: FqFlag) -> tuple[tuple[int, ...], ...]:
    """Entries of relative_position(f, f2) from intersection dimensions.

    dim(V_i cap V'_j) = a_i + b_j - rank(adapted_i | adapted'_j), and A is the
    mixed second difference of that table.
    """
    p, n = f.p, f.n
    a = _cumulative(f.type)
    b = _cumulative(f2.type)
    inter = [[0] * (n + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        ech = _Echelon(p)
        rk = 0
        for v in f.adapted[:a[i]]:
            rk += ech.add(v)
        for j in range(1, n + 1):
            for v in f2.adapted[b[j - 1]:b[j]]:
                rk += ech.add(v)
            inter[i][j] = a[i] + b[j] - rk
    return tuple(
        tuple(inter[i][j] - inter[i - 1][j] - inter[i][j - 1] + inter[i - 1][j - 1] for j in range(1, n + 1))
        for i in range(1, n + 1)
    )


@lru_cache(maxsize=None)
def _middle_counter(outer: OrbitMatrix, middle: Composition, p: int) -> Counter:
    """Counter of (relpos(f1, f), relpos(f, f2)) over flags f of the middle type,
    where (f1, f2) is the coordinate representative of ``outer``."""
    f1, f2 = flag_pair_from_matrix(outer, p)
    counts: Counter = Counter()
    for f in _flags(p, middle):
        counts[relative_position_fast(f1, f), relative_position_fast(f, f2)] += 1
    return counts


def count_middle_flags(A: OrbitMatrix, A2: OrbitMatrix, A3: OrbitMatrix, p: int) -> int:
    """|S(A, A2, A3)| over F_p: middle flags f with (f1, f) in e_A and (f, f2) in e_A2,
    for the coordinate representative (f1, f2) of e_A3."""
    if not (A.n == A2.n == A3.n):
        raise ValueError("matrices of different sizes")
    if A.col_type != A2.row_type or A3.row_type != A.row_type or A3.col_type != A2.col_type:
        return 0
    _guard(p, A3.r)
    return _middle_counter(A3, A.col_type, p)[A.entries, A2.entries]


def count_middle_flags_at(A: OrbitMatrix, A2: OrbitMatrix, f1: FqFlag, f2: FqFlag) -> int:
    """Same count for an arbitrary representative pair (f1, f2); slow path for spot checks."""
    total = 0
    for f in _flags(f1.p, A.col_type):
        if relative_position(f1, f) == A and relative_position(f, f2) == A2:
            total += 1
    return total


def sandwich_degree(A3: OrbitMatrix, middle: Composition) -> int:
    """Degree bound for flags f with f2 <= f <= f1 of the middle type: the sum of
    the dimensions of the Grassmannians Gr(dim f_k / f2_k, f1_k / f2_k)."""
    outer, inner, mid = _cumulative(A3.row_type), _cumulative(A3.col_type), _cumulative(middle)
    return sum((mid[k] - inner[k]) * (outer[k] - mid[k]) for k in range(1, A3.n + 1))


def count_sandwiched_flags(A: OrbitMatrix, A2: OrbitMatrix, A3: OrbitMatrix, p: int) -> int:
    """count_middle_flags for upper-triangular A, A2, A3, enumerating only the
    flags f with f2_k <= f_k <= f1_k. No dimension guard: the work is bounded by
    the size of the sandwich, not of the ambient space."""
    if not (A.is_upper() and A2.is_upper() and A3.is_upper()):
        raise ValueError("sandwich enumeration needs upper-triangular orbits")
    if A.col_type != A2.row_type or A3.row_type != A.row_type or A3.col_type != A2.col_type:
        return 0
    if p not in PRIMES:
        raise ResourceError(f"unsupported field size {p}; use one of {PRIMES}")
    f1, f2 = flag_pair_from_matrix(A3, p)
    r, n = A3.r, A3.n
    mid = _cumulative(A.col_type)
    target = (A.entries, A2.entries)
    total = 0

    def rec(k: int, prev: FqSubspace, adapted: tuple[Vector, ...]) -> None:
        nonlocal total
        if k == n:
            f = FqFlag.from_adapted(adapted, A.col_type, p)
            if (relative_position_fast(f1, f), relative_position_fast(f, f2)) == target:
                total += 1
            return
        ech = _Echelon(p)
        for v in prev.basis:
            ech.add(v)
        forced = tuple(v for v in f2.steps[k].basis if ech.add(v))
        low = prev.dim + len(forced)
        need = mid[k + 1] - low
        if need < 0:
            return
        free = tuple(v for v in f1.steps[k].basis if ech.add(v))
        if need > len(free):
            return
        for sub in enumerate_subspaces(len(free), need, p):
            chosen = tuple(
                tuple(sum(c * u[t] for c, u in zip(row, free)) % p for t in range(r)) for row in sub)
            rec(k + 1, FqSubspace.span(prev.basis + forced + chosen, p, r), adapted + forced + chosen)

    rec(0, FqSubspace.zero(p, r), ())
    return total


def random_invertible(r: int, p: int, rng) -> tuple[Vector, ...]:
    while True:
        g = tuple(tuple(rng.randrange(p) for _ in range(r)) for _ in range(r))
        if rank(g, p) == r:
            return g


# -- representations of the linear quiver -------------------------------------

@dataclass(frozen=True)
class QuiverRep:
    """Isomorphism class of a representation of 1 -> 2 -> ... -> n: a multiset of segments."""

    n: int
    segments: tuple[Segment, ...]

    def __post_init__(self):
        for s in self.segments:
            if s.hi > self.n:
                raise ValueError(f"segment {s} exceeds n={self.n}")
        object.__setattr__(self, "segments", sorted_segments(self.segments))

    @classmethod
    def from_segments(cls, n: int, segs: Iterable[Segment | tuple[int, int]]) -> QuiverRep:
        return cls(n, tuple(s if isinstance(s, Segment) else Segment(*s) for s in segs))

    @property
    def summands(self) -> tuple[tuple[Segment, int], ...]:
        c = Counter(self.segments)
        return tuple((s, c[s]) for s in sorted(c, key=Segment.sort_key))

    @property
    def dim_vector(self) -> tuple[int, ...]:
        dv = [0] * self.n
        for s in self.segments:
            for v in range(s.lo, s.hi + 1):
                dv[v - 1] += 1
        return tuple(dv)

    def rank_table(self) -> dict[tuple[int, int], int]:
        """rank(a -> b) = number of segments containing [a, b]."""
        return {
            (a, b): sum(1 for s in self.segments if s.lo <= a and b <= s.hi)
            for a in range(1, self.n + 1) for b in range(a, self.n + 1)
        }

    def __len__(self):
        return len(self.segments)


def segments_from_ranks(n: int, ranks: dict[tuple[int, int], int]) -> tuple[Segment, ...]:
    """Invert rank_table: multiplicity of [a, b] by inclusion-exclusion."""

    def rk(a: int, b: int) -> int:
        if a < 1 or b > n:
            return 0
        return ranks[a, b]

    segs = []
    for a in range(1, n + 1):
        for b in range(a, n + 1):
            m = rk(a, b) - rk(a - 1, b) - rk(a, b + 1) + rk(a - 1, b + 1)
            if m < 0:
                raise ValueError("rank table is not realisable")
            segs.extend([Segment(a, b)] * m)
    return sorted_segments(segs)


class _Realisation:
    """Concrete representation: at vertex v a basis indexed by the segments through v."""

    def __init__(self, rep: QuiverRep):
        self.n = rep.n
        self.labels = [[k for k, s in enumerate(rep.segments) if s.lo <= v <= s.hi] for v in range(1, rep.n + 1)]
        self.dims = [len(ls) for ls in self.labels]

    def push(self, v: int, vec: Sequence[int]) -> Vector:
        """Image of a vector at vertex v (1-based) in vertex v + 1."""
        src, dst = self.labels[v - 1], self.labels[v]
        pos = {k: t for t, k in enumerate(dst)}
        out = [0] * len(dst)
        for t, k in enumerate(src):
            if k in pos:
                out[pos[k]] = vec[t]
        return tuple(out)

    def push_many(self, a: int, b: int, vecs: Iterable[Sequence[int]]) -> list[Vector]:
        vecs = [tuple(v) for v in vecs]
        for v in range(a, b):
            vecs = [self.push(v, x) for x in vecs]
        return vecs


def count_submodules(L: QuiverRep, M: QuiverRep, N: QuiverRep, p: int) -> int:
    """Number of subrepresentations X of a fixed realisation of L over F_p with
    X isomorphic to N and L/X isomorphic to M."""
    if not (L.n == M.n == N.n):
        raise ValueError("representations of different quivers")
    dl, dm, dn = L.dim_vector, M.dim_vector, N.dim_vector
    if any(x != y + z for x, y, z in zip(dl, dm, dn)):
        return 0
    _guard(p, max(dl, default=0))
    real = _Realisation(L)
    n = L.n
    want_sub = N.rank_table()
    want_quot = M.rank_table()
    total = 0

    def rec(v: int, chosen: list[FqSubspace]) -> None:
        nonlocal total
        if v > n:
            if _sub_ranks(real, chosen) == want_sub and _quot_ranks(real, chosen) == want_quot:
                total += 1
            return
        m = real.dims[v - 1]
        if v == 1:
            base = FqSubspace.zero(p, m)
        else:
            image = real.push_many(v - 1, v, chosen[-1].basis)
            base = FqSubspace.span(image, p, m) if m else FqSubspace.zero(p, 0)
        extra = dn[v - 1] - base.dim
        if extra < 0:
            return
        if m == 0:
            rec(v + 1, chosen + [FqSubspace.zero(p, 0)])
            return
        for sub, _ in enumerate_extensions(base, extra):
            rec(v + 1, chosen + [sub])

    rec(1, [])
    return total


def _sub_ranks(real: _Realisation, xs: list[FqSubspace]) -> dict[tuple[int, int], int]:
    out = {}
    for a in range(1, real.n + 1):
        for b in range(a, real.n + 1):
            out[a, b] = rank(real.push_many(a, b, xs[a - 1].basis), xs[a - 1].p) if xs[a - 1].basis else 0
    return out


def _quot_ranks(real: _Realisation, xs: list[FqSubspace]) -> dict[tuple[int, int], int]:
    out = {}
    for a in range(1, real.n + 1):
        whole = [_unit(k, real.dims[a - 1]) for k in range(real.dims[a - 1])]
        for b in range(a, real.n + 1):
            xb = xs[b - 1]
            image = real.push_many(a, b, whole)
            out[a, b] = rank(list(image) + list(xb.basis), xb.p) - xb.dim if real.dims[b - 1] else 0
    return out
