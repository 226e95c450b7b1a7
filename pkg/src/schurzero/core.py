"""Compositions, orbit matrices, line pairs and segments of the linear quiver.

Matrices are indexed from 0 internally; segments, line pairs and the
generator index ``i`` follow the 1-based vertex numbering of the quiver
``1 -> 2 -> ... -> n``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

# ordered tuple of n non-negative integers (a flag type)
Composition = tuple[int, ...]


def compositions(n: int, r: int) -> list[Composition]:
    """All compositions of ``r`` into ``n`` parts, in lexicographic order."""
    if n < 1:
        raise ValueError(f"number of parts must be positive, got {n}")
    if r < 0:
        raise ValueError(f"total must be non-negative, got {r}")

    def rec(k: int, rest: int) -> Iterator[Composition]:
        if k == 1:
            yield (rest,)
            return
        for first in range(rest + 1):
            for tail in rec(k - 1, rest - first):
                yield (first,) + tail

    return list(rec(n, r))


def check_composition(d: Sequence[int], n: int | None = None, r: int | None = None) -> Composition:
    d = tuple(int(x) for x in d)
    if not d:
        raise ValueError("a composition needs at least one part")
    if any(x < 0 for x in d):
        raise ValueError(f"negative part in {d}")
    if n is not None and len(d) != n:
        raise ValueError(f"{d} does not have {n} parts")
    if r is not None and sum(d) != r:
        raise ValueError(f"{d} does not sum to {r}")
    return d


def delta(i: int, n: int) -> Composition:
    """Unit composition with a single 1 at (1-based) position ``i``."""
    if not 1 <= i <= n:
        raise ValueError(f"index {i} out of range 1..{n}")
    return tuple(1 if k == i - 1 else 0 for k in range(n))


def shift(d: Composition, plus: Iterable[int] = (), minus: Iterable[int] = ()) -> Composition | None:
    """``d + sum(alpha_i for plus) - sum(alpha_j for minus)``, or None if a part goes negative.

    Indices are 1-based; index ``n + 1`` is read as the zero root.
    """
    out = list(d)
    n = len(d)
    for i in plus:
        if i <= n:
            out[i - 1] += 1
    for j in minus:
        if j <= n:
            out[j - 1] -= 1
    if any(x < 0 for x in out):
        return None
    return tuple(out)


@dataclass(frozen=True, order=True)
class OrbitMatrix:
    """Non-negative integer matrix labelling an orbit of pairs of flags.

    Row sums give the type of the left flag, column sums the type of the right flag.
    """

    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.entries)
        n = len(rows)
        if n == 0 or any(len(row) != n for row in rows):
            raise ValueError(f"orbit matrix must be square and non-empty: {self.entries!r}")
        if any(x < 0 for row in rows for x in row):
            raise ValueError(f"negative entry in {rows}")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_text(cls, text: str) -> OrbitMatrix:
        """Parse the ``"a,b;c,d"`` form."""
        text = text.strip()
        if not text:
            raise ValueError("empty matrix text")
        try:
            rows = [tuple(int(x) for x in row.split(",")) for row in text.split(";")]
        except ValueError as exc:
            raise ValueError(f"cannot parse matrix {text!r}") from exc
        return cls(tuple(rows))

    @classmethod
    def diagonal(cls, d: Sequence[int]) -> OrbitMatrix:
        n = len(d)
        return cls(tuple(tuple(d[i] if i == j else 0 for j in range(n)) for i in range(n)))

    def to_text(self) -> str:
        return ";".join(",".join(str(x) for x in row) for row in self.entries)

    def __str__(self):
        return self.to_text()

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    @property
    def n(self) -> int:
        return len(self.entries)

    @cached_property
    def r(self) -> int:
        return sum(map(sum, self.entries))

    @cached_property
    def row_type(self) -> Composition:
        return tuple(sum(row) for row in self.entries)

    @cached_property
    def col_type(self) -> Composition:
        return tuple(sum(col) for col in zip(*self.entries))

    def is_diagonal(self) -> bool:
        return all(x == 0 for i, row in enumerate(self.entries) for j, x in enumerate(row) if i != j)

    def is_upper(self) -> bool:
        return all(x == 0 for i, row in enumerate(self.entries) for j, x in enumerate(row) if i > j)

    def bumped(self, changes: dict[tuple[int, int], int]) -> OrbitMatrix:
        """Copy with ``changes[(i, j)]`` added to entry (i, j) (0-based)."""
        rows = [list(row) for row in self.entries]
        for (i, j), dv in changes.items():
            rows[i][j] += dv
        return OrbitMatrix(tuple(map(tuple, rows)))


def orbit_matrices(n: int, r: int) -> list[OrbitMatrix]:
    """All n x n orbit matrices with entry sum r, sorted."""
    out = []
    for flat in compositions(n * n, r):
        out.append(OrbitMatrix(tuple(flat[i * n:(i + 1) * n] for i in range(n))))
    return sorted(out)


def matrices_with_types(d: Composition, e: Composition) -> list[OrbitMatrix]:
    """All orbit matrices with row sums ``d`` and column sums ``e``, sorted."""
    if len(d) != len(e) or sum(d) != sum(e):
        return []
    n = len(d)

    def rows_from(k: int, remaining: tuple[int, ...]) -> Iterator[list[tuple[int, ...]]]:
        if k == n:
            if not any(remaining):
                yield []
            return
        for row in _bounded_rows(d[k], remaining):
            rest = tuple(c - x for c, x in zip(remaining, row))
            for tail in rows_from(k + 1, rest):
                yield [row] + tail

    return sorted(OrbitMatrix(tuple(rows)) for rows in rows_from(0, tuple(e)))


def _bounded_rows(total: int, caps: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    if len(caps) == 1:
        if total <= caps[0]:
            yield (total,)
        return
    for x in range(min(total, caps[0]) + 1):
        for tail in _bounded_rows(total - x, caps[1:]):
            yield (x,) + tail


@dataclass(frozen=True)
class LinePairs:
    """Multiset of r pairs (i, j): a basis line entering the left flag at step i
    and the right flag at step j. Canonically sorted by (j, i)."""

    n: int
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        for i, j in self.pairs:
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise ValueError(f"pair {(i, j)} out of range for n={self.n}")
        object.__setattr__(self, "pairs", tuple(sorted(self.pairs, key=lambda ij: (ij[1], ij[0]))))

    @classmethod
    def from_matrix(cls, A: OrbitMatrix) -> LinePairs:
        pairs = []
        for i in range(A.n):
            for j in range(A.n):
                pairs.extend([(i + 1, j + 1)] * A[i, j])
        return cls(A.n, tuple(pairs))

    def to_matrix(self) -> OrbitMatrix:
        rows = [[0] * self.n for _ in range(self.n)]
        for i, j in self.pairs:
            rows[i - 1][j - 1] += 1
        return OrbitMatrix(tuple(map(tuple, rows)))

    @property
    def r(self) -> int:
        return len(self.pairs)

    @property
    def left_entries(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.pairs)

    @property
    def right_entries(self) -> tuple[int, ...]:
        return tuple(j for _, j in self.pairs)


def pairs_from_matrix(A: OrbitMatrix) -> LinePairs:
    return LinePairs.from_matrix(A)


def matrix_from_pairs(lp: LinePairs) -> OrbitMatrix:
    return lp.to_matrix()


@dataclass(frozen=True)
class Segment:
    """Interval [lo, hi] of vertices: the indecomposable M_{lo,hi} of the linear quiver."""

    lo: int
    hi: int

    def __post_init__(self):
        if not 1 <= self.lo <= self.hi:
            raise ValueError(f"invalid segment [{self.lo},{self.hi}]")

    def __repr__(self):
        return f"[{self.lo},{self.hi}]"

    def sort_key(self) -> tuple[int, int]:
        return (self.hi, self.lo)

    def __len__(self):
        return self.hi - self.lo + 1


def segment_leq(s: Segment, t: Segment) -> bool:
    """Total order on segments: by right end, then by left end."""
    return s.hi < t.hi or (s.hi == t.hi and s.lo <= t.lo)


def sorted_segments(segs: Iterable[Segment]) -> tuple[Segment, ...]:
    return tuple(sorted(segs, key=Segment.sort_key))


def upper_segments(A: OrbitMatrix) -> tuple[Segment, ...]:
    """Summands of f/(f cap f'): entry (i, j) with i < j gives A_ij copies of [i, j-1]."""
    segs = []
    for i in range(A.n):
        for j in range(i + 1, A.n):
            segs.extend([Segment(i + 1, j)] * A[i, j])
    return sorted_segments(segs)


def lower_segments(A: OrbitMatrix) -> tuple[Segment, ...]:
    """Summands of f'/(f cap f'): entry (i, j) with i > j gives A_ij copies of [j, i-1]."""
    segs = []
    for i in range(A.n):
        for j in range(i):
            segs.extend([Segment(j + 1, i)] * A[i, j])
    return sorted_segments(segs)


def rank_matrix(A: OrbitMatrix) -> tuple[tuple[int, ...], ...]:
    """Two-dimensional prefix sums r_ij = sum of A_ab over a <= i, b <= j."""
    n = A.n
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        acc = 0
        for j in range(n):
            acc += A[i, j]
            out[i][j] = acc + (out[i - 1][j] if i else 0)
    return tuple(map(tuple, out))


def join_type(A: OrbitMatrix) -> Composition:
    """Type of f1 + f2: a line pair (i, j) enters the sum at step min(i, j)."""
    c = [0] * A.n
    for i in range(A.n):
        for j in range(A.n):
            c[min(i, j)] += A[i, j]
    return tuple(c)


def meet_type(A: OrbitMatrix) -> Composition:
    """Type of f1 cap f2: a line pair (i, j) enters the intersection at step max(i, j)."""
    c = [0] * A.n
    for i in range(A.n):
        for j in range(A.n):
            c[max(i, j)] += A[i, j]
    return tuple(c)
