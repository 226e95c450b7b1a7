"""The 0-Hecke algebra as the complete-flag block k_d G(n, n) k_d.

Elements are bare permutations; sigma corresponds to the permutation orbit
matrix with a 1 in row sigma(l), column l. The k_d factor stays implicit.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from itertools import permutations
from typing import Callable, Sequence

from .core import OrbitMatrix, check_composition
from .zeroschur import deg_leq, nested_idempotent, star


@dataclass(frozen=True, order=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        imgs = tuple(int(x) for x in self.images)
        if sorted(imgs) != list(range(1, len(imgs) + 1)):
            raise ValueError(f"{imgs} is not a permutation of 1..{len(imgs)}")
        object.__setattr__(self, "images", imgs)

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, l: int) -> int:
        return self.images[l - 1]

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def transposition(cls, i: int, n: int) -> Permutation:
        """The simple transposition (i, i+1)."""
        if not 1 <= i < n:
            raise ValueError(f"no simple transposition s{i} in S_{n}")
        imgs = list(range(1, n + 1))
        imgs[i - 1], imgs[i] = imgs[i], imgs[i - 1]
        return cls(tuple(imgs))

    @classmethod
    def cycle(cls, entries: Sequence[int], n: int) -> Permutation:
        """The cycle a1 -> a2 -> ... -> ak -> a1."""
        imgs = list(range(1, n + 1))
        for a, b in zip(entries, list(entries[1:]) + [entries[0]]):
            imgs[a - 1] = b
        return cls(tuple(imgs))

    @classmethod
    def longest(cls, n: int) -> Permutation:
        return cls(tuple(range(n, 0, -1)))

    def compose(self, other: Permutation) -> Permutation:
        """self after other."""
        if self.n != other.n:
            raise ValueError("permutations of different sizes")
        return Permutation(tuple(self(other(l)) for l in range(1, self.n + 1)))

    __matmul__ = compose

    def inverse(self) -> Permutation:
        inv = [0] * self.n
        for l, x in enumerate(self.images, start=1):
            inv[x - 1] = l
        return Permutation(tuple(inv))

    def length(self) -> int:
        imgs = self.images
        return sum(1 for a in range(self.n) for b in range(a + 1, self.n) if imgs[a] > imgs[b])

    def to_matrix(self) -> OrbitMatrix:
        rows = [[0] * self.n for _ in range(self.n)]
        for l, x in enumerate(self.images):
            rows[x - 1][l] = 1
        return OrbitMatrix(tuple(map(tuple, rows)))

    @classmethod
    def from_matrix(cls, A: OrbitMatrix) -> Permutation:
        if A.row_type != (1,) * A.n or A.col_type != (1,) * A.n:
            raise ValueError(f"{A} is not a permutation matrix")
        imgs = [0] * A.n
        for i in range(A.n):
            for j in range(A.n):
                if A[i, j]:
                    imgs[j] = i + 1
        return cls(tuple(imgs))

    def cycles(self) -> list[tuple[int, ...]]:
        seen, out = set(), []
        for start in range(1, self.n + 1):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            x = self(start)
            while x != start:
                cyc.append(x)
                seen.add(x)
                x = self(x)
            out.append(tuple(cyc))
        return out

    def __str__(self):
        return "".join("(" + " ".join(map(str, c)) + ")" for c in self.cycles())

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> Permutation:
        """Cycle notation "(1 2)(3)", a word "s1 s2 s1" (group product), or one-line "[2,1,3]"."""
        text = text.strip()
        if text.startswith("["):
            return cls(tuple(int(x) for x in text.strip("[]").replace(",", " ").split()))
        if text.startswith("(") or text == "":
            cycs = re.findall(r"\(([^()]*)\)", text)
            if re.sub(r"\(([^()]*)\)", "", text).strip():
                raise ValueError(f"cannot parse cycle notation {text!r}")
            parsed = [tuple(int(x) for x in c.replace(",", " ").split()) for c in cycs]
            size = max([n or 0] + [x for c in parsed for x in c])
            if size == 0:
                raise ValueError("cannot infer n from an empty permutation")
            out = cls.identity(size)
            for c in parsed:
                if len(set(c)) != len(c):
                    raise ValueError(f"repeated entry in cycle {c}")
                if c:
                    out = out @ cls.cycle(c, size)
            return out
        letters = text.replace(",", " ").split()
        idx = []
        for tok in letters:
            m = re.fullmatch(r"s(\d+)", tok)
            if not m:
                raise ValueError(f"cannot parse word letter {tok!r}")
            idx.append(int(m.group(1)))
        size = n if n is not None else max(idx) + 1
        out = cls.identity(size)
        for i in idx:
            out = out @ cls.transposition(i, size)
        return out


def all_permutations(n: int) -> list[Permutation]:
    return [Permutation(p) for p in permutations(range(1, n + 1))]


def hecke_act(i: int, sigma: Permutation) -> Permutation:
    """t_i * sigma: the row swap (i, i+1)sigma when it degenerates from sigma, else sigma."""
    swapped = Permutation.transposition(i, sigma.n) @ sigma
    if deg_leq(swapped.to_matrix(), sigma.to_matrix()):
        return swapped
    return sigma


def hecke_mult(x: Permutation, y: Permutation) -> Permutation:
    """x * y in H_0(n), through the star product of permutation orbits."""
    if x.n != y.n:
        raise ValueError("permutations of different sizes")
    prod = star(x.to_matrix(), y.to_matrix())
    if prod is None:
        raise AssertionError(f"product of {x} and {y} vanished")
    return Permutation.from_matrix(prod)


def t_gen(i: int, n: int) -> Permutation:
    return Permutation.transposition(i, n)


def hecke_product(factors: Sequence[Permutation], n: int,
                  mult: Callable[[Permutation, Permutation], Permutation] = hecke_mult) -> Permutation:
    out = Permutation.identity(n)
    for x in reversed(factors):
        out = mult(x, out)
    return out


def _run(i: int, j: int, n: int) -> list[Permutation]:
    """t_i * t_{i+1} * ... * t_{j-1} as a factor list (empty when j <= i)."""
    return [t_gen(k, n) for k in range(i, j)]


def t_sigma_stages(sigma: Permutation) -> list[Permutation]:
    """The stage elements t^{sigma,1}, ..., t^{sigma,n}."""
    n = sigma.n
    inv = sigma.inverse()
    stages = []
    tau = Permutation.identity(n)
    for i in range(1, n + 1):
        m = tau(inv(i))
        stage = hecke_product(_run(i, m, n), n)
        stages.append(stage)
        tau = hecke_mult(stage, tau)
    return stages


def t_sigma(sigma: Permutation) -> Permutation:
    """t^sigma = t^{sigma,n} * ... * t^{sigma,1}."""
    return hecke_product(list(reversed(t_sigma_stages(sigma))), sigma.n)


def interval_idempotent(i: int, j: int, n: int) -> Permutation:
    """t^[i,j] = t^[i+1,j] * t_i * ... * t_{j-1}, with t^[i,i] the identity."""
    if not 1 <= i <= j <= n:
        raise ValueError(f"invalid interval [{i},{j}] for n={n}")
    out = Permutation.identity(n)
    for start in range(j - 1, i - 1, -1):
        out = hecke_mult(out, hecke_product(_run(start, j, n), n))
    return out


def t_nbar(nbar: Sequence[int]) -> Permutation:
    nbar = check_composition(nbar)
    if any(x < 1 for x in nbar):
        raise ValueError(f"{nbar} has a zero part")
    n = sum(nbar)
    out = Permutation.identity(n)
    start = 0
    for size in nbar:
        out = hecke_mult(out, interval_idempotent(start + 1, start + size, n))
        start += size
    return out


def nbar_compositions(n: int) -> list[tuple[int, ...]]:
    """All 2^(n-1) compositions of n into positive parts."""
    out = []
    for mask in range(1 << (n - 1)):
        parts, size = [], 1
        for k in range(n - 1):
            if mask >> k & 1:
                parts.append(size)
                size = 1
            else:
                size += 1
        parts.append(size)
        out.append(tuple(parts))
    return out


def nbar_matches_nested(nbar: Sequence[int]) -> bool:
    n = sum(nbar)
    return t_nbar(nbar).to_matrix() == nested_idempotent((1,) * n, tuple(nbar))


def reduced_word(x: Permutation, rng: random.Random | None = None) -> list[int]:
    """Indices a_1..a_k with x = s_{a_1} ... s_{a_k}, k = length(x).

    Peels right descents; the lowest one by default (bubble sort), a random one when ``rng`` is given.
    """
    word: list[int] = []
    cur = x
    while True:
        descents = [i for i in range(1, cur.n) if cur(i) > cur(i + 1)]
        if not descents:
            break
        i = rng.choice(descents) if rng is not None else descents[0]
        word.append(i)
        cur = cur @ Permutation.transposition(i, cur.n)
    word.reverse()
    return word


def demazure_oracle(x: Permutation, y: Permutation, word: Sequence[int] | None = None) -> Permutation:
    """x * y by folding hecke_act along a reduced word of x onto y."""
    if x.n != y.n:
        raise ValueError("permutations of different sizes")
    letters = reduced_word(x) if word is None else word
    out = y
    for i in reversed(letters):
        out = hecke_act(i, out)
    return out


@dataclass
class HeckeReport:
    n: int
    checked: int = 0
    failures: list[str] | None = None

    def __post_init__(self):
        if self.failures is None:
            self.failures = []

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_hecke_relations(n: int, mult: Callable[[Permutation, Permutation], Permutation] = hecke_mult) -> HeckeReport:
    """Idempotence, braid and far commutation of the t_i (equivalently the 0-Hecke relations for -t_i)."""
    if n > 5:
        raise ValueError("relation sweep limited to n <= 5")
    report = HeckeReport(n)
    t = {i: t_gen(i, n) for i in range(1, n)}

    def check(label: str, lhs: list[Permutation], rhs: list[Permutation]):
        report.checked += 1
        a, b = hecke_product(lhs, n, mult), hecke_product(rhs, n, mult)
        if a != b:
            report.failures.append(f"{label}: {a} != {b}")

    for i in range(1, n):
        check(f"t{i}^2 = t{i}", [t[i], t[i]], [t[i]])
        if i + 1 < n:
            check(f"braid {i},{i + 1}", [t[i], t[i + 1], t[i]], [t[i + 1], t[i], t[i + 1]])
        for j in range(i + 2, n):
            check(f"t{i} t{j} = t{j} t{i}", [t[i], t[j]], [t[j], t[i]])
    return report
