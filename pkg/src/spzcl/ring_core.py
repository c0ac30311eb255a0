"""Mod 2 cohomology ring of the symmetric product SP^n(N_g).

The ring is generated by degree-one classes x_1, ..., x_g and y = x_1^2,
with x_i^2 = y for every i and x_{i_1} ... x_{i_r} y^s = 0 as soon as
r + s > n (distinct indices).  Every nonzero monomial therefore collapses
to a basis element

    x_1^a * prod_{i in idx} x_i,      idx a subset of {2, ..., g},

subject to floor((a + 1) / 2) + |idx| <= n.  A Monomial stores exactly
that pair, with ``idx`` as a bit set (bit i - 2 stands for x_i).  The zero
class is never a Monomial; operations return ``None`` for it.

Classes are frozensets of Monomials: coefficients are in Z/2, so a term is
either present or absent and addition is symmetric difference.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import FrozenSet, Iterable, Iterator, List, Optional, Sequence

__all__ = [
    "RingContext",
    "Monomial",
    "CohClass",
    "MINUS_INFINITY",
    "normalize",
    "monomial_mul",
    "class_add",
    "class_mul",
    "capacity",
    "enumerate_basis",
    "is_homogeneous",
    "generator",
    "format_monomial",
    "format_class",
]


@dataclass(frozen=True)
class RingContext:
    """The pair (n, g) fixing H*(SP^n(N_g); Z/2)."""

    n: int
    g: int

    def __post_init__(self):
        if not isinstance(self.n, int) or not isinstance(self.g, int):
            raise TypeError("n and g must be integers")
        if self.n < 1 or self.g < 1:
            raise ValueError(f"need n >= 1 and g >= 1, got n={self.n}, g={self.g}")

    @property
    def dim(self) -> int:
        return 2 * self.n


@dataclass(frozen=True, order=True)
class Monomial:
    """Basis monomial x_1^a * prod_{i in idx} x_i (idx bit i-2 <-> x_i)."""

    a: int = 0
    idx: int = 0

    @property
    def degree(self) -> int:
        return self.a + bin(self.idx).count("1")

    def indices(self) -> List[int]:
        """The generator indices i >= 2 occurring in the monomial."""
        out = []
        bits, i = self.idx, 2
        while bits:
            if bits & 1:
                out.append(i)
            bits >>= 1
            i += 1
        return out

    def sort_key(self):
        return (self.a, self.idx)


CohClass = FrozenSet[Monomial]


@functools.total_ordering
class _MinusInfinity:
    """Capacity of the zero class; compares below every integer."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return other is not self

    def __hash__(self):
        return hash("-inf")

    def __repr__(self):
        return "-inf"


MINUS_INFINITY = _MinusInfinity()


def _load(a: int, idx: int) -> int:
    return (a + 1) // 2 + bin(idx).count("1")


def _make(a: int, idx: int, ctx: RingContext) -> Optional[Monomial]:
    if _load(a, idx) > ctx.n:
        return None
    return Monomial(a, idx)


def normalize(raw: Sequence[int], ctx: RingContext) -> Optional[Monomial]:
    """Reduce x_1^{e_1} ... x_g^{e_g} to normal form, or ``None`` if it is zero."""
    if len(raw) != ctx.g:
        raise ValueError(f"expected {ctx.g} exponents, got {len(raw)}")
    if any(e < 0 for e in raw):
        raise ValueError("exponents must be non-negative")
    a = raw[0]
    idx = 0
    for pos, e in enumerate(raw[1:]):
        a += 2 * (e // 2)
        if e % 2:
            idx |= 1 << pos
    return _make(a, idx, ctx)


def _check(m: Monomial, ctx: RingContext) -> None:
    if m.idx >> (ctx.g - 1):
        raise ValueError(f"{m} uses a generator beyond x_{ctx.g}")
    if _load(m.a, m.idx) > ctx.n:
        raise ValueError(f"{m} is not in normal form for n={ctx.n}")


def monomial_mul(u: Monomial, v: Monomial, ctx: RingContext) -> Optional[Monomial]:
    """Product of two basis monomials; shared x_i (i >= 2) pair up into y."""
    _check(u, ctx)
    _check(v, ctx)
    shared = u.idx & v.idx
    a = u.a + v.a + 2 * bin(shared).count("1")
    return _make(a, u.idx ^ v.idx, ctx)


def class_add(p: Iterable[Monomial], q: Iterable[Monomial]) -> CohClass:
    return frozenset(p) ^ frozenset(q)


def class_mul(p: Iterable[Monomial], q: Iterable[Monomial], ctx: RingContext) -> CohClass:
    out = set()
    q = list(q)
    for u in p:
        for v in q:
            w = monomial_mul(u, v, ctx)
            if w is not None:
                out ^= {w}
    return frozenset(out)


def capacity(m: Optional[Monomial], ctx: RingContext):
    """Number of distinct fresh degree-one generators m can still absorb.

    Returns ``MINUS_INFINITY`` for the zero class.
    """
    if m is None:
        return MINUS_INFINITY
    return ctx.n - _load(m.a, m.idx)


def _basis(n: int, g: int) -> tuple:
    out = []
    for a in range(2 * n + 1):
        for idx in range(1 << (g - 1)):
            if _load(a, idx) <= n:
                out.append(Monomial(a, idx))
    return tuple(out)


_basis_cached = functools.lru_cache(maxsize=None)(_basis)


def enumerate_basis(ctx: RingContext, degree: Optional[int] = None) -> List[Monomial]:
    """All basis monomials, ascending in a, then in idx as a binary number."""
    basis = _basis_cached(ctx.n, ctx.g)
    if degree is None:
        return list(basis)
    return [m for m in basis if m.degree == degree]


def iter_class_degrees(p: Iterable[Monomial]) -> Iterator[int]:
    return (m.degree for m in p)


def is_homogeneous(p: Iterable[Monomial]) -> bool:
    return len(set(iter_class_degrees(p))) <= 1


def generator(i: int, ctx: RingContext) -> Monomial:
    """The degree-one class x_i."""
    if not 1 <= i <= ctx.g:
        raise ValueError(f"generator index {i} outside 1..{ctx.g}")
    if i == 1:
        return Monomial(1, 0)
    return Monomial(0, 1 << (i - 2))


def format_monomial(m: Optional[Monomial]) -> str:
    if m is None:
        return "0"
    parts = []
    if m.a == 1:
        parts.append("x1")
    elif m.a > 1:
        parts.append(f"x1^{m.a}")
    parts.extend(f"x{i}" for i in m.indices())
    return "*".join(parts) if parts else "1"


def format_class(p: Iterable[Monomial]) -> str:
    terms = sorted(p, key=Monomial.sort_key)
    if not terms:
        return "0"
    return " + ".join(format_monomial(m) for m in terms)
