"""The k-fold tensor power of H*(SP^n(N_g); Z/2) and its zero-divisors.

A basis tensor monomial b_1 (x) ... (x) b_k is packed into one integer: slot
r (1-based) holds the position of b_r in ``enumerate_basis`` order, in a
fixed-width bit field starting at bit (r-1)*width.  Tensor classes are
frozensets of these keys.  Slot-wise products go through per-ring lookup
tables, so multiplying classes never touches Monomial objects.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from .combinatorics import submasks
from .ring_core import (
    CohClass,
    Monomial,
    RingContext,
    capacity,
    enumerate_basis,
    format_monomial,
    generator,
    monomial_mul,
)

__all__ = [
    "TensorContext",
    "TensorClass",
    "unit",
    "zero_divisor",
    "tensor_mul",
    "mul_zd_power",
    "zd_power",
    "zd_product",
    "factor_order",
    "tensor_capacity",
    "contains",
    "total_multiplication",
    "bad_zero_divisor_product",
    "format_tensor_monomial",
    "format_tensor_class",
]

TensorClass = FrozenSet[int]


class _RingTables:
    """Lookup tables for one ring, indexed by basis position."""

    def __init__(self, ring: RingContext):
        self.basis: Tuple[Monomial, ...] = tuple(enumerate_basis(ring))
        self.index: Dict[Monomial, int] = {m: j for j, m in enumerate(self.basis)}
        size = len(self.basis)
        self.mul = [[-1] * size for _ in range(size)]
        for s, u in enumerate(self.basis):
            for t, v in enumerate(self.basis):
                w = monomial_mul(u, v, ring)
                if w is not None:
                    self.mul[s][t] = self.index[w]
        self.capacity = [capacity(m, ring) for m in self.basis]
        self.degree = [m.degree for m in self.basis]
        # gen_pow[i][e][s]: position of basis[s] * x_i^e, -1 when zero
        top = 2 * ring.n
        self.gen_pow: List[Optional[List[List[int]]]] = [None] * (ring.g + 1)
        for i in range(1, ring.g + 1):
            x = self.index[generator(i, ring)]
            rows = [list(range(size))]
            for _ in range(top):
                prev = rows[-1]
                rows.append([self.mul[p][x] if p >= 0 else -1 for p in prev])
            self.gen_pow[i] = rows


_TABLES: Dict[Tuple[int, int], _RingTables] = {}
_TABLES_LOCK = threading.Lock()


def _tables(ring: RingContext) -> _RingTables:
    key = (ring.n, ring.g)
    tab = _TABLES.get(key)
    if tab is None:
        tab = _RingTables(ring)
        with _TABLES_LOCK:
            tab = _TABLES.setdefault(key, tab)
    return tab


@dataclass(frozen=True)
class TensorContext:
    ring: RingContext
    k: int

    def __post_init__(self):
        if self.k < 2:
            raise ValueError(f"need k >= 2 tensor factors, got {self.k}")

    @property
    def n(self) -> int:
        return self.ring.n

    @property
    def g(self) -> int:
        return self.ring.g

    @property
    def tables(self) -> _RingTables:
        return _tables(self.ring)

    @property
    def width(self) -> int:
        return max(1, (len(self.tables.basis) - 1).bit_length())

    def pack(self, factors: Sequence[Monomial]) -> int:
        if len(factors) != self.k:
            raise ValueError(f"expected {self.k} factors, got {len(factors)}")
        index = self.tables.index
        key = 0
        for r, m in enumerate(factors):
            try:
                key |= index[m] << (r * self.width)
            except KeyError:
                raise ValueError(f"{m} is not a basis monomial of {self.ring}") from None
        return key

    def slots(self, key: int) -> List[int]:
        w = self.width
        mask = (1 << w) - 1
        return [(key >> (r * w)) & mask for r in range(self.k)]

    def unpack(self, key: int) -> Tuple[Monomial, ...]:
        basis = self.tables.basis
        return tuple(basis[s] for s in self.slots(key))

    def degree(self, key: int) -> int:
        deg = self.tables.degree
        return sum(deg[s] for s in self.slots(key))

    def single(self, slot: int, m: Monomial) -> int:
        """Key of 1 (x) ... (x) m (x) ... (x) 1 with m in the given 1-based slot."""
        factors = [Monomial()] * self.k
        factors[slot - 1] = m
        return self.pack(factors)


def unit(tctx: TensorContext) -> TensorClass:
    # the empty monomial sits at basis position 0, so the unit key is 0
    return frozenset([0])


def _check_zd(r: int, i: int, tctx: TensorContext) -> None:
    if not 2 <= r <= tctx.k:
        raise ValueError(f"slot {r} outside 2..{tctx.k}")
    if not 1 <= i <= tctx.g:
        raise ValueError(f"generator {i} outside 1..{tctx.g}")


def zero_divisor(r: int, i: int, tctx: TensorContext) -> TensorClass:
    """x_{1,i} + x_{r,i}."""
    _check_zd(r, i, tctx)
    x = generator(i, tctx.ring)
    return frozenset([tctx.single(1, x), tctx.single(r, x)])


def tensor_mul(p: Iterable[int], q: Iterable[int], tctx: TensorContext) -> TensorClass:
    mul = tctx.tables.mul
    w = tctx.width
    qs = [(tctx.slots(v)) for v in q]
    out = set()
    for u in p:
        us = tctx.slots(u)
        for vs in qs:
            key = 0
            for r in range(tctx.k):
                s = mul[us[r]][vs[r]]
                if s < 0:
                    break
                key |= s << (r * w)
            else:
                if key in out:
                    out.remove(key)
                else:
                    out.add(key)
    return frozenset(out)


def mul_zd_power(p: Iterable[int], r: int, i: int, m: int, tctx: TensorContext) -> TensorClass:
    """p * (x_{1,i} + x_{r,i})^m without materializing the power.

    Only the summands x_{1,i}^j x_{r,i}^{m-j} with C(m, j) odd survive mod 2.
    """
    _check_zd(r, i, tctx)
    if m == 0:
        return frozenset(p)
    if m > 4 * tctx.n:
        # one of j, m - j exceeds 2n in every summand
        return frozenset()
    rows = tctx.tables.gen_pow[i]
    top = 2 * tctx.n
    pairs = [(rows[j], rows[m - j]) for j in submasks(m) if j <= top and m - j <= top]
    w = tctx.width
    mask = (1 << w) - 1
    shift = (r - 1) * w
    out = set()
    for key in p:
        s1 = key & mask
        sr = (key >> shift) & mask
        base = key & ~mask & ~(mask << shift)
        for row1, rowr in pairs:
            a = row1[s1]
            if a < 0:
                continue
            b = rowr[sr]
            if b < 0:
                continue
            new = base | a | (b << shift)
            if new in out:
                out.remove(new)
            else:
                out.add(new)
    return frozenset(out)


_POWERS: Dict[Tuple[int, int, int, int, int, int], TensorClass] = {}
_POWERS_LOCK = threading.Lock()


def zd_power(r: int, i: int, m: int, tctx: TensorContext) -> TensorClass:
    """(x_{1,i} + x_{r,i})^m, memoized per context."""
    _check_zd(r, i, tctx)
    if m < 0:
        raise ValueError("exponent must be non-negative")
    key = (tctx.n, tctx.g, tctx.k, r, i, m)
    hit = _POWERS.get(key)
    if hit is None:
        hit = mul_zd_power(unit(tctx), r, i, m, tctx)
        with _POWERS_LOCK:
            hit = _POWERS.setdefault(key, hit)
    return hit


def factor_order(expts: Mapping[Tuple[int, int], int]) -> List[Tuple[int, int]]:
    """Generator-1 factors first, then ascending i; r ascending within each i."""
    return sorted((ri for ri, a in expts.items() if a), key=lambda ri: (ri[1], ri[0]))


def zd_product(expts: Mapping[Tuple[int, int], int], tctx: TensorContext) -> TensorClass:
    """prod over (r, i) of (x_{1,i} + x_{r,i})^{a_{r,i}}, stopping early at zero."""
    for (r, i), a in expts.items():
        _check_zd(r, i, tctx)
        if a < 0:
            raise ValueError(f"negative exponent {a} at {(r, i)}")
    acc = unit(tctx)
    for r, i in factor_order(expts):
        acc = mul_zd_power(acc, r, i, expts[(r, i)], tctx)
        if not acc:
            break
    return acc


def tensor_capacity(key: int, tctx: TensorContext) -> int:
    cap = tctx.tables.capacity
    return sum(cap[s] for s in tctx.slots(key))


def contains(tc: Iterable[int], key: int) -> bool:
    return key in tc


def total_multiplication(tc: Iterable[int], tctx: TensorContext) -> CohClass:
    """Image under b_1 (x) ... (x) b_k -> b_1 b_2 ... b_k."""
    tab = tctx.tables
    out = set()
    for key in tc:
        acc = 0
        for s in tctx.slots(key):
            acc = tab.mul[acc][s]
            if acc < 0:
                break
        else:
            out ^= {tab.basis[acc]}
    return frozenset(out)


def bad_zero_divisor_product(n: int, g: int, j: int) -> TensorClass:
    """prod_{i=1}^{j} (x_{1,i} + x_{2,i})^2 in the square of H*(SP^n(N_g))."""
    if not 1 <= j <= g:
        raise ValueError(f"need 1 <= j <= g, got j={j}, g={g}")
    tctx = TensorContext(RingContext(n, g), 2)
    return zd_product({(2, i): 2 for i in range(1, j + 1)}, tctx)


def format_tensor_monomial(key: int, tctx: TensorContext) -> str:
    return " (x) ".join(format_monomial(m) for m in tctx.unpack(key))


def format_tensor_class(tc: Iterable[int], tctx: TensorContext) -> str:
    keys = sorted(tc, key=lambda key: tctx.slots(key))
    if not keys:
        return "0"
    return " + ".join(format_tensor_monomial(key, tctx) for key in keys)
