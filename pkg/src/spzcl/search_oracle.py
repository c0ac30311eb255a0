"""Brute-force zero-divisor cup lengths, computed from the ring itself.

zcl_k(SP^n(N_g)) is the largest total exponent sum a_{r,i} for which

    prod_{2 <= r <= k, 1 <= i <= g} (x_{1,i} + x_{r,i})^{a_{r,i}}

is nonzero in the k-fold tensor power.  The search walks total degree D
downward from 2nk and, at each D, expands candidate exponent tuples in
lexicographic order; the first nonzero product is the answer and its
expansion supplies a witness.

Restricted mode only visits reduced tuples: generator-1 exponents
non-increasing in r, all other exponents in {0, 1}, and the r = 2 row
non-increasing in i.  Unrestricted mode visits every tuple with each
exponent at most 4n - 1 and exists to cross-check the reduction.

Two pruning rules are used, both certificates of vanishing:

* a single pair exponent of 4n or more kills the factor outright, since
  C(4n, 2n) is even and every other summand overflows a slot;
* capacity: once the generator-1 part is expanded, a basis term b dies
  against the remaining columns whenever c(b) is smaller than the sum over
  those columns of floor((1 + column sum) / 2).
"""

from __future__ import annotations

import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .ring_core import Monomial, RingContext
from .tensor_ring import (
    TensorClass,
    TensorContext,
    format_tensor_class,
    format_tensor_monomial,
    mul_zd_power,
    unit,
    zd_product,
)

log = logging.getLogger(__name__)

__all__ = [
    "DEFAULT_BUDGET",
    "ExponentTuple",
    "ZclWitness",
    "SearchResult",
    "MaxEllResult",
    "GridCell",
    "GridReport",
    "search_zcl",
    "max_ell",
    "verify_grid",
    "reduced_tuples",
    "unrestricted_tuples",
    "SoundnessCell",
    "reduction_soundness",
    "BudgetExceeded",
]

DEFAULT_BUDGET = 50_000_000


class BudgetExceeded(Exception):
    pass


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def charge(self, terms: int) -> None:
        self.used += terms
        if self.used > self.limit:
            raise BudgetExceeded


@dataclass(frozen=True)
class ExponentTuple:
    """Exponents a_{r,i}: ``a1[r-2]`` is a_{r,1}, ``bits[r-2][i-2]`` is a_{r,i}.

    In reduced form every ``bits`` entry is 0 or 1; the unrestricted search
    reuses the same shape with arbitrary entries.
    """

    a1: Tuple[int, ...]
    bits: Tuple[Tuple[int, ...], ...]

    @property
    def k(self) -> int:
        return len(self.a1) + 1

    @property
    def g(self) -> int:
        return len(self.bits[0]) + 1 if self.bits else 1

    @property
    def total_degree(self) -> int:
        return sum(self.a1) + sum(map(sum, self.bits))

    def exponents(self) -> Dict[Tuple[int, int], int]:
        out = {}
        for r, a in enumerate(self.a1, start=2):
            out[(r, 1)] = a
        for r, row in enumerate(self.bits, start=2):
            for i, a in enumerate(row, start=2):
                out[(r, i)] = a
        return out

    def sort_key(self):
        return (self.a1, tuple(itertools.chain.from_iterable(self.bits)))

    def is_reduced(self) -> bool:
        if any(x < y for x, y in zip(self.a1, self.a1[1:])):
            return False
        if any(b not in (0, 1) for row in self.bits for b in row):
            return False
        first = self.bits[0] if self.bits else ()
        return all(x >= y for x, y in zip(first, first[1:]))

    def as_dict(self):
        return {"a1": list(self.a1), "bits": [list(row) for row in self.bits]}

    def describe(self) -> str:
        parts = [f"a_{{{r},{i}}}={a}" for (r, i), a in sorted(self.exponents().items()) if a]
        return ", ".join(parts) if parts else "(empty product)"


@dataclass(frozen=True)
class ZclWitness:
    tuple: ExponentTuple
    survivor: int  # packed tensor monomial
    total_degree: int

    def verify(self, tctx: TensorContext) -> bool:
        if self.tuple.total_degree != self.total_degree:
            return False
        return self.survivor in zd_product(self.tuple.exponents(), tctx)

    def survivor_factors(self, tctx: TensorContext) -> Tuple[Monomial, ...]:
        return tctx.unpack(self.survivor)

    def as_dict(self, tctx: TensorContext):
        return {
            "tuple": self.tuple.as_dict(),
            "exponents": self.tuple.describe(),
            "survivor": format_tensor_monomial(self.survivor, tctx),
            "total_degree": self.total_degree,
        }


@dataclass
class SearchResult:
    n: int
    g: int
    k: int
    value: Optional[int]
    witness: Optional[ZclWitness]
    exact: bool
    restricted: bool
    terms_expanded: int
    tuples_tried: int


def _nonincreasing(length: int, total: int, cap: int, floor: int = 0) -> Iterator[Tuple[int, ...]]:
    """Non-increasing tuples with entries in [floor, cap] summing to ``total``."""
    if length == 0:
        if total == 0:
            yield ()
        return
    hi = min(cap, total - floor * (length - 1))
    lo = max(floor, -(-total // length))
    for first in range(hi, lo - 1, -1):
        for rest in _nonincreasing(length - 1, total - first, first, floor):
            yield (first,) + rest


def _bit_matrices(k: int, g: int) -> List[Tuple[Tuple[int, ...], ...]]:
    rows, cols = k - 1, g - 1
    out = []
    for flat in itertools.product((0, 1), repeat=rows * cols):
        m = tuple(tuple(flat[r * cols:(r + 1) * cols]) for r in range(rows))
        first = m[0]
        if all(x >= y for x, y in zip(first, first[1:])):
            out.append(m)
    return out


def reduced_tuples(n: int, g: int, k: int, degree: int) -> List[ExponentTuple]:
    """All reduced exponent tuples of the given total degree, sorted."""
    cap = 4 * n - 1
    out = []
    for bits in _bit_matrices(k, g):
        b = sum(map(sum, bits))
        if b > degree:
            continue
        for a1 in _nonincreasing(k - 1, degree - b, cap):
            out.append(ExponentTuple(a1, bits))
    out.sort(key=ExponentTuple.sort_key)
    return out


def _compositions(parts: int, total: int, cap: int) -> Iterator[Tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(max(0, total - cap * (parts - 1)), min(cap, total) + 1):
        for rest in _compositions(parts - 1, total - first, cap):
            yield (first,) + rest


def unrestricted_tuples(n: int, g: int, k: int, degree: int) -> List[ExponentTuple]:
    """Every exponent assignment with entries <= 4n - 1 and the given sum."""
    cap = 4 * n - 1
    rows, cols = k - 1, g
    out = []
    for flat in _compositions(rows * cols, degree, cap):
        a1 = tuple(flat[r * cols] for r in range(rows))
        bits = tuple(tuple(flat[r * cols + 1:(r + 1) * cols]) for r in range(rows))
        out.append(ExponentTuple(a1, bits))
    out.sort(key=ExponentTuple.sort_key)
    return out


class _Evaluator:
    """Expands candidate products for one (n, g, k), sharing generator-1 prefixes."""

    def __init__(self, tctx: TensorContext, prune: bool, budget: _Budget):
        self.tctx = tctx
        self.prune = prune
        self.budget = budget
        self.prefix: Dict[Tuple[int, ...], TensorClass] = {}

    def _prefix(self, a1: Tuple[int, ...]) -> TensorClass:
        hit = self.prefix.get(a1)
        if hit is None:
            acc = unit(self.tctx)
            for r, a in enumerate(a1, start=2):
                if not acc:
                    break
                acc = mul_zd_power(acc, r, 1, a, self.tctx)
                self.budget.charge(len(acc))
            hit = self.prefix[a1] = acc
        return hit

    def _column_drop(self, column: Sequence[int]) -> int:
        if any(a > 1 for a in column):
            return 0
        return (1 + sum(column)) // 2

    def _capacity_filter(self, acc: Iterable[int], need: int) -> TensorClass:
        if need <= 0:
            return frozenset(acc)
        cap = self.tctx.tables.capacity
        slots = self.tctx.slots
        return frozenset(key for key in acc if sum(cap[s] for s in slots(key)) >= need)

    def product(self, t: ExponentTuple) -> TensorClass:
        acc = self._prefix(t.a1)
        cols = [tuple(row[c] for row in t.bits) for c in range(t.g - 1)]
        drops = [self._column_drop(col) for col in cols] if self.prune else [0] * len(cols)
        for c, col in enumerate(cols):
            if not acc:
                break
            if self.prune:
                acc = self._capacity_filter(acc, sum(drops[c:]))
                if not acc:
                    break
            i = c + 2
            for r, a in enumerate(col, start=2):
                if a:
                    acc = mul_zd_power(acc, r, i, a, self.tctx)
                    self.budget.charge(len(acc))
                    if not acc:
                        break
        return acc


def _survivor(tc: TensorClass, tctx: TensorContext) -> int:
    # heaviest first slot wins, then slot 2, and so on
    return max(tc, key=tctx.slots)


def _scan(n, g, k, tuples, prune, budget_limit):
    """Evaluate tuples in order; return (first success or None, terms used, count)."""
    tctx = TensorContext(RingContext(n, g), k)
    budget = _Budget(budget_limit)
    ev = _Evaluator(tctx, prune, budget)
    tried = 0
    try:
        for t in tuples:
            tried += 1
            prod = ev.product(t)
            if prod:
                return (t, _survivor(prod, tctx)), budget.used, tried, False
    except BudgetExceeded:
        return None, budget.used, tried, True
    return None, budget.used, tried, False


def _shards(items: List[ExponentTuple], count: int) -> List[List[ExponentTuple]]:
    return [items[s::count] for s in range(count)]


def search_zcl(
    n: int,
    g: int,
    k: int,
    restricted: bool = True,
    budget: int = DEFAULT_BUDGET,
    prune: bool = True,
    workers: int = 1,
) -> SearchResult:
    """Exact zcl_k(SP^n(N_g)) by exhaustive search, with a witness.

    If the term budget runs out the result has ``exact=False`` and no value.
    With ``workers > 1`` each degree level is split into interleaved shards
    run in separate processes; the reported witness is the lexicographically
    least successful tuple, so output does not depend on the shard count.
    """
    if k < 2 or n < 1 or g < 1:
        raise ValueError(f"invalid instance n={n}, g={g}, k={k}")
    tctx = TensorContext(RingContext(n, g), k)
    enum = reduced_tuples if restricted else unrestricted_tuples
    used = tried = 0
    pool = ProcessPoolExecutor(workers) if workers > 1 else None
    try:
        for degree in range(2 * n * k, -1, -1):
            tuples = enum(n, g, k, degree)
            if pool is None:
                hit, u, c, over = _scan(n, g, k, tuples, prune, budget - used)
                used += u
                tried += c
                hits = [hit] if hit else []
            else:
                futures = [
                    pool.submit(_scan, n, g, k, shard, prune, budget - used)
                    for shard in _shards(tuples, workers)
                ]
                hits, over = [], False
                for fut in futures:
                    hit, u, c, o = fut.result()
                    used += u
                    tried += c
                    over = over or o
                    if hit:
                        hits.append(hit)
            if hits:
                t, survivor = min(hits, key=lambda h: h[0].sort_key())
                w = ZclWitness(t, survivor, degree)
                return SearchResult(n, g, k, degree, w, True, restricted, used, tried)
            if over:
                log.warning("budget exhausted at degree %d for n=%d g=%d k=%d", degree, n, g, k)
                return SearchResult(n, g, k, None, None, False, restricted, used, tried)
    finally:
        if pool is not None:
            pool.shutdown()
    raise AssertionError("the empty product is always nonzero")


@dataclass
class MaxEllResult:
    n: int
    k: int
    ell: Optional[int]
    a1: Optional[Tuple[int, ...]]
    exact: bool
    terms_expanded: int


def max_ell(n: int, k: int, budget: int = DEFAULT_BUDGET) -> MaxEllResult:
    """Largest l <= 2n such that some prod_r (x_{1,1} + x_{r,1})^{a_r} in the
    k-fold power of H*(P^{2n}) has x^l (x) x^{2n} (x) ... (x) x^{2n} in its expansion.

    Slot r >= 2 is touched only by the r-th factor, so once that factor is
    multiplied in, terms whose slot r is not x^{2n} are dropped; this keeps
    the coefficient of the target monomial intact.
    """
    if k < 2 or n < 1:
        raise ValueError(f"invalid instance n={n}, k={k}")
    tctx = TensorContext(RingContext(n, 1), k)
    w = tctx.width
    mask = (1 << w) - 1
    top = tctx.tables.index[Monomial(2 * n, 0)]
    spent = _Budget(budget)
    try:
        for ell in range(2 * n, -1, -1):
            target = tctx.pack([Monomial(ell, 0)] + [Monomial(2 * n, 0)] * (k - 1))
            degree = 2 * n * (k - 1) + ell
            # slot r ends at x^{2n}, so a_r >= 2n
            for a1 in _nonincreasing(k - 1, degree, 4 * n - 1, floor=2 * n):
                acc = unit(tctx)
                for r, a in enumerate(a1, start=2):
                    acc = mul_zd_power(acc, r, 1, a, tctx)
                    shift = (r - 1) * w
                    acc = frozenset(key for key in acc if (key >> shift) & mask == top)
                    spent.charge(len(acc))
                    if not acc:
                        break
                if target in acc:
                    return MaxEllResult(n, k, ell, a1, True, spent.used)
    except BudgetExceeded:
        return MaxEllResult(n, k, None, None, False, spent.used)
    raise AssertionError("l = 0 is always attained by a_r = 2n")


@dataclass
class GridCell:
    n: int
    g: int
    k: int
    status: str  # "agree" | "mismatch" | "budget-exceeded"
    closed: int
    case: str
    searched: Optional[int]
    witness: Optional[dict]
    terms_expanded: int
    trace: Optional[str] = None

    def as_dict(self):
        return dict(self.__dict__)


@dataclass
class GridReport:
    cells: List[GridCell] = field(default_factory=list)

    @property
    def mismatches(self) -> List[GridCell]:
        return [c for c in self.cells if c.status == "mismatch"]

    @property
    def exhausted(self) -> List[GridCell]:
        return [c for c in self.cells if c.status == "budget-exceeded"]

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def stats(self) -> Dict[str, int]:
        out = {"cells": len(self.cells), "agree": 0, "mismatch": 0, "budget-exceeded": 0}
        for c in self.cells:
            out[c.status] += 1
        out["terms_expanded"] = sum(c.terms_expanded for c in self.cells)
        return out


def _grid_cell(n, g, k, restricted, budget, prune) -> GridCell:
    from .closed_forms import zcl_closed

    closed, tag = zcl_closed(n, g, k)
    res = search_zcl(n, g, k, restricted=restricted, budget=budget, prune=prune)
    tctx = TensorContext(RingContext(n, g), k)
    wit = res.witness.as_dict(tctx) if res.witness else None
    if not res.exact:
        status = "budget-exceeded"
    elif res.value == closed:
        status = "agree"
    else:
        status = "mismatch"
    cell = GridCell(n, g, k, status, closed, tag.label, res.value, wit, res.terms_expanded)
    if status == "mismatch":
        cell.trace = format_tensor_class(zd_product(res.witness.tuple.exponents(), tctx), tctx)
    return cell


def verify_grid(
    ns: Iterable[int],
    gs: Iterable[int],
    ks: Iterable[int],
    restricted: bool = True,
    budget: int = DEFAULT_BUDGET,
    prune: bool = True,
    workers: int = 1,
) -> GridReport:
    """Compare the search against the closed form on every (n, g, k) cell."""
    cells = sorted(itertools.product(ns, gs, ks))
    report = GridReport()
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            futures = [pool.submit(_grid_cell, n, g, k, restricted, budget, prune) for n, g, k in cells]
            report.cells = [f.result() for f in futures]
    else:
        report.cells = [_grid_cell(n, g, k, restricted, budget, prune) for n, g, k in cells]
    for c in report.mismatches:
        log.error("closed form %d but search %s at n=%d g=%d k=%d", c.closed, c.searched, c.n, c.g, c.k)
    return report


@dataclass
class SoundnessCell:
    n: int
    g: int
    k: int
    restricted: Optional[int]
    unrestricted: Optional[int]
    terms_expanded: int

    @property
    def status(self) -> str:
        if self.restricted is None or self.unrestricted is None:
            return "budget-exceeded"
        return "agree" if self.restricted == self.unrestricted else "mismatch"

    def as_dict(self):
        out = dict(self.__dict__)
        out["status"] = self.status
        return out


def reduction_soundness(
    ns: Iterable[int],
    gs: Iterable[int],
    ks: Iterable[int],
    budget: int = DEFAULT_BUDGET,
) -> List[SoundnessCell]:
    """Run the reduced and the unrestricted search side by side.

    Disagreement would mean the reduction to reduced tuples (or the exponent
    cap 4n - 1) loses a maximizer.
    """
    out = []
    for n, g, k in sorted(itertools.product(ns, gs, ks)):
        a = search_zcl(n, g, k, restricted=True, budget=budget)
        b = search_zcl(n, g, k, restricted=False, budget=budget, prune=False)
        out.append(SoundnessCell(n, g, k, a.value, b.value, a.terms_expanded + b.terms_expanded))
    return out
