"""Randomized checks of the capacity calculus against actual ring products.

Each campaign draws instances from a seeded ``random.Random``, computes the
relevant product with the tensor-ring machinery, and records any instance
where the claimed inequality or vanishing fails.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .combinatorics import gap_p2n
from .ring_core import Monomial, RingContext, capacity, enumerate_basis, generator, monomial_mul
from .tensor_ring import TensorContext, mul_zd_power, tensor_capacity

__all__ = [
    "LawReport",
    "check_capacity_semantics",
    "check_prop_y",
    "check_prop_z",
    "check_fresh_generators",
    "check_final_vanishing",
    "case_b_instances",
    "run_capacity_campaign",
]


@dataclass
class LawReport:
    law: str
    instances: int = 0
    violations: List[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def as_dict(self):
        return {"law": self.law, "instances": self.instances, "violations": self.violations[:20]}


def _random_key(tctx: TensorContext, ring_for_slots: RingContext, rng: random.Random) -> int:
    basis = enumerate_basis(ring_for_slots)
    return tctx.pack([rng.choice(basis) for _ in range(tctx.k)])


def check_capacity_semantics(rng: random.Random, count: int, max_n: int = 6, max_g: int = 5) -> LawReport:
    """m * x_{i_1} ... x_{i_j} (distinct i not in m) is nonzero iff j <= c(m)."""
    rep = LawReport("capacity-semantics")
    for _ in range(count):
        ring = RingContext(rng.randint(1, max_n), rng.randint(1, max_g))
        m = rng.choice(enumerate_basis(ring))
        fresh = [i for i in range(2, ring.g + 1) if i not in m.indices()]
        j = rng.randint(0, len(fresh))
        prod: Optional[Monomial] = m
        for i in rng.sample(fresh, j):
            prod = monomial_mul(prod, generator(i, ring), ring)
            if prod is None:
                break
        rep.instances += 1
        if (prod is not None) != (j <= capacity(m, ring)):
            rep.violations.append({"n": ring.n, "g": ring.g, "m": [m.a, m.idx], "j": j})
    return rep


def check_prop_y(rng: random.Random, count: int, max_n: int = 6, max_k: int = 4) -> LawReport:
    """c(x^{2n-p_1} (x) ... (x) x^{2n-p_k}) <= floor(A / 2) whenever sum p_r <= A."""
    rep = LawReport("capacity-of-top-deficit")
    for _ in range(count):
        n, k = rng.randint(1, max_n), rng.randint(2, max_k)
        tctx = TensorContext(RingContext(n, 1), k)
        ps = [rng.randint(0, 2 * n) for _ in range(k)]
        bound = sum(ps) + rng.randint(0, 3)
        key = tctx.pack([Monomial(2 * n - p, 0) for p in ps])
        rep.instances += 1
        if tensor_capacity(key, tctx) > bound // 2:
            rep.violations.append({"n": n, "k": k, "p": ps, "A": bound})
    return rep


def check_prop_z(rng: random.Random, count: int, max_n: int = 6, max_g: int = 5, max_k: int = 4) -> LawReport:
    """Multiplying a basis element b by prod_r (x_{1,g'} + x_{r,g'})^{eps_r} with a
    fresh generator g' lowers capacity by at least floor((1 + sum eps) / 2)."""
    rep = LawReport("fresh-zero-divisor-capacity-drop")
    for _ in range(count):
        n, g, k = rng.randint(1, max_n), rng.randint(1, max_g - 1), rng.randint(2, max_k)
        big = RingContext(n, g + 1)
        tctx = TensorContext(big, k)
        b = _random_key(tctx, RingContext(n, g), rng)
        eps = [rng.randint(0, 1) for _ in range(k - 1)]
        drop = (1 + sum(eps)) // 2
        prod = frozenset([b])
        for r, e in enumerate(eps, start=2):
            if e:
                prod = mul_zd_power(prod, r, g + 1, 1, tctx)
        cb = tensor_capacity(b, tctx)
        rep.instances += 1
        bad = [key for key in prod if tensor_capacity(key, tctx) > cb - drop]
        if bad or (cb < drop and prod):
            rep.violations.append({"n": n, "g": g, "k": k, "b": tctx.slots(b), "eps": eps})
    return rep


def check_fresh_generators(rng: random.Random, count: int, max_n: int = 6, max_g: int = 5, max_k: int = 4) -> LawReport:
    """b * prod_t x_{e_t, i_t} over distinct fresh (slot, generator) pairs has
    capacity at most c(b) - j, and vanishes when c(b) < j."""
    rep = LawReport("fresh-generator-capacity-drop")
    for _ in range(count):
        n, k = rng.randint(1, max_n), rng.randint(2, max_k)
        g = rng.randint(1, max_g - 1)
        big_g = rng.randint(g + 1, max_g)
        big = RingContext(n, big_g)
        tctx = TensorContext(big, k)
        b = _random_key(tctx, RingContext(n, g), rng)
        pairs = [(e, i) for e in range(1, k + 1) for i in range(g + 1, big_g + 1)]
        chosen = rng.sample(pairs, rng.randint(0, len(pairs)))
        tab = tctx.tables
        slots = tctx.slots(b)
        for e, i in chosen:
            if slots[e - 1] < 0:
                break
            slots[e - 1] = tab.gen_pow[i][1][slots[e - 1]]
        cb = tensor_capacity(b, tctx)
        j = len(chosen)
        rep.instances += 1
        if any(s < 0 for s in slots):
            continue
        key = sum(s << (r * tctx.width) for r, s in enumerate(slots))
        if tensor_capacity(key, tctx) > cb - j or cb < j:
            rep.violations.append({"n": n, "g": g, "g'": big_g, "k": k, "b": tctx.slots(b), "pairs": chosen})
    return rep


def case_b_instances(max_n: int = 7, max_g: int = 6, ks=(4, 6)) -> List[Tuple[int, int, int]]:
    """(n, g, k) with even k whose genus lies strictly inside the middle window."""
    out = []
    for n in range(1, max_n + 1):
        for k in ks:
            gp = gap_p2n(n, k)
            if gp <= 0:
                continue
            h, lam = (gp + 1) // 2, k // 2
            for g in range(2, max_g + 1):
                if (g - 1) * (lam - 1) < h <= (g - 1) * lam:
                    out.append((n, g, k))
    return out


def check_final_vanishing(rng: random.Random, count: int, instances=None) -> LawReport:
    """In the middle even-k window, m * e = 0 once deg(m * e) > 2nk - t.

    m is a basis monomial of H*(P^{2n})^{(x)k} of degree zcl_k(P^{2n}) - d and
    e a product of distinct-slot zero-divisors (x_{1,i} + x_{r,i}), i >= 2.
    """
    rep = LawReport("middle-window-vanishing")
    instances = instances or case_b_instances()
    drawn = 0
    while drawn < count:
        n, g, k = rng.choice(instances)
        gp = gap_p2n(n, k)
        h, lam = (gp + 1) // 2, k // 2
        t = h - (g - 1) * (lam - 1)
        d = rng.randint(0, gp - 1)
        lo, hi = gp + d - t + 1, (g - 1) * (k - 1)
        if lo > hi:
            continue
        deg_e = rng.randint(lo, hi)
        ps = _random_split(rng, gp + d, k, 2 * n)
        if ps is None:
            continue
        tctx = TensorContext(RingContext(n, g), k)
        cells = [(r, i) for r in range(2, k + 1) for i in range(2, g + 1)]
        chosen = sorted(rng.sample(cells, deg_e), key=lambda ri: (ri[1], ri[0]))
        prod = frozenset([tctx.pack([Monomial(2 * n - p, 0) for p in ps])])
        for r, i in chosen:
            prod = mul_zd_power(prod, r, i, 1, tctx)
            if not prod:
                break
        drawn += 1
        rep.instances += 1
        if prod:
            rep.violations.append({"n": n, "g": g, "k": k, "d": d, "p": ps, "e": chosen})
    return rep


def _random_split(rng: random.Random, total: int, parts: int, cap: int) -> Optional[List[int]]:
    if total > parts * cap:
        return None
    out = [0] * parts
    for _ in range(total):
        open_slots = [r for r in range(parts) if out[r] < cap]
        out[rng.choice(open_slots)] += 1
    return out


def run_capacity_campaign(seed: int, count: int = 10_000, final_count: int = 1_000) -> Dict[str, LawReport]:
    rng = random.Random(seed)
    reports = [
        check_capacity_semantics(rng, count),
        check_prop_y(rng, count),
        check_prop_z(rng, count),
        check_fresh_generators(rng, count),
        check_final_vanishing(rng, final_count),
    ]
    return {r.law: r for r in reports}
