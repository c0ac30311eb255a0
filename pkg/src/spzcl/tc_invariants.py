"""Sequential topological complexity bounds and the TC-generating polynomial.

Bounds come from three inequalities:

    max(zcl_k, cat(X^{k-1})) <= TC_k(X) <= cat(X^k)
    zcl_k <= cat(C_{Delta_k X}) <= min(TC_k(X) + 1, k dim X)

with cat((SP^n(N_g))^m) = 2mn.  Exact values are reported only when one of
the rules below pins them down; literature values live in ``ANNOTATIONS``
and are shown next to the bounds, never folded into them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .closed_forms import even_stable_genus, odd_stable_genus, zcl_closed
from .combinatorics import gap_p2n, is_power_of_two, top_bit

__all__ = [
    "RULE_BOUNDS",
    "RULE_BOUNDS_MEET",
    "RULE_ODD_K_LARGE_G",
    "RULE_EVEN_K_LARGE_G",
    "RULE_POW2_K3",
    "RULE_POW2_K2",
    "ANNOTATIONS",
    "Annotation",
    "TcReport",
    "GenPolynomial",
    "UnsupportedRegime",
    "tc_bounds",
    "annotations_for",
    "tcgen_polynomial",
    "series_coefficients",
    "arithmetic_tail_check",
    "projective_stable_k",
]

RULE_BOUNDS = "zcl-and-category-bounds"
RULE_BOUNDS_MEET = "bounds-meet"
RULE_ODD_K_LARGE_G = "odd-k-genus-absorbs-gap"
RULE_EVEN_K_LARGE_G = "even-k-genus-absorbs-gap"
RULE_POW2_K3 = "n-power-of-two-k-ge-3"
RULE_POW2_K2 = "n-power-of-two-k-eq-2"


@dataclass(frozen=True)
class Annotation:
    n: Optional[int]  # None: any n
    g_min: int
    g_max: Optional[int]
    k: int
    invariant: str  # "TC" or "cat_cof"
    value: int
    source: str


# Known values from the literature; displayed, never used to set exactness.
ANNOTATIONS: Tuple[Annotation, ...] = (
    Annotation(1, 2, None, 2, "TC", 4, "TC_2(N_g) = 4 for g >= 2 (Dranishnikov; Cohen-Vandembroucq)"),
    Annotation(1, 2, None, 2, "cat_cof", 3, "cat(C_{Delta_2 N_g}) = 3 for g >= 2 (Dranishnikov)"),
    Annotation(1, 1, 1, 2, "TC", 3, "TC_2(P^2) = 3, the immersion dimension of P^2 (Farber-Tabachnikov-Yuzvinsky)"),
)


def annotations_for(n: int, g: int, k: int) -> List[Annotation]:
    return [
        a for a in ANNOTATIONS
        if (a.n is None or a.n == n) and a.k == k and g >= a.g_min and (a.g_max is None or g <= a.g_max)
    ]


@dataclass
class TcReport:
    n: int
    g: int
    k: int
    zcl: int
    case: str
    tc_lower: int
    tc_upper: int
    tc_exact: Optional[int]
    cat_cof_lower: int
    cat_cof_upper: int
    cat_cof_exact: Optional[int]
    justification: str
    annotations: List[str] = field(default_factory=list)

    def as_dict(self):
        return dict(self.__dict__)


def _exact_rule(n: int, g: int, k: int) -> Optional[str]:
    if k == 2:
        if n >= 2 and is_power_of_two(n):
            return RULE_POW2_K2
        return None
    if is_power_of_two(n):
        return RULE_POW2_K3
    if k % 2 and g >= odd_stable_genus(n, k):
        return RULE_ODD_K_LARGE_G
    if k % 2 == 0 and g >= even_stable_genus(n, k):
        return RULE_EVEN_K_LARGE_G
    return None


def tc_bounds(n: int, g: int, k: int) -> TcReport:
    zcl, tag = zcl_closed(n, g, k)
    top = 2 * n * k
    lower = max(zcl, 2 * n * (k - 1))
    upper = top
    if k == 2 and n >= 2:
        # closed non-orientable, abelian pi_1: TC_2 stays below 2 dim
        upper = 4 * n - 1
    rule = _exact_rule(n, g, k)
    exact = cat_exact = None
    if rule == RULE_POW2_K2:
        exact = cat_exact = 4 * n - 1
    elif rule is not None:
        exact = cat_exact = top
    elif lower == upper:
        rule = RULE_BOUNDS_MEET
        exact = lower
    if exact is not None:
        assert lower <= exact <= upper, (n, g, k)
        lower = upper = exact
    cat_lower = zcl
    # for k = 2, n >= 2 the cofiber category sits below TC_2 itself
    cat_upper = upper if (k == 2 and n >= 2) else min(upper + 1, top)
    if cat_exact is None and cat_lower == cat_upper:
        cat_exact = cat_lower
        rule = rule or RULE_BOUNDS_MEET
    if cat_exact is not None:
        cat_lower = cat_upper = cat_exact
    return TcReport(
        n, g, k, zcl, tag.label, lower, upper, exact, cat_lower, cat_upper, cat_exact,
        rule or RULE_BOUNDS,
        [a.source for a in annotations_for(n, g, k)],
    )


def projective_stable_k(n: int) -> int:
    """2^(l+1) - 1 with l the longest run of ones in n; TC_k(P^{2n}) = 2nk beyond it."""
    longest = max(len(run) for run in bin(n)[2:].split("0"))
    return 2 ** (longest + 1) - 1


class UnsupportedRegime(ValueError):
    pass


Interval = Tuple[int, int]


@dataclass
class GenPolynomial:
    """P(t) = sum coeffs[j] t^j with f(t) = P(t) / (1 - t)^2.

    Each coefficient is an integer interval; all are degenerate when exact.
    ``sources`` records where each TC value fed into P came from.
    """

    n: int
    g: int
    coeffs: List[Interval]
    stabilization_index: int
    degree_bound: int
    exact: bool
    sources: Dict[int, str] = field(default_factory=dict)

    @property
    def degree(self) -> int:
        d = 0
        for j, (lo, hi) in enumerate(self.coeffs):
            if lo or hi:
                d = j
        return d

    def value_at_one(self) -> Interval:
        return (sum(lo for lo, _ in self.coeffs), sum(hi for _, hi in self.coeffs))

    def exact_coeffs(self) -> List[int]:
        if not self.exact:
            raise ValueError("polynomial has undetermined coefficients")
        return [lo for lo, _ in self.coeffs]

    def render(self) -> str:
        terms = []
        for j, (lo, hi) in enumerate(self.coeffs):
            if lo == hi == 0:
                continue
            power = "" if j == 0 else ("t" if j == 1 else f"t^{j}")
            if lo == hi:
                c = lo
                sign = "-" if c < 0 else "+"
                mag = abs(c)
                body = power if mag == 1 and power else f"{mag}{power}"
            else:
                sign = "+"
                body = f"[{lo}..{hi}]{power}"
            terms.append((sign, body))
        if not terms:
            return "0"
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


def _poly_add(acc: List[Interval], j: int, scale: int, val: Interval) -> None:
    while len(acc) <= j:
        acc.append((0, 0))
    lo, hi = val[0] * scale, val[1] * scale
    if scale < 0:
        lo, hi = hi, lo
    acc[j] = (acc[j][0] + lo, acc[j][1] + hi)


def _tc_value(n: int, g: int, k: int, use_literature: bool) -> Tuple[Interval, str]:
    rep = tc_bounds(n, g, k)
    if rep.tc_exact is not None:
        return (rep.tc_exact, rep.tc_exact), rep.justification
    if use_literature:
        for a in annotations_for(n, g, k):
            if a.invariant == "TC":
                assert rep.tc_lower <= a.value <= rep.tc_upper, a
                return (a.value, a.value), "literature: " + a.source
    return (rep.tc_lower, rep.tc_upper), RULE_BOUNDS


def _special_regime(n: int, g: int) -> bool:
    return is_power_of_two(n) or g >= gap_p2n(n, 2) // 2 + 2


def tcgen_polynomial(n: int, g: int, use_literature: bool = True) -> GenPolynomial:
    """Numerator of the TC-generating function sum_k TC_{k+1} t^k.

    Past the stabilization index D every TC_k equals 2nk, which gives

        P(t) = 2n (D t^{D-1} - (D-1) t^D) + (1-t)^2 sum_{k<=D-2} TC_{k+1} t^k.

    TC values the bounds leave open are carried as intervals.  With
    ``use_literature`` a value from ``ANNOTATIONS`` is used where the bounds
    leave TC_2 open; ``sources`` says so.
    """
    if n < 1 or g < 1:
        raise ValueError(f"need n, g >= 1, got n={n}, g={g}")
    if g == 1 and not is_power_of_two(n):
        raise UnsupportedRegime(
            f"n={n}, g=1: no stabilization index is available; need g >= 2, "
            f"or g = 1 with n a power of two"
        )
    gap2 = gap_p2n(n, 2)
    special = _special_regime(n, g)
    general_d = gap2 // (g - 1) + 3 if g >= 2 else 3
    d = 3 if special else general_d
    coeffs: List[Interval] = []
    _poly_add(coeffs, d - 1, 2 * n * d, (1, 1))
    _poly_add(coeffs, d, -2 * n * (d - 1), (1, 1))
    sources = {}
    for k in range(1, d - 1):
        val, src = _tc_value(n, g, k + 1, use_literature)
        sources[k + 1] = src
        for shift, scale in ((0, 1), (1, -2), (2, 1)):
            _poly_add(coeffs, k + shift, scale, val)
    exact = all(lo == hi for lo, hi in coeffs)
    bound = 3 if special else general_d
    poly = GenPolynomial(n, g, coeffs, d, bound, exact, sources)
    assert poly.degree <= bound
    return poly


def series_coefficients(poly: GenPolynomial, terms: int) -> List[int]:
    """Power-series coefficients of P(t) / (1 - t)^2 up to t^(terms - 1)."""
    p = poly.exact_coeffs()
    # 1 / (1 - t)^2 = sum (j + 1) t^j
    return [sum(p[i] * (j - i + 1) for i in range(min(j, len(p) - 1) + 1)) for j in range(terms)]


def _regime_one(n: int, g: int) -> bool:
    return g >= gap_p2n(n, 2) // 2 + 2


def arithmetic_tail_check(n: int, g: int, horizon: int = 12) -> bool:
    """TC_{k+1} - TC_k = 2n for 3 <= k < horizon, using exact values only.

    Requires g >= floor(gap_2(P^{2n}) / 2) + 2.
    """
    if not _regime_one(n, g):
        raise UnsupportedRegime(
            f"n={n}, g={g}: need g >= floor(gap_2(P^{{2n}})/2) + 2 = {gap_p2n(n, 2) // 2 + 2}"
        )
    prev = None
    for k in range(3, horizon + 1):
        cur = tc_bounds(n, g, k).tc_exact
        if cur is None:
            return False
        if prev is not None and cur - prev != 2 * n:
            return False
        prev = cur
    return True
