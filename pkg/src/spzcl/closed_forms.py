"""Closed-form zero-divisor cup lengths and gaps of SP^n(N_g).

Every value comes with a CaseTag naming the branch that produced it and the
thresholds that were compared, so any number can be audited by hand.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .combinatorics import gap_p2n, s_set, top_bit, z_value

__all__ = [
    "K2_SMALL_G",
    "K2_LARGE_G",
    "A_ODD",
    "A_EVEN_SMALL_G",
    "B_EVEN_MID_G",
    "C_EVEN_LARGE_G",
    "CaseTag",
    "DiffPrediction",
    "classify",
    "zcl_closed",
    "gap_closed",
    "gap_direct",
    "zcl_diff_predicted",
    "difference_cases",
    "k2_threshold",
    "odd_stable_genus",
    "even_stable_genus",
    "GapPiece",
    "gap_pieces",
    "gap_case_table",
]

K2_SMALL_G = "K2_SMALL_G"
K2_LARGE_G = "K2_LARGE_G"
A_ODD = "A_ODD"
A_EVEN_SMALL_G = "A_EVEN_SMALL_G"
B_EVEN_MID_G = "B_EVEN_MID_G"
C_EVEN_LARGE_G = "C_EVEN_LARGE_G"


@dataclass(frozen=True)
class CaseTag:
    label: str
    thresholds: Dict[str, int] = field(default_factory=dict, compare=False)

    def as_dict(self):
        return {"label": self.label, "thresholds": dict(self.thresholds)}


def _check(n: int, g: int, k: int) -> None:
    if k < 2:
        raise ValueError(f"need k >= 2, got {k}")
    if n < 1 or g < 1:
        raise ValueError(f"need n, g >= 1, got n={n}, g={g}")


def k2_threshold(n: int) -> int:
    """2n - 2^(e+1) + 1: the genus where the k = 2 formula switches branch."""
    return 2 * n - 2 ** (top_bit(n) + 1) + 1


def _even_thresholds(n: int, k: int) -> Tuple[int, int, int]:
    gp = gap_p2n(n, k)
    # largest g of case A and smallest g of case C
    return gp, gp // k + 1, gp // (k - 2) + 2


def odd_stable_genus(n: int, k: int) -> int:
    """For odd k >= 3: from this genus on, zcl_k = 2nk."""
    gp = gap_p2n(n, k)
    return -(-gp // (k - 1)) + 1


def even_stable_genus(n: int, k: int) -> int:
    return _even_thresholds(n, k)[2]


def classify(n: int, g: int, k: int) -> CaseTag:
    _check(n, g, k)
    if k == 2:
        t = k2_threshold(n)
        label = K2_SMALL_G if g <= t else K2_LARGE_G
        return CaseTag(label, {"2n-2^(e+1)+1": t})
    if k % 2:
        return CaseTag(A_ODD, {"gap_k(P^2n)": gap_p2n(n, k)})
    gp, a_max, c_min = _even_thresholds(n, k)
    th = {"gap_k(P^2n)": gp, "floor(gap/k)+1": a_max, "floor(gap/(k-2))+2": c_min}
    if g <= a_max:
        return CaseTag(A_EVEN_SMALL_G, th)
    if g >= c_min:
        return CaseTag(C_EVEN_LARGE_G, th)
    return CaseTag(B_EVEN_MID_G, th)


def _case_a_gap(n: int, g: int, k: int) -> int:
    m = 2 * n
    best = 0
    for i in s_set(m):
        best = max(best, 2 ** (i + 1) - 1 - k * z_value(m, i) - (k - 1) * (g - 1))
    return best


def zcl_closed(n: int, g: int, k: int) -> Tuple[int, CaseTag]:
    """zcl_k(SP^n(N_g)) together with the branch that produced it."""
    tag = classify(n, g, k)
    if k == 2:
        e = top_bit(n)
        small = 2 ** (e + 2) + g - 2
        large = 2 ** (e + 1) + 2 * n - 1
        t = tag.thresholds["2n-2^(e+1)+1"]
        if g == t:
            assert small == large, (n, g)
        return (small if g <= t else large), tag
    if tag.label in (A_ODD, A_EVEN_SMALL_G):
        return 2 * n * k - _case_a_gap(n, g, k), tag
    if tag.label == C_EVEN_LARGE_G:
        return 2 * n * k, tag
    gp = tag.thresholds["gap_k(P^2n)"]
    assert k >= 4 and k % 2 == 0
    assert (gp + 1) % 2 == 0, f"even-k gap of P^{2 * n} should be odd, got {gp}"
    return 2 * n * k + (k // 2 - 1) * (g - 1) - (gp + 1) // 2, tag


def gap_direct(n: int, g: int, k: int) -> int:
    """The gap written directly in each branch, independent of zcl_closed."""
    _check(n, g, k)
    if k == 2:
        e = top_bit(n)
        if g <= k2_threshold(n):
            return 4 * n - 2 ** (e + 2) - g + 2
        return 2 * n - 2 ** (e + 1) + 1
    if k % 2:
        return _case_a_gap(n, g, k)
    gp = gap_p2n(n, k)
    if g <= gp // k + 1:
        return _case_a_gap(n, g, k)
    if g <= gp // (k - 2) + 1:
        return (gp + 1) // 2 - (k // 2 - 1) * (g - 1)
    return 0


def gap_closed(n: int, g: int, k: int) -> int:
    zcl, _ = zcl_closed(n, g, k)
    gap = 2 * n * k - zcl
    assert gap == gap_direct(n, g, k), (n, g, k)
    return gap


@dataclass(frozen=True)
class DiffPrediction:
    """Prediction for zcl_k(SP^n(N_{g+1})) - zcl_k(SP^n(N_g)).

    ``lo``/``hi`` bound the difference; ``None`` means unbounded on that side.
    The prediction is exact when lo == hi.
    """

    case: int
    lo: Optional[int]
    hi: Optional[int]

    @property
    def exact(self) -> bool:
        return self.lo is not None and self.lo == self.hi

    def admits(self, value: int) -> bool:
        return (self.lo is None or value >= self.lo) and (self.hi is None or value <= self.hi)


def difference_cases(n: int, g: int, k: int) -> List[DiffPrediction]:
    """Every genus-increment law whose hypotheses hold at (n, g, k)."""
    _check(n, g, k)
    out = []
    if k == 2:
        if g <= 2 * n - 2 ** (top_bit(n) + 1):
            out.append(DiffPrediction(1, 1, 1))
        else:
            out.append(DiffPrediction(1, None, 0))
        return out
    gp = gap_p2n(n, k)
    if k % 2:
        if g >= odd_stable_genus(n, k):
            out.append(DiffPrediction(2, 0, 0))
        elif zcl_closed(n, g + 1, k)[0] != 2 * n * k:
            out.append(DiffPrediction(2, k - 1, k - 1))
        else:
            out.append(DiffPrediction(2, None, k - 1))
        return out
    if g <= gp // k:
        out.append(DiffPrediction(3, k - 1, k - 1))
    if g == gp // k + 1:
        r = gp % k
        if k <= 2 * g + r:
            assert (k + r - 3) % 2 == 0
            v = (k + r - 3) // 2
        else:
            v = g + r - 1
        out.append(DiffPrediction(4, v, v))
    if gp // k + 2 <= g <= gp // (k - 2):
        out.append(DiffPrediction(5, k // 2 - 1, k // 2 - 1))
    if g >= gp // (k - 2) + 1:
        v = gap_closed(n, g, k)
        out.append(DiffPrediction(6, v, v))
    return out


def zcl_diff_predicted(n: int, g: int, k: int) -> DiffPrediction:
    return difference_cases(n, g, k)[0]


@dataclass(frozen=True)
class GapPiece:
    """gap_k(SP^n(N_g)) = intercept + slope * g on g_lo <= g <= g_hi.

    ``g_hi`` is None when the piece continues for all larger g.
    """

    k: int
    g_lo: int
    g_hi: Optional[int]
    intercept: int
    slope: int
    case: str

    def formula(self) -> str:
        if self.slope == 0:
            return str(self.intercept)
        coef = "g" if abs(self.slope) == 1 else f"{abs(self.slope)}g"
        if self.intercept == 0:
            return ("-" if self.slope < 0 else "") + coef
        return f"{self.intercept} {'-' if self.slope < 0 else '+'} {coef}"

    def g_range(self) -> str:
        if self.g_hi is None:
            return "g >= 1" if self.g_lo == 1 else f"g >= {self.g_lo}"
        if self.g_lo == self.g_hi:
            return f"g = {self.g_lo}"
        if self.g_lo == 1:
            return f"g <= {self.g_hi}"
        return f"{self.g_lo} <= g <= {self.g_hi}"


def _genus_horizon(n: int, k: int) -> int:
    # past every case threshold the gap is constant in g
    gp = gap_p2n(n, k)
    return max(k2_threshold(n), gp + 2) + 2


def gap_pieces(n: int, k: int) -> List[GapPiece]:
    """Split g -> gap_k(SP^n(N_g)) into maximal affine pieces with nonzero value.

    Points where the gap vanishes are left out.  A piece also claims the
    point just before it when its formula still holds there, so adjacent
    pieces may share an endpoint.
    """
    horizon = _genus_horizon(n, k)
    vals = {g: gap_closed(n, g, k) for g in range(1, horizon + 1)}
    pieces: List[GapPiece] = []
    g = 1
    while g <= horizon:
        if vals[g] == 0:
            g += 1
            continue
        start = g
        slope = vals[g + 1] - vals[g] if g + 1 <= horizon and vals[g + 1] else 0
        while g + 1 <= horizon and vals[g + 1] and vals[g + 1] - vals[g] == slope:
            g += 1
        intercept = vals[start] - slope * start
        lo = start
        if lo > 1 and vals[lo - 1] == intercept + slope * (lo - 1):
            lo -= 1
        hi = None if g == horizon else g
        case = classify(n, start, k).label
        pieces.append(GapPiece(k, lo, hi, intercept, slope, case))
        g += 1
    return pieces


def gap_case_table(n: int, k_max: Optional[int] = None) -> List[GapPiece]:
    """All nonzero gap pieces for k = 2 .. k_max; every other (g, k) has gap 0.

    By default k runs until gap_k(P^{2n}) vanishes, after which the gap of
    SP^n(N_g) is zero for every g.
    """
    out: List[GapPiece] = []
    k = 2
    while True:
        if k_max is not None and k > k_max:
            break
        if k_max is None and k > 2 and gap_p2n(n, k) == 0:
            break
        out.extend(gap_pieces(n, k))
        k += 1
    return out
