"""Binary-expansion helpers and the zero-divisor gap of P^{2n}."""

from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet, Tuple

__all__ = [
    "BinaryProfile",
    "binary_profile",
    "top_bit",
    "s_set",
    "z_value",
    "gap_p2n",
    "gap_p2n_max_form",
    "binom_parity",
    "submasks",
    "is_power_of_two",
]


@dataclass(frozen=True)
class BinaryProfile:
    m: int
    e: int
    digits: Tuple[int, ...]  # digits[j] is the coefficient of 2^j


def top_bit(m: int) -> int:
    """The exponent e with 2^e <= m < 2^(e+1)."""
    if m < 1:
        raise ValueError(f"need a positive integer, got {m}")
    return m.bit_length() - 1


def binary_profile(m: int) -> BinaryProfile:
    e = top_bit(m)
    return BinaryProfile(m, e, tuple((m >> j) & 1 for j in range(e + 1)))


def is_power_of_two(m: int) -> bool:
    return m >= 1 and m & (m - 1) == 0


def s_set(m: int) -> FrozenSet[int]:
    """Positions i where a run of at least two ones starts (reading downward).

    i is included when bits i and i-1 are set and bit i+1 is clear.
    """
    e = top_bit(m)
    bit = lambda j: (m >> j) & 1 if j >= 0 else 0
    return frozenset(
        i for i in range(e + 1) if bit(i) and bit(i - 1) and not bit(i + 1)
    )


def z_value(m: int, i: int) -> int:
    """Sum of 2^j over the zero bits j <= i of m."""
    e = top_bit(m)
    if not 0 <= i <= e:
        raise ValueError(f"bit index {i} outside 0..{e}")
    mask = (1 << (i + 1)) - 1
    return ~m & mask


def gap_p2n_max_form(n: int, k: int) -> int:
    """max over i in S(2n) of {0, 2^(i+1) - 1 - k Z_i(2n)}, 0 on empty S.

    Valid as the zero-divisor gap only for k >= 3; see ``gap_p2n``.
    """
    m = 2 * n
    best = 0
    for i in s_set(m):
        best = max(best, 2 ** (i + 1) - 1 - k * z_value(m, i))
    # every term is bounded by 2^(i+1) <= 4n
    assert best < 2**63
    return best


def gap_p2n(n: int, k: int) -> int:
    """k * dim(P^{2n}) - zcl_k(P^{2n}).

    For k = 2 the max-form expression is wrong in general (n = 2 gives 0
    instead of 1), so that case uses 4n - 2^(e+2) + 1 with 2^e <= n.
    """
    if k < 2:
        raise ValueError(f"need k >= 2, got {k}")
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if k == 2:
        return 4 * n - 2 ** (top_bit(n) + 2) + 1
    return gap_p2n_max_form(n, k)


def binom_parity(m: int, j: int) -> int:
    """C(m, j) mod 2, via Lucas: odd iff j is a bitwise submask of m."""
    if m < 0 or j < 0:
        raise ValueError("arguments must be non-negative")
    return int(j & ~m == 0)


def submasks(m: int):
    """All j with binom_parity(m, j) == 1, in ascending order."""
    out = []
    j = m
    while True:
        out.append(j)
        if j == 0:
            break
        j = (j - 1) & m
    out.reverse()
    return out
