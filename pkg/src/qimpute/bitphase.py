"""Integer parity-phase kernels for input bitstrings.

Every sign flip in the analytic circuit formulas reduces to a mod-2 sum of
bits (or of bit products) of the input configuration.  The functions here
compute those parities with exact integer arithmetic only, reducing mod 2
at the end, so they are cheap in hot loops and trivially thread safe.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

__all__ = ["Bitstring", "MAX_WIDTH", "partial_sum", "pair_phase", "exp_phase"]

# 2**width amplitude sweeps exhaust memory well before this bound matters.
MAX_WIDTH = 30


@dataclass(frozen=True)
class Bitstring:
    """An N-bit input configuration.

    ``value`` is the encoded integer n and ``width`` the number of input
    bits N.  Bit b_1 is the most significant bit of the N-bit
    representation of n, so value=0b101 with width 3 has b_1=1, b_2=0,
    b_3=1.  Every module in this package inherits this ordering.
    """

    value: int
    width: int

    def __post_init__(self) -> None:
        if self.width < 1:
            raise ValueError(f"width must be >= 1, got {self.width}")
        if self.width > MAX_WIDTH:
            raise ValueError(f"width {self.width} exceeds supported maximum {MAX_WIDTH}")
        if not 0 <= self.value < (1 << self.width):
            raise ValueError(f"value {self.value} out of range for width {self.width}")

    def bit(self, i: int) -> int:
        """Return b_i for 1 <= i <= width."""
        if not 1 <= i <= self.width:
            raise IndexError(f"bit index {i} outside 1..{self.width}")
        return (self.value >> (self.width - i)) & 1

    def bits(self) -> tuple[int, ...]:
        """All bits in order (b_1, ..., b_N)."""
        return tuple(self.bit(i) for i in range(1, self.width + 1))

    def __str__(self) -> str:
        return format(self.value, f"0{self.width}b")


def partial_sum(b: Bitstring, n: int) -> int:
    """Parity of the first n bits of ``b``; n=0 gives 0 by definition."""
    if not 0 <= n <= b.width:
        raise IndexError(f"prefix length {n} outside 0..{b.width}")
    if n == 0:
        return 0
    return (b.value >> (b.width - n)).bit_count() & 1


def pair_phase(b: Bitstring, n: int, m: int) -> int:
    """Parity of the double sum of bit products b_i*b_j with i<=n, i<j<=m."""
    if not 1 <= n < m <= b.width:
        raise IndexError(f"pair limits ({n}, {m}) violate 1 <= n < m <= {b.width}")
    total = 0
    for i in range(1, n + 1):
        if b.bit(i):
            for j in range(i + 1, m + 1):
                total += b.bit(j)
    return total & 1


def exp_phase(b: Bitstring, limits: Sequence[int]) -> int:
    """Parity of the nested ordered bit-product sum with the given limits.

    ``limits`` holds the J upper summation limits (n_1, ..., n_J): the sum
    runs over index tuples a_1 < a_2 < ... < a_J with a_k <= n_k, adding
    the product b_{a_1}...b_{a_J} for each tuple.  A single limit reduces
    to ``partial_sum`` and two limits to ``pair_phase``.
    """
    order = len(limits)
    if not 1 <= order <= b.width:
        raise IndexError(f"order {order} outside 1..{b.width}")
    for k, limit in enumerate(limits):
        if not 1 <= limit <= b.width:
            raise IndexError(f"limit n_{k + 1}={limit} outside 1..{b.width}")
        if k > 0 and limit < limits[k - 1]:
            raise IndexError(f"limits must be nondecreasing, got {tuple(limits)}")

    # nxt[s] = parity of the number of valid tuples for the remaining
    # levels when the next index may start at s.  Filled back to front.
    nxt = [1] * (b.width + 2)
    for k in range(order - 1, -1, -1):
        cur = [0] * (b.width + 2)
        for start in range(b.width, 0, -1):
            acc = 0
            for a in range(start, limits[k] + 1):
                if b.bit(a):
                    acc ^= nxt[a + 1]
            cur[start] = acc
        nxt = cur
    return nxt[1]
