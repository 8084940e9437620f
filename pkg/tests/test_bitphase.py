import itertools

import pytest
from hypothesis import given, strategies as st

from qimpute.bitphase import Bitstring, exp_phase, pair_phase, partial_sum


def brute_partial(bits, n):
    return sum(bits[:n]) % 2


def brute_pair(bits, n, m):
    total = 0
    for i in range(1, n + 1):
        for j in range(i + 1, m + 1):
            total += bits[i - 1] * bits[j - 1]
    return total % 2


def brute_exp(bits, limits):
    """Direct enumeration of increasing index tuples below the limits."""
    width = len(bits)
    order = len(limits)
    total = 0
    for combo in itertools.combinations(range(1, width + 1), order):
        if all(combo[k] <= limits[k] for k in range(order)):
            product = 1
            for a in combo:
                product *= bits[a - 1]
            total += product
    return total % 2


class TestBitstring:
    def test_msb_first_convention(self):
        b = Bitstring(0b101, 3)
        assert b.bits() == (1, 0, 1)
        assert b.bit(1) == 1 and b.bit(2) == 0 and b.bit(3) == 1
        assert str(b) == "101"

    def test_value_range_checked(self):
        with pytest.raises(ValueError):
            Bitstring(8, 3)
        with pytest.raises(ValueError):
            Bitstring(-1, 3)
        with pytest.raises(ValueError):
            Bitstring(0, 0)

    def test_bit_index_checked(self):
        with pytest.raises(IndexError):
            Bitstring(0, 3).bit(4)


class TestPartialSum:
    def test_worked_example(self):
        b = Bitstring(0b101, 3)
        assert partial_sum(b, 0) == 0
        assert partial_sum(b, 1) == 1
        assert partial_sum(b, 2) == 1
        assert partial_sum(b, 3) == 0

    def test_all_zero_bitstring(self):
        b = Bitstring(0, 4)
        assert all(partial_sum(b, n) == 0 for n in range(5))

    def test_matches_popcount_parity_exhaustively(self):
        for width in range(1, 9):
            for value in range(1 << width):
                b = Bitstring(value, width)
                for n in range(width + 1):
                    assert partial_sum(b, n) == brute_partial(b.bits(), n)

    def test_prefix_too_long(self):
        with pytest.raises(IndexError):
            partial_sum(Bitstring(0, 3), 4)

    @given(st.integers(1, 16), st.data())
    def test_pure_and_binary(self, width, data):
        value = data.draw(st.integers(0, (1 << width) - 1))
        n = data.draw(st.integers(0, width))
        b = Bitstring(value, width)
        first = partial_sum(b, n)
        assert first in (0, 1)
        assert partial_sum(b, n) == first


class TestPairPhase:
    def test_two_bit_product(self):
        assert pair_phase(Bitstring(0b11, 2), 1, 2) == 1

    def test_hand_enumerated_example(self):
        # pairs (1,2), (1,3), (2,3) on 101 give products 0, 1, 0
        assert pair_phase(Bitstring(0b101, 3), 2, 3) == 1

    def test_all_zero(self):
        b = Bitstring(0, 4)
        for n in range(1, 4):
            for m in range(n + 1, 5):
                assert pair_phase(b, n, m) == 0

    def test_matches_brute_force(self):
        for width in range(2, 7):
            for value in range(1 << width):
                b = Bitstring(value, width)
                for n in range(1, width):
                    for m in range(n + 1, width + 1):
                        assert pair_phase(b, n, m) == brute_pair(b.bits(), n, m)

    def test_bad_ranges(self):
        b = Bitstring(0, 3)
        with pytest.raises(IndexError):
            pair_phase(b, 2, 2)
        with pytest.raises(IndexError):
            pair_phase(b, 1, 4)
        with pytest.raises(IndexError):
            pair_phase(b, 0, 2)


class TestExpPhase:
    def test_order_one_reduces_to_partial_sum(self):
        for width in range(1, 7):
            for value in range(1 << width):
                b = Bitstring(value, width)
                for n in range(1, width + 1):
                    assert exp_phase(b, (n,)) == partial_sum(b, n)

    def test_order_two_reduces_to_pair_phase(self):
        for width in range(2, 7):
            for value in range(1 << width):
                b = Bitstring(value, width)
                for n in range(1, width):
                    for m in range(n + 1, width + 1):
                        assert exp_phase(b, (n, m)) == pair_phase(b, n, m)

    def test_single_triple(self):
        assert exp_phase(Bitstring(0b111, 3), (1, 2, 3)) == 1

    def test_matches_brute_force(self):
        for width in range(1, 6):
            for value in range(1 << width):
                b = Bitstring(value, width)
                for order in range(1, width + 1):
                    for limits in itertools.combinations_with_replacement(
                        range(1, width + 1), order
                    ):
                        assert exp_phase(b, limits) == brute_exp(b.bits(), limits)

    def test_bad_limits(self):
        b = Bitstring(0b101, 3)
        with pytest.raises(IndexError):
            exp_phase(b, ())
        with pytest.raises(IndexError):
            exp_phase(b, (2, 1))
        with pytest.raises(IndexError):
            exp_phase(b, (1, 4))
        with pytest.raises(IndexError):
            exp_phase(b, (1, 2, 3, 3))
