import random

import pytest

from ctxgrid.rng import RngStream, derive, mix64


def test_splitmix_reference_vector():
    # Known splitmix64 outputs for seed 0.
    s = RngStream(0)
    assert s.next_u64() == 0xE220A8397B1DCDAF
    assert s.next_u64() == 0x6E789E6AA1B965F4
    assert s.next_u64() == 0x06C45D188009454F


def test_derive_is_pure():
    a = derive(123, 4, 5)
    b = derive(123, 4, 5)
    assert a.state == b.state
    assert [a.next_u64() for _ in range(8)] == [b.next_u64() for _ in range(8)]


def test_derive_golden_values():
    # Frozen at first implementation; changing the mix is a breaking change.
    s = derive(0, 0, 0)
    assert s.state == 0x5A7479786138B941
    assert [s.next_u64() for _ in range(4)] == [
        0xC33258E411D54BD7,
        0x292115AB678E36FE,
        0x0C9EAF4D5AAE5438,
        0xA81531FD0E182A66,
    ]


def test_derive_distinct_across_env_indices():
    rnd = random.Random(0)
    for _ in range(1000):
        master = rnd.getrandbits(64)
        assert derive(master, 0, 0).state != derive(master, 1, 0).state


def test_derive_distinct_across_episode_indices():
    rnd = random.Random(1)
    seen = set()
    master = 99
    for env_index in range(10):
        for episode_index in range(100):
            seen.add(derive(master, env_index, episode_index).state)
    assert len(seen) == 1000
    del rnd


def test_next_below_range_and_determinism():
    s = RngStream(42)
    values = [s.next_below(7) for _ in range(2000)]
    assert set(values) <= set(range(7))
    assert set(values) == set(range(7))
    s2 = RngStream(42)
    assert values[:50] == [s2.next_below(7) for _ in range(50)]


def test_next_below_rejects_nonpositive():
    with pytest.raises(ValueError):
        RngStream(0).next_below(0)


def test_next_int_closed_interval():
    s = RngStream(9)
    values = {s.next_int(3, 5) for _ in range(500)}
    assert values == {3, 4, 5}
    assert RngStream(1).next_int(4, 4) == 4


def test_next_float_unit_interval():
    s = RngStream(7)
    for _ in range(5000):
        x = s.next_float()
        assert 0.0 <= x < 1.0


def test_mix64_avalanche_smoke():
    # Flipping one input bit should flip roughly half the output bits.
    flips = bin(mix64(0) ^ mix64(1)).count("1")
    assert 16 <= flips <= 48
