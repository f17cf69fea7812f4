"""Toeplitz skeletons: validation, generated sequences, censuses."""

import pytest

from shiftrank.toeplitz import (
    Stage,
    ToeplitzSkeleton,
    ToeplitzSystem,
    doubling_skeleton,
    full_fill_skeleton,
    rank_family_skeleton,
    toeplitz_property,
)


def test_doubling_skeleton_is_period_doubling_sequence():
    system = ToeplitzSystem("toeplitz-doubling", doubling_skeleton(16), prefix_length=4096)
    # independent generation through the substitution 0 -> 01, 1 -> 00
    w = "0"
    while len(w) < 4096:
        w = "".join("01" if c == "0" else "00" for c in w)
    assert system.prefix == w[:4096]


def test_prefix_positions_eventually_periodic():
    system = ToeplitzSystem("toeplitz-doubling", doubling_skeleton(16), prefix_length=4096)
    assert toeplitz_property(system.prefix, [2**k for k in range(1, 13)], 4096)


def test_rank_family_property_and_alphabet():
    sk = rank_family_skeleton(3, depth=10)
    system = ToeplitzSystem("toeplitz-rank-3", sk, prefix_length=4096)
    assert system.alphabet_size == 3
    assert toeplitz_property(system.prefix, [3**k for k in range(1, 9)], 4096)


def test_skeleton_conflicts_rejected():
    with pytest.raises(ValueError):
        # residue 0 mod 4 already pinned by 0 mod 2
        ToeplitzSkeleton((Stage(2, ((0, "0"),)), Stage(4, ((0, "1"),))))
    with pytest.raises(ValueError):
        # periods must grow through divisibility
        ToeplitzSkeleton((Stage(2, ((0, "0"),)), Stage(3, ((1, "1"),))))


def test_full_fill_is_periodic_and_all_ranks_one():
    sk = full_fill_skeleton()
    assert sk.periodic
    system = ToeplitzSystem("degenerate", sk, prefix_length=64)
    report = system.rank_report()
    assert (report.r_c.value, report.r_m.value, report.r_M.value) == (1, 1, 1)


def test_permanently_unfilled_position_rejected():
    sk = ToeplitzSkeleton((Stage(2, ((0, "0"),)),))  # odd positions never filled
    with pytest.raises(ValueError):
        sk.prefix(8)


def test_doubling_census_ranks():
    system = ToeplitzSystem("toeplitz-doubling", doubling_skeleton(16))
    report = system.rank_report()
    assert report.r_m.value == 1
    assert report.r_M.value == 2
    assert report.r_c.value == 1
    assert report.r_m.kind.value == "stabilized"


def test_rank_family_censuses_hit_their_targets():
    for r, depth in ((2, 16), (3, 10)):
        system = ToeplitzSystem(f"toeplitz-rank-{r}", rank_family_skeleton(r, depth))
        report = system.rank_report()
        assert report.r_m.value == 1, r
        assert report.r_M.value == r, r


def test_language_from_prefix_is_factor_closed():
    system = ToeplitzSystem("toeplitz-doubling", doubling_skeleton(16), prefix_length=4096)
    for n in (2, 4, 7):
        shorter = set(system.language(n - 1))
        for w in system.language(n):
            assert w[:-1] in shorter and w[1:] in shorter


def test_toeplitz_from_skeleton_doubling_prefix():
    from shiftrank.catalog import toeplitz_from_skeleton

    periods = [2**k for k in range(1, 13)]
    fillers = {
        2**k: [(2 ** (k - 1) - 1, "0" if k % 2 == 1 else "1")] for k in range(1, 13)
    }
    system = toeplitz_from_skeleton(periods, fillers, name="by-hand", prefix_length=2048)
    reference = ToeplitzSystem("builder", doubling_skeleton(12), prefix_length=2048)
    assert system.prefix == reference.prefix


def test_toeplitz_from_skeleton_rejects_conflicts():
    from shiftrank.catalog import toeplitz_from_skeleton

    with pytest.raises(ValueError):
        toeplitz_from_skeleton([2, 4], {2: [(0, "0")], 4: [(2, "1")]}, prefix_length=16)
