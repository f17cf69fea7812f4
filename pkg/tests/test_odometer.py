"""Odometer factor: columns, de-substitution, residues, fiber censuses."""

import pytest
from hypothesis import given, settings, strategies as st

from shiftrank.odometer import (
    OdometerResidue,
    census_along_path,
    column_number,
    column_sets,
    desubstitute,
    fiber_census,
    initial_state,
    lift_state,
    odometer_successor,
    residue_of_window,
)
from shiftrank.substitution import Substitution, expand, language, seed_pairs, seed_window
from shiftrank.words import CenteredWord, shift_window

TM = Substitution(("01", "10"))
PD = Substitution(("01", "00"))
ONE = Substitution(("00",))


# -- columns ------------------------------------------------------------------


def test_thue_morse_columns_depth_one():
    cols = column_sets(TM, 1).columns
    assert cols == (frozenset("01"), frozenset("01"))


def test_period_doubling_columns_depth_one():
    cols = column_sets(PD, 1).columns
    assert cols == (frozenset("0"), frozenset("01"))


def test_one_letter_columns():
    assert all(c == frozenset("0") for c in column_sets(ONE, 3).columns)


def test_column_number_values():
    assert column_number(TM, 6)[0] == 2 and column_number(TM, 6)[2]
    c, witness, stab = column_number(PD, 6)
    assert (c, witness, stab) == (1, 1, True)
    assert column_number(ONE, 3)[0] == 1


# -- de-substitution ----------------------------------------------------------


def test_desubstitute_depth_zero_is_identity():
    w = CenteredWord("0110", 0)
    assert desubstitute(TM, w, 0) == {(0, w)}


def test_desubstitute_expanded_block():
    w = CenteredWord("0110", 0)  # the square image of 0 aligned at the origin
    results = desubstitute(TM, w, 2)
    assert (0, CenteredWord("0", 0)) in results


def _brute_force_one_level(s, w):
    """Oracle: try every cut and every admissible preimage word by expansion."""
    q = s.constant_length
    out = set()
    for cut in range(q):
        m_lo = (w.left + cut) // q
        m_hi = (w.right + cut) // q
        for v in language(s, m_hi - m_lo + 1):
            cand = CenteredWord(v, m_lo)
            image = expand(s, cand, 1, cut)
            if image.covers(w.left, w.right) and image.segment(w.left, w.right) == w.symbols:
                out.add((cut, cand))
    return out


def test_period_doubling_double_zero_both_cuts():
    # exhaustive match over both cuts: the image of 1 is literally 00, so the
    # aligned cut is realizable too, alongside the straddling one
    w = CenteredWord("00", 0)
    oracle = _brute_force_one_level(PD, w)
    assert desubstitute(PD, w, 1) == oracle
    assert {c for c, _ in oracle} == {0, 1}
    assert (0, CenteredWord("1", 0)) in oracle
    assert (1, CenteredWord("10", 0)) in oracle


@given(st.sampled_from(language(TM, 9)), st.integers(-4, 0))
@settings(max_examples=40, deadline=None)
def test_desubstitute_matches_brute_force_on_thue_morse(word, left):
    w = CenteredWord(word, left)
    assert desubstitute(TM, w, 1) == _brute_force_one_level(TM, w)


def test_inadmissible_window_gives_empty_results():
    w = CenteredWord("000", -1)
    assert desubstitute(TM, w, 1) == set()
    assert residue_of_window(TM, w, 2) == frozenset()


# -- residues -----------------------------------------------------------------


def test_depth_zero_residue():
    w = CenteredWord("01", 0)
    assert residue_of_window(TM, w, 0) == frozenset({OdometerResidue(2, 0, 0)})


def test_wide_seed_window_has_unique_residue():
    seed = seed_pairs(TM)[0]
    w = seed_window(TM, seed, 32)
    residues = residue_of_window(TM, w, 3)
    assert len(residues) == 1
    assert next(iter(residues)).value == 0  # fixed points sit over the zero path


def test_successor_examples():
    assert odometer_successor(OdometerResidue(2, 3, 7)).value == 0
    assert odometer_successor(OdometerResidue(2, 3, 3)).value == 4


def test_equivariance_shift_is_successor():
    # the finite form of the factor map commuting with the action
    seed = seed_pairs(TM)[0]
    w = seed_window(TM, seed, 64)
    base = residue_of_window(TM, w.restrict(-40, 40), 3)
    shifted = residue_of_window(TM, shift_window(w, 1).restrict(-40, 40), 3)
    assert len(base) == 1 and len(shifted) == 1
    assert next(iter(shifted)) == odometer_successor(next(iter(base)))


def test_equivariance_along_an_orbit_stretch():
    seed = seed_pairs(TM)[2]
    w = seed_window(TM, seed, 96)
    current = residue_of_window(TM, w.restrict(-48, 48), 3)
    assert len(current) == 1
    r = next(iter(current))
    for g in range(1, 9):
        got = residue_of_window(TM, shift_window(w, g).restrict(-48, 48), 3)
        r = odometer_successor(r)
        assert got == frozenset({r})


# -- fiber census -------------------------------------------------------------


def test_thue_morse_boundary_fiber_is_four():
    census = fiber_census(TM, OdometerResidue(2, 3, 0), 64)
    assert census.count == 4
    assert census.stabilized
    assert len(census.representatives) == 4


def test_thue_morse_generic_fiber_is_two():
    census = fiber_census(TM, OdometerResidue(2, 3, 5), 64)
    assert census.count == 2
    assert census.stabilized


def test_one_letter_fiber_is_one():
    census = fiber_census(ONE, OdometerResidue(2, 2, 1), 16)
    assert census.count == 1


def test_period_doubling_fibers():
    assert fiber_census(PD, OdometerResidue(2, 3, 0), 64).count == 2
    assert fiber_census(PD, OdometerResidue(2, 3, 5), 64).count == 1


def test_census_rejects_small_radius():
    with pytest.raises(ValueError):
        fiber_census(TM, OdometerResidue(2, 4, 0), 8)


def test_census_representatives_share_residue():
    census = fiber_census(TM, OdometerResidue(2, 2, 1), 32)
    for rep in census.representatives:
        residues = residue_of_window(TM, rep, 2)
        assert OdometerResidue(2, 2, 1) in residues


# -- monotone census properties ------------------------------------------------


@given(st.lists(st.integers(0, 1), min_size=0, max_size=4))
@settings(max_examples=24, deadline=None)
def test_counts_nonincreasing_along_paths(digits):
    census = census_along_path(TM, tuple(digits), 16, extend_periodically=False)
    counts = census.counts
    assert all(a >= b for a, b in zip(counts, counts[1:]))


@given(st.lists(st.integers(0, 1), min_size=0, max_size=3))
@settings(max_examples=16, deadline=None)
def test_children_cover_parent_survivor_windows(digits):
    # every window alive on a path stays alive along at least one next digit,
    # so the children's window sets cover the parent's
    from shiftrank.odometer import base_windows

    radius = 16
    state = initial_state(TM, radius)
    for d in digits:
        state = lift_state(TM, state, d, radius)
    parent = base_windows(TM, state, radius)
    children = set()
    for d in range(2):
        children |= base_windows(TM, lift_state(TM, state, d, radius), radius)
    assert parent == children


@given(st.lists(st.integers(0, 1), min_size=1, max_size=4), st.integers(4, 12))
@settings(max_examples=24, deadline=None)
def test_radius_refines_classes(digits, radius):
    small = census_along_path(TM, tuple(digits), radius, extend_periodically=False)
    big = census_along_path(TM, tuple(digits), radius + 1, extend_periodically=False)
    assert big.counts[-1] >= small.counts[-1]
    # each wide window restricts onto a surviving narrow window
    narrowed = {w[1:-1] for w in big.windows}
    assert narrowed <= set(small.windows)
