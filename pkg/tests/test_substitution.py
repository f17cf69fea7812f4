"""Substitutions: primitivity, language generation, seeds, expansion, height."""

import itertools

import pytest
from hypothesis import given, strategies as st

from shiftrank.substitution import (
    RegimeError,
    Substitution,
    SubstitutionSystem,
    aperiodicity_check,
    expand,
    height,
    is_primitive,
    language,
    seed_pairs,
    seed_window,
    table_for,
)
from shiftrank.verdicts import VerdictStatus
from shiftrank.words import CenteredWord

TM = Substitution(("01", "10"))
PD = Substitution(("01", "00"))
TERN = Substitution(("012", "120", "201"))
ONE = Substitution(("00",))


def iterate(s: Substitution, letter: str, k: int, cap: int | None = None) -> str:
    w = letter
    for _ in range(k):
        w = s.image(w)
        if cap is not None and len(w) >= cap:
            return w[:cap]
    return w


def factors(word: str, n: int) -> set[str]:
    return {word[i : i + n] for i in range(len(word) - n + 1)}


# -- primitivity ------------------------------------------------------------


def test_thue_morse_is_primitive():
    assert is_primitive(TM)


def test_identity_substitution_is_not_primitive():
    assert not is_primitive(Substitution(("0", "1")))


def test_period_doubling_is_primitive():
    assert is_primitive(PD)


def _conjugate(s: Substitution, image: str) -> Substitution:
    """Relabel symbols by the permutation sending letter i to image[i]."""
    perm = str.maketrans(s.letters, image)
    inv = str.maketrans(image, s.letters)
    rules = [s.rules[s.letters.index(a.translate(inv))].translate(perm) for a in s.letters]
    return Substitution(tuple(rules))


def test_primitivity_invariant_under_relabeling():
    assert is_primitive(_conjugate(PD, "10")) == is_primitive(PD)
    for image in itertools.permutations("012"):
        assert is_primitive(_conjugate(TERN, "".join(image))) == is_primitive(TERN)


# -- language ---------------------------------------------------------------


def test_thue_morse_letters():
    assert language(TM, 1) == ("0", "1")


def test_thue_morse_length_two_against_direct_iteration():
    # independent oracle: collect 2-factors of the sixth image of 0
    expected = factors(iterate(TM, "0", 6), 2)
    assert set(language(TM, 2)) == expected == {"00", "01", "10", "11"}


def test_thue_morse_length_three():
    expected = factors(iterate(TM, "0", 7), 3)
    assert set(language(TM, 3)) == expected
    assert len(language(TM, 3)) == 6 and "000" not in language(TM, 3)


def test_ternary_letters():
    assert language(TERN, 1) == ("0", "1", "2")


def test_language_rejects_non_primitive():
    with pytest.raises(RegimeError):
        language(Substitution(("0", "1")), 2)


def test_language_factor_closed_and_extendable():
    for s in (TM, PD, TERN):
        for n in (2, 3, 5, 8):
            words_n = set(language(s, n))
            words_prev = set(language(s, n - 1)) if n > 1 else set()
            for w in words_n:
                if n > 1:
                    assert w[:-1] in words_prev and w[1:] in words_prev
            longer = set(language(s, n + 1))
            for w in words_n:
                assert any(x[1:] == w for x in longer) or any(x[:-1] == w for x in longer)
                assert any(x.startswith(w) for x in longer)
                assert any(x.endswith(w) for x in longer)


def test_one_letter_language():
    assert language(ONE, 4) == ("0000",)


# -- seeds ------------------------------------------------------------------


def test_thue_morse_seed_pairs():
    seeds = seed_pairs(TM)
    assert len(seeds) == 4
    assert all(p.power == 2 for p in seeds)
    assert {(p.b, p.a) for p in seeds} == {("0", "0"), ("0", "1"), ("1", "0"), ("1", "1")}


def test_one_letter_seed():
    seeds = seed_pairs(ONE)
    assert len(seeds) == 1 and (seeds[0].b, seeds[0].a) == ("0", "0")


def test_period_doubling_seeds():
    seeds = seed_pairs(PD)
    # only 0 is fixed as a first letter; last letters cycle with period 2
    assert all(p.a == "0" for p in seeds)
    assert {p.b for p in seeds} == {"0", "1"}


def test_seed_windows_are_nested():
    for seed in seed_pairs(TM):
        small = seed_window(TM, seed, 10)
        big = seed_window(TM, seed, 40)
        assert big.restrict(-10, 10) == small


def test_seed_window_agrees_with_fixed_point_iteration():
    seed = next(p for p in seed_pairs(TM) if (p.b, p.a) == ("0", "1"))
    w = seed_window(TM, seed, 12)
    left = iterate(TM, "0", 4)  # theta^4(b), its suffix sits at -1 backwards
    right = iterate(TM, "1", 4)
    assert w.segment(0, 12) == right[:13]
    assert w.segment(-12, -1) == left[-12:]


# -- expand -----------------------------------------------------------------


def test_expand_zero_power_is_identity():
    w = CenteredWord("0110", -2)
    assert expand(TM, w, 0, 0) == w


def test_expand_single_letter_examples():
    assert expand(TM, CenteredWord("0", 0), 1, 0) == CenteredWord("01", 0)
    assert expand(TM, CenteredWord("0", 0), 2, 3) == CenteredWord("0110", -3)


def test_expand_rejects_cut_out_of_range():
    with pytest.raises(ValueError):
        expand(TM, CenteredWord("0", 0), 1, 2)


@given(st.integers(0, 3), st.integers(0, 3), st.data())
def test_expand_composition_mixed_radix(j, k, data):
    # theta^(j+k) with cut c equals theta^j at the high digits then theta^k
    # at the low ones: c = (c div q^k) * q^k + (c mod q^k)
    q = 2
    cut = data.draw(st.integers(0, q ** (j + k) - 1))
    word = data.draw(st.sampled_from(language(TM, 3)))
    w = CenteredWord(word, -1)
    direct = expand(TM, w, j + k, cut)
    composed = expand(TM, expand(TM, w, j, cut // q**k), k, cut % q**k)
    assert direct == composed


# -- height -----------------------------------------------------------------


def test_heights_are_one():
    assert height(TM) == 1
    assert height(PD) == 1
    assert height(ONE) == 1


def test_height_against_direct_prefix_oracle():
    # independent computation on a long eighth-image prefix
    import math

    prefix = iterate(TM, "0", 12)
    g = 0
    for n in range(1, len(prefix)):
        if prefix[n] == prefix[0]:
            g = math.gcd(g, n)
    h = g
    while (d := math.gcd(h, 2)) > 1:
        h //= d
    assert h == height(TM) == 1


def test_height_agrees_with_prefix_oracle_and_divides_returns():
    import math

    from shiftrank.catalog import random_exact_substitutions
    from shiftrank.substitution import StabilizationError

    candidates = [TM, PD, TERN] + random_exact_substitutions(8, seed=7)
    for s in candidates:
        try:
            h = height(s)
        except StabilizationError:
            continue
        q = s.constant_length
        seed = next(p for p in seed_pairs(s))
        prefix = iterate(s, seed.a, 6 * seed.power, cap=4096)
        returns = [n for n in range(1, len(prefix)) if prefix[n] == prefix[0]]
        assert returns, "primitive fixed point must revisit its first letter"
        g = 0
        for n in returns:
            g = math.gcd(g, n)
        assert g % h == 0
        assert math.gcd(h, q) == 1


# -- aperiodicity -----------------------------------------------------------


def test_thue_morse_aperiodic_witnessed():
    v = aperiodicity_check(TM, 4)
    assert v.status is VerdictStatus.WITNESSED
    # the complexity witness satisfies p(n) > n
    n = v.certificate["n"]
    assert v.certificate["complexity"] > n


def test_one_letter_refuted_with_period_one():
    v = aperiodicity_check(ONE, 4)
    assert v.status is VerdictStatus.REFUTED
    assert v.annotations["period"] == 1


def test_ternary_aperiodic():
    assert aperiodicity_check(TERN, 4).status is VerdictStatus.WITNESSED


def test_periodic_system_with_growing_low_complexity_is_refuted():
    # fixed point (001)^inf has p(1)=2>1; a naive p(n)>n check would pass it
    s = Substitution(("001", "001"))
    v = aperiodicity_check(s, 8)
    assert v.status is VerdictStatus.REFUTED
    assert v.annotations["period"] == 3


def test_alternating_periodic_refuted():
    s = Substitution(("01", "01"))
    v = aperiodicity_check(s, 8)
    assert v.status is VerdictStatus.REFUTED
    assert v.annotations["period"] == 2


# -- system wrapper ---------------------------------------------------------


def test_text_roundtrip_and_hash():
    text = TM.to_text()
    assert text == "0 -> 01\n1 -> 10"
    assert Substitution.from_text(text) == TM
    assert Substitution.from_text("0 -> 01; 1 -> 10") == TM
    sys1 = SubstitutionSystem("a", TM)
    sys2 = SubstitutionSystem("b", TM)
    assert sys1.spec_hash == sys2.spec_hash
    assert sys1.spec_hash != SubstitutionSystem("c", PD).spec_hash


def test_memoized_language_table_shared():
    assert table_for(TM) is table_for(Substitution(("01", "10")))
