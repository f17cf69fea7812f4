"""Rank estimates, predicted multivariate profiles, and factor utilities.

The three ranks measure fiber sizes of the odometer factor map: the smallest
fiber, the largest fiber, and the largest pairwise non-proximal subset of a
fiber.  In the exact regime (constant length, primitive, aperiodic, height
one) the coincidence rank has a closed form through the pair graph, while
minimal and maximal rank come from digit-path censuses stabilized over depth
and radius.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Callable, Mapping

from .odometer import (
    PathState,
    base_windows,
    column_number,
    column_sets,
    initial_state,
    lift_state,
)
from .oracles import PairClass, proximal_pair_exact
from .substitution import (
    RegimeError,
    StabilizationError,
    Substitution,
    SubstitutionSystem,
    aperiodicity_check,
    height,
    is_primitive,
)
from .verdicts import VerdictStatus


class EstimateKind(enum.Enum):
    EXACT = "exact"
    STABILIZED = "stabilized"
    LOWER_BOUND = "lower-bound"


@dataclass(frozen=True)
class Estimate:
    """A rank value with provenance.  ``value`` None encodes infinity."""

    value: int | None
    kind: EstimateKind
    evidence: Mapping[str, object]

    @property
    def infinite(self) -> bool:
        return self.value is None

    def to_payload(self) -> dict:
        return {
            "value": self.value,
            "kind": self.kind.value,
            "evidence": dict(self.evidence),
        }


def _le(a: int | None, b: int | None) -> bool:
    """a <= b with None as infinity."""
    if b is None:
        return True
    return a is not None and a <= b


@dataclass(frozen=True)
class RankReport:
    system: str
    r_c: Estimate
    r_m: Estimate
    r_M: Estimate
    flags: Mapping[str, object]

    def __post_init__(self) -> None:
        if not (_le(self.r_c.value, self.r_m.value) and _le(self.r_m.value, self.r_M.value)):
            raise ValueError(
                f"rank chain violated for {self.system}: "
                f"{self.r_c.value} <= {self.r_m.value} <= {self.r_M.value} fails"
            )

    @property
    def almost_automorphic(self) -> bool:
        """Some fiber of the equicontinuous factor is a singleton."""
        return self.r_m.value == 1

    def to_payload(self) -> dict:
        return {
            "system": self.system,
            "r_c": self.r_c.to_payload(),
            "r_m": self.r_m.to_payload(),
            "r_M": self.r_M.to_payload(),
            "almost_automorphic": self.almost_automorphic,
            "flags": dict(self.flags),
        }


# --------------------------------------------------------------------------
# Digit-tree census scans


@dataclass(frozen=True)
class _PathValue:
    value: int
    stabilized: bool
    digits: tuple[int, ...]


def _follow(
    s: Substitution,
    state: PathState,
    radius: int,
    pattern: tuple[int, ...],
    plateau: int,
    extra_depth: int,
) -> _PathValue:
    counts = [len(base_windows(s, state, radius))]
    digits: list[int] = []
    cap = state.depth + extra_depth
    i = 0
    while state.depth < cap:
        if len(counts) > plateau and len(set(counts[-plateau - 1 :])) == 1:
            return _PathValue(counts[-1], True, tuple(digits))
        d = pattern[i % len(pattern)]
        state = lift_state(s, state, d, radius)
        digits.append(d)
        counts.append(len(base_windows(s, state, radius)))
        i += 1
    stable = len(counts) > plateau and len(set(counts[-plateau - 1 :])) == 1
    return _PathValue(counts[-1], stable, tuple(digits))


def _continuations(q: int, prefix: tuple[int, ...], policy: str) -> list[tuple[int, ...]]:
    pats: list[tuple[int, ...]] = []
    if policy == "max":
        pats.append((0,))
        pats.append((q - 1,))
    else:
        pats.append((1 % q, 0))
    if prefix and len(set(prefix)) > 1:
        pats.append(prefix)
    out = []
    for p in pats:
        if p not in out:
            out.append(p)
    return out


def _tree_extreme(
    s: Substitution,
    policy: str,
    branch_depth: int,
    radius: int,
    plateau: int = 3,
    extra_depth: int = 18,
) -> tuple[int, bool]:
    """Extreme stabilized window count over digit paths.

    Branches over all digits to ``branch_depth`` (sampling every residue of
    that depth), then follows canonical continuations: constant digits reach
    the integer points where boundary fibers live, mixed periodic patterns
    reach generic points.  Counts only decrease along a path, so for the
    maximum a subtree whose current count cannot beat the best is pruned.
    """
    q = s.require_constant_length()
    best: int | None = None
    all_stable = True

    def consider(pv: _PathValue) -> None:
        nonlocal best, all_stable
        if best is None:
            best = pv.value
            all_stable = pv.stabilized
        else:
            better = pv.value > best if policy == "max" else pv.value < best
            if better:
                best = pv.value
                all_stable = pv.stabilized
            elif pv.value == best:
                all_stable = all_stable or pv.stabilized

    def walk(state: PathState, prefix: tuple[int, ...]) -> None:
        nonlocal best
        if policy == "max" and best is not None:
            if len(base_windows(s, state, radius)) <= best:
                return
        if policy == "min" and best == 1:
            return
        if state.depth >= branch_depth:
            for pattern in _continuations(q, prefix, policy):
                consider(_follow(s, state, radius, pattern, plateau, extra_depth))
            return
        for d in range(q):
            walk(lift_state(s, state, d, radius), prefix + (d,))

    walk(initial_state(s, radius), ())
    assert best is not None
    return best, all_stable


def _exact_regime_flags(s: Substitution) -> dict:
    flags: dict[str, object] = {
        "primitive": is_primitive(s),
        "constant_length": s.constant_length,
    }
    if not flags["primitive"] or s.constant_length is None:
        flags["exact_regime"] = False
        return flags
    aper = aperiodicity_check(s)
    flags["aperiodic"] = aper.status.value
    if aper.status is VerdictStatus.REFUTED:
        flags["period"] = aper.annotations.get("period")
        flags["exact_regime"] = False
        flags["periodic"] = True
        return flags
    try:
        h = height(s)
    except (StabilizationError, RegimeError):
        h = None
    flags["height"] = h
    flags["exact_regime"] = aper.status is VerdictStatus.WITNESSED and h == 1
    return flags


def coincidence_rank(s: Substitution) -> Estimate:
    """Largest pairwise-distal subset of a minimal column, via the pair graph."""
    flags = _exact_regime_flags(s)
    if not flags.get("exact_regime"):
        return Estimate(
            1,
            EstimateKind.LOWER_BOUND,
            {"method": "pair-graph", "note": "outside the exact regime; trivial bound"},
        )
    c, depth_witness, _ = column_number(s)
    structure = column_sets(s, depth_witness)
    col_index, column = min(
        enumerate(structure.columns), key=lambda pair: (len(pair[1]), pair[0])
    )
    symbols = sorted(column)
    value = 1
    for size in range(len(symbols), 0, -1):
        found = False
        for subset in itertools.combinations(symbols, size):
            if all(
                proximal_pair_exact(s, a, b) is PairClass.DISTAL
                for a, b in itertools.combinations(subset, 2)
            ):
                value = size
                found = True
                break
        if found:
            break
    return Estimate(
        value,
        EstimateKind.EXACT,
        {
            "method": "pair-graph",
            "column_depth": depth_witness,
            "column_index": col_index,
            "column": "".join(symbols),
        },
    )


def _census_rank(
    s: Substitution, policy: str, depth_max: int, radius_max: int
) -> Estimate:
    q = s.require_constant_length()
    flags = _exact_regime_flags(s)
    if not flags.get("exact_regime"):
        raise RegimeError("census ranks require the exact regime")
    small_v, small_st = _tree_extreme(
        s, policy, max(1, depth_max - 1), max(q, radius_max // 2)
    )
    big_v, big_st = _tree_extreme(s, policy, depth_max, radius_max)
    kind = (
        EstimateKind.STABILIZED
        if small_v == big_v and small_st and big_st
        else EstimateKind.LOWER_BOUND
    )
    return Estimate(
        big_v,
        kind,
        {
            "method": "fiber-census",
            "policy": policy,
            "branch_depth": depth_max,
            "radius": radius_max,
            "confirmation": {"branch_depth": depth_max - 1, "radius": radius_max // 2, "value": small_v},
        },
    )


def minimal_rank(s: Substitution, depth_max: int = 4, radius_max: int = 64) -> Estimate:
    """Smallest stabilized fiber census over sampled digit paths."""
    return _census_rank(s, "min", depth_max, radius_max)


def maximal_rank(s: Substitution, depth_max: int = 4, radius_max: int = 64) -> Estimate:
    """Largest stabilized fiber census, boundary digit paths included."""
    return _census_rank(s, "max", depth_max, radius_max)


def substitution_rank_report(
    system: SubstitutionSystem, depth_max: int = 4, radius_max: int = 64
) -> RankReport:
    s = system.substitution
    flags = _exact_regime_flags(s)
    if flags.get("periodic"):
        ev = {"method": "periodic-orbit", "period": flags.get("period")}
        one = Estimate(1, EstimateKind.EXACT, ev)
        return RankReport(system.name, one, one, one, flags)
    if not flags.get("exact_regime"):
        raise RegimeError(
            f"{system.name}: rank pipelines need the exact regime "
            "(constant length, primitive, aperiodic, height 1) or a periodic system"
        )
    return RankReport(
        system.name,
        coincidence_rank(s),
        minimal_rank(s, depth_max, radius_max),
        maximal_rank(s, depth_max, radius_max),
        flags,
    )


def equicontinuous_rank_report(name: str) -> RankReport:
    """Ranks of a system that is its own equicontinuous factor, e.g. an odometer."""
    one = Estimate(1, EstimateKind.EXACT, {"method": "equicontinuous-by-construction"})
    return RankReport(name, one, one, one, {"equicontinuous": True})


def rank_report(system, depth_max: int = 4, radius_max: int = 64) -> RankReport:
    """Dispatch to the right rank pipeline for the system's construction."""
    if isinstance(system, SubstitutionSystem):
        return substitution_rank_report(system, depth_max, radius_max)
    reporter: Callable | None = getattr(system, "rank_report", None)
    if reporter is not None:
        return reporter(depth_max, radius_max)
    raise TypeError(f"no rank pipeline for {type(system).__name__}")


# --------------------------------------------------------------------------
# Predicted multivariate profile


@dataclass(frozen=True)
class ProfileRow:
    m: int
    m_equicontinuous: bool
    m_sensitive: bool
    compactly_m_sensitive: bool
    cover_m_equicontinuous: bool

    def __post_init__(self) -> None:
        if self.m_sensitive == self.m_equicontinuous:
            raise ValueError("m-sensitivity must be the negation of m-equicontinuity")
        if self.compactly_m_sensitive == self.cover_m_equicontinuous:
            raise ValueError("compact sensitivity must be the negation of cover equicontinuity")


@dataclass(frozen=True)
class MultivariateProfile:
    system: str
    rows: tuple[ProfileRow, ...]

    def row(self, m: int) -> ProfileRow:
        for r in self.rows:
            if r.m == m:
                return r
        raise KeyError(m)

    def to_payload(self) -> dict:
        return {
            "system": self.system,
            "profile": {
                str(r.m): {
                    "m_equicontinuous": r.m_equicontinuous,
                    "m_sensitive": r.m_sensitive,
                    "compactly_m_sensitive": r.compactly_m_sensitive,
                    "cover_m_equicontinuous": r.cover_m_equicontinuous,
                }
                for r in self.rows
            },
        }


def predict_profile(report: RankReport, m_max: int) -> MultivariateProfile:
    """Apply the rank characterizations: sensitivity tracks the maximal rank,
    block sensitivity tracks the coincidence rank."""
    if m_max < 2:
        raise ValueError("profile needs m_max >= 2")
    r_M, r_c = report.r_M.value, report.r_c.value
    rows = []
    for m in range(2, m_max + 1):
        sensitive = r_M is None or r_M >= m
        compact = r_c is None or r_c >= m
        rows.append(
            ProfileRow(
                m,
                m_equicontinuous=not sensitive,
                m_sensitive=sensitive,
                compactly_m_sensitive=compact,
                cover_m_equicontinuous=not compact,
            )
        )
    return MultivariateProfile(report.system, tuple(rows))


# --------------------------------------------------------------------------
# Sliding-block factors


class FactorLanguage:
    """Image language of a sliding-block code applied to a source system.

    The local rule maps every admissible source word of its window length to
    one output symbol; image words of length n are read off source words of
    length n + window - 1, so the result is factor-closed by construction.
    """

    def __init__(self, source, rule: Mapping[str, str], name: str | None = None):
        widths = {len(k) for k in rule}
        if len(widths) != 1:
            raise ValueError("all rule keys must share one window length")
        self.window = widths.pop()
        if self.window < 1:
            raise ValueError("rule window must be positive")
        for v in rule.values():
            if len(v) != 1:
                raise ValueError("rule values must be single symbols")
        missing = [w for w in source.language(self.window) if w not in rule]
        if missing:
            raise ValueError(f"partial rule: no image for {missing[:3]}...")
        self.source = source
        self.rule = dict(rule)
        self.name = name or f"{source.name}-factor"
        self._cache: dict[int, tuple[str, ...]] = {}

    @property
    def alphabet_size(self) -> int:
        return len(set(self.rule.values()))

    @property
    def spec_hash(self) -> str:
        import hashlib

        text = self.source.spec_hash + repr(sorted(self.rule.items()))
        return hashlib.sha256(text.encode()).hexdigest()[:16]

    def apply(self, word: str) -> str:
        """Slide the rule along a source word."""
        w = self.window
        if len(word) < w:
            raise ValueError("word shorter than the rule window")
        return "".join(self.rule[word[i : i + w]] for i in range(len(word) - w + 1))

    def language(self, n: int) -> tuple[str, ...]:
        if n not in self._cache:
            src = self.source.language(n + self.window - 1)
            self._cache[n] = tuple(sorted({self.apply(w) for w in src}))
        return self._cache[n]


def sliding_block_factor(source, rule: Mapping[str, str], name: str | None = None) -> FactorLanguage:
    return FactorLanguage(source, rule, name)


def check_extension_inequality(
    x_report: RankReport, y_report: RankReport, proximal: bool
) -> bool:
    """For a proximal extension X -> Y: r_c(Y) <= r_c(X) <= r_m(Y) on the estimates."""
    if not proximal:
        raise ValueError("the inequality chain is only asserted for proximal extensions")
    return _le(y_report.r_c.value, x_report.r_c.value) and _le(
        x_report.r_c.value, y_report.r_m.value
    )
