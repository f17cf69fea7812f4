"""The q-adic odometer factor of a constant-length substitution subshift.

Every point of such a subshift de-substitutes: it is the image of another
point under the substitution, shifted by a cut in [0, q).  Iterating this
peels off base-q digits, and the digit stream is exactly the image of the
point in the q-adic odometer.  Everything here is finite and exact: windows
de-substitute to windows, and fibers of the odometer map are approximated by
following a digit path downward while counting the distinct central windows
that stay realizable.
"""

from __future__ import annotations

from dataclasses import dataclass

from .substitution import (
    RegimeError,
    Substitution,
    is_primitive,
    letter_images,
    table_for,
)
from .words import CenteredWord


class FiberInvariantError(RuntimeError):
    """A digit path lost all survivors; fibers of the odometer are never empty."""


@dataclass(frozen=True)
class OdometerResidue:
    """A depth-k approximation of a q-adic integer: its value mod q^k."""

    q: int
    depth: int
    value: int

    def __post_init__(self) -> None:
        if self.q < 2:
            raise ValueError("odometer base must be at least 2")
        if self.depth < 0 or not 0 <= self.value < self.q**self.depth:
            raise ValueError(f"residue {self.value} out of range for depth {self.depth}")

    def digits(self) -> tuple[int, ...]:
        """Base-q digits, least significant first."""
        out = []
        v = self.value
        for _ in range(self.depth):
            out.append(v % self.q)
            v //= self.q
        return tuple(out)


def odometer_successor(r: OdometerResidue) -> OdometerResidue:
    """Adding one in the odometer: increment mod q^depth."""
    return OdometerResidue(r.q, r.depth, (r.value + 1) % (r.q**r.depth))


@dataclass(frozen=True)
class ColumnStructure:
    """Column i of the k-th power: the symbols appearing at position i across all images."""

    depth: int
    columns: tuple[frozenset[str], ...]


def column_sets(s: Substitution, k: int) -> ColumnStructure:
    q = s.require_constant_length()
    if k < 1:
        raise ValueError("column depth must be at least 1")
    images = letter_images(s, k)
    cols = tuple(frozenset(img[i] for img in images) for i in range(q**k))
    return ColumnStructure(k, cols)


def column_number(s: Substitution, k_max: int = 8) -> tuple[int, int, bool]:
    """Minimum column cardinality over powers up to k_max.

    Returns (c, depth_witness, stabilized); stabilized means the minimum was
    unchanged over the last two consecutive powers.  The sequence of minima
    is nonincreasing because columns of higher powers are compositions.
    """
    best = s.alphabet_size
    witness = 0
    prev = None
    stabilized = False
    for k in range(1, k_max + 1):
        structure = column_sets(s, k)
        m = min(len(col) for col in structure.columns)
        if m < best:
            best = m
            witness = k
        elif witness == 0:
            witness = k
        stabilized = prev == best
        prev = best
        if stabilized and best == 1:
            break
    return best, witness, stabilized


def _one_level_desubstitutions(
    s: Substitution, w: CenteredWord
) -> list[tuple[int, CenteredWord]]:
    q = s.require_constant_length()
    table = table_for(s)
    out: list[tuple[int, CenteredWord]] = []
    for c in range(q):
        m_lo = (w.left + c) // q
        m_hi = (w.right + c) // q
        length = m_hi - m_lo + 1
        allowed: list[set[str]] = [set(s.letters) for _ in range(length)]
        for n in range(w.left, w.right + 1):
            m = (n + c) // q
            r = (n + c) % q
            want = w.at(n)
            allowed[m - m_lo] &= {a for a in s.letters if s.rules[s.letters.index(a)][r] == want}
        if any(not a for a in allowed):
            continue
        for v in table.words(length):
            if all(v[i] in allowed[i] for i in range(length)):
                out.append((c, CenteredWord(v, m_lo)))
    return out


def desubstitute(s: Substitution, w: CenteredWord, k: int) -> set[tuple[int, CenteredWord]]:
    """All (cut, preimage) pairs whose k-fold expansion matches w on its window.

    Preimages are restricted to admissible words, so every returned pair is
    realized by an actual point of the subshift.  An empty result means the
    window itself is inadmissible.
    """
    if not is_primitive(s):
        raise RegimeError("de-substitution requires a primitive substitution")
    q = s.require_constant_length()
    if k < 0:
        raise ValueError("depth must be nonnegative")
    if not table_for(s).admits(w.symbols):
        return set()
    if k == 0:
        return {(0, w)}
    out: set[tuple[int, CenteredWord]] = set()
    for c1, v1 in _one_level_desubstitutions(s, w):
        for c2, v2 in desubstitute(s, v1, k - 1):
            out.add((c1 + q * c2, v2))
    return out


def residue_of_window(s: Substitution, w: CenteredWord, k: int) -> frozenset[OdometerResidue]:
    """Odometer residues mod q^k compatible with the window; empty iff inadmissible."""
    q = s.require_constant_length()
    return frozenset(
        OdometerResidue(q, k, cut) for cut, _ in desubstitute(s, w, k)
    )


# --------------------------------------------------------------------------
# Digit-path censuses


@dataclass(frozen=True)
class PathState:
    """Survivors of a digit path at one depth.

    ``cut`` is the accumulated residue mod q^depth; survivors are the
    admissible words over level-``depth`` blocks m_lo..m_hi whose expansion
    matches some window of radius L that was alive on every shallower prefix
    of the path.
    """

    depth: int
    cut: int
    m_lo: int
    m_hi: int
    survivors: frozenset[str]


def initial_state(s: Substitution, radius: int) -> PathState:
    table = table_for(s)
    words = frozenset(table.words(2 * radius + 1))
    return PathState(0, 0, -radius, radius, words)


def lift_state(s: Substitution, state: PathState, digit: int, radius: int) -> PathState:
    """De-substitute one more level along the given next digit."""
    q = s.require_constant_length()
    if not 0 <= digit < q:
        raise ValueError(f"digit {digit} out of range for base {q}")
    table = table_for(s)
    new_lo = (state.m_lo + digit) // q
    new_hi = (state.m_hi + digit) // q
    length = new_hi - new_lo + 1
    letters = s.letters
    rules = s.rules
    span = range(state.m_lo, state.m_hi + 1)
    keep = []
    for cand in table.words(length):
        induced = "".join(
            rules[letters.index(cand[(m + digit) // q - new_lo])][(m + digit) % q]
            for m in span
        )
        if induced in state.survivors:
            keep.append(cand)
    if not keep:
        raise FiberInvariantError(
            f"no survivors at depth {state.depth + 1}; the odometer map is onto, "
            "so this indicates a bug or an inadmissible starting set"
        )
    return PathState(
        state.depth + 1,
        state.cut + digit * q**state.depth,
        new_lo,
        new_hi,
        frozenset(keep),
    )


def base_windows(s: Substitution, state: PathState, radius: int) -> frozenset[str]:
    """Distinct radius-``radius`` central windows realizable by the survivors."""
    q = s.require_constant_length()
    block = q**state.depth
    images = letter_images(s, state.depth)
    letters = s.letters
    out = set()
    for v in state.survivors:
        pieces = []
        for i, ch in enumerate(v):
            m = state.m_lo + i
            lo = m * block - state.cut
            hi = lo + block - 1
            s_lo = max(lo, -radius)
            s_hi = min(hi, radius)
            if s_lo > s_hi:
                continue
            pieces.append(images[letters.index(ch)][s_lo - lo : s_hi - lo + 1])
        out.add("".join(pieces))
    return frozenset(out)


@dataclass(frozen=True)
class PathCensus:
    """Counts of realizable central windows along a digit path."""

    digits: tuple[int, ...]
    radius: int
    counts: tuple[int, ...]
    windows: tuple[str, ...]
    stabilized: bool

    @property
    def count(self) -> int:
        return self.counts[-1]


def census_along_path(
    s: Substitution,
    digits: tuple[int, ...],
    radius: int,
    extend_periodically: bool = True,
    plateau: int = 3,
    extra_depth: int = 16,
) -> PathCensus:
    """Follow a digit path downward, counting surviving central windows.

    Counts are nonincreasing in depth (constraints only accumulate), so a
    plateau of ``plateau`` equal values past the given digits is taken as
    stabilization.  With ``extend_periodically`` the finite digit string is
    repeated to its canonical eventually-periodic continuation; all-zero
    digits thus denote the forward orbit of zero, where the largest fibers
    live, and mixed digits denote a generic q-adic point.
    """
    q = s.require_constant_length()
    state = initial_state(s, radius)
    counts = [len(base_windows(s, state, radius))]
    path: list[int] = []

    def step(d: int) -> None:
        nonlocal state
        state = lift_state(s, state, d, radius)
        path.append(d)
        counts.append(len(base_windows(s, state, radius)))

    for d in digits:
        step(d)
    stabilized = False
    if extend_periodically:
        pattern = tuple(digits) if digits else (0,)
        cap = state.depth + extra_depth
        i = 0
        while state.depth < cap:
            if len(counts) > plateau and len(set(counts[-plateau - 1 :])) == 1:
                stabilized = True
                break
            step(pattern[i % len(pattern)])
            i += 1
        if not stabilized and len(counts) > plateau and len(set(counts[-plateau - 1 :])) == 1:
            stabilized = True
    return PathCensus(
        tuple(path),
        radius,
        tuple(counts),
        tuple(sorted(base_windows(s, state, radius))),
        stabilized,
    )


@dataclass(frozen=True)
class FiberCensus:
    """Fiber of the odometer map over a residue, at desk scale."""

    residue: OdometerResidue
    radius: int
    count: int
    representatives: tuple[CenteredWord, ...]
    counts_by_depth: tuple[int, ...]
    stabilized: bool

    def to_payload(self) -> dict:
        return {
            "q": self.residue.q,
            "depth": self.residue.depth,
            "residue": self.residue.value,
            "radius": self.radius,
            "count": self.count,
            "stabilized": self.stabilized,
            "representatives": [w.serialize() for w in self.representatives],
        }


def fiber_census(s: Substitution, r: OdometerResidue, radius: int) -> FiberCensus:
    """Enumerate the distinct central windows compatible with a residue's digit path.

    The residue's digits are continued periodically, which selects the
    canonical q-adic point with those leading digits: all-zero residues give
    integer points (boundary fibers), mixed residues give generic points.
    The census deepens until the window count stabilizes.
    """
    q = s.require_constant_length()
    if r.q != q:
        raise ValueError(f"residue base {r.q} does not match substitution length {q}")
    if radius < q**r.depth:
        raise ValueError(f"radius {radius} too small for depth {r.depth}: need at least q^depth")
    census = census_along_path(s, r.digits(), radius)
    reps = tuple(CenteredWord(w, -radius) for w in census.windows)
    return FiberCensus(r, radius, census.count, reps, census.counts, census.stabilized)
