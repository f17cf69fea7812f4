"""Finite centered windows and the dyadic window metric.

A point of a subshift is approximated at desk scale by a finite two-sided
window of symbols straddling the origin.  All metric questions about points
reduce to exact combinatorics on these windows: with the standard subshift
metric d(x, y) = 2^-min{|n| : x_n != y_n}, the ball of radius 2^-K around x
is exactly the cylinder of its central window of radius K.  Every comparison
here is certified: it carries the overlap radius actually inspected, so a
caller can always distinguish "equal within radius R" from "equal".
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

#: Symbol ids are rendered as single characters, so words are plain strings.
ALPHABET_CHARS = "0123456789abcdefghijklmnopqrstuvwxyz"


def sym_char(i: int) -> str:
    """Character for symbol id ``i``."""
    if not 0 <= i < len(ALPHABET_CHARS):
        raise ValueError(f"symbol id out of range: {i}")
    return ALPHABET_CHARS[i]


def sym_id(c: str) -> int:
    """Symbol id for character ``c``."""
    i = ALPHABET_CHARS.find(c)
    if i < 0:
        raise ValueError(f"not a symbol character: {c!r}")
    return i


@dataclass(frozen=True)
class CenteredWord:
    """A finite window of a bi-infinite sequence, must contain coordinate 0.

    ``symbols[i]`` sits at coordinate ``left + i``; ``left <= 0`` and the
    window extends at least to coordinate 0.
    """

    symbols: str
    left: int = 0

    def __post_init__(self) -> None:
        if not self.symbols:
            raise ValueError("centered word must be nonempty")
        if not (self.left <= 0 <= self.left + len(self.symbols) - 1):
            raise ValueError(
                f"window [{self.left}, {self.left + len(self.symbols) - 1}] "
                "does not contain the origin"
            )

    @property
    def right(self) -> int:
        return self.left + len(self.symbols) - 1

    def __len__(self) -> int:
        return len(self.symbols)

    def at(self, n: int) -> str:
        """Symbol at coordinate ``n``."""
        if not self.left <= n <= self.right:
            raise IndexError(f"coordinate {n} outside window [{self.left}, {self.right}]")
        return self.symbols[n - self.left]

    def covers(self, lo: int, hi: int) -> bool:
        return self.left <= lo and hi <= self.right

    def segment(self, lo: int, hi: int) -> str:
        """Symbols on coordinates ``lo..hi`` inclusive."""
        if not self.covers(lo, hi):
            raise IndexError(f"[{lo}, {hi}] outside window [{self.left}, {self.right}]")
        return self.symbols[lo - self.left : hi - self.left + 1]

    def central(self, radius: int) -> str:
        """The word on coordinates ``-radius..radius``."""
        return self.segment(-radius, radius)

    def restrict(self, lo: int, hi: int) -> "CenteredWord":
        if lo > 0 or hi < 0:
            raise ValueError("restriction must keep the origin")
        return CenteredWord(self.segment(lo, hi), lo)

    def serialize(self) -> str:
        return f"offset:left={self.left} word={self.symbols}"

    @classmethod
    def parse(cls, text: str) -> "CenteredWord":
        head, _, word_part = text.partition(" word=")
        if not head.startswith("offset:left=") or not word_part:
            raise ValueError(f"bad centered word literal: {text!r}")
        return cls(word_part, int(head[len("offset:left=") :]))


@dataclass(frozen=True)
class DistanceScale:
    """Certified comparison of two windows under the dyadic metric.

    ``first_difference`` is min{|n| : a_n != b_n} over the inspected overlap,
    or None when the windows agree on the whole overlap.  ``radius`` is the
    largest R with [-R, R] inside both windows; differences found at |n| <= R
    are exact metric values, anything beyond is only an upper/lower bound.
    """

    first_difference: int | None
    radius: int

    @property
    def is_exact(self) -> bool:
        return self.first_difference is not None and self.first_difference <= self.radius

    def value(self) -> float:
        """The metric value 2^-k, or its certified upper bound if agreement held."""
        if self.first_difference is None:
            return 2.0 ** -(self.radius + 1)
        return 2.0 ** -self.first_difference

    def within(self, scale_exp: int) -> bool:
        """Certified d < 2^-scale_exp, i.e. agreement on [-scale_exp, scale_exp]."""
        if self.radius < scale_exp:
            return False
        return self.first_difference is None or self.first_difference > scale_exp

    def separated_within(self, scale_exp: int) -> bool:
        """Certified d >= 2^-scale_exp: a real difference at |n| <= scale_exp."""
        return self.first_difference is not None and self.first_difference <= scale_exp


def scale_of_difference(a: CenteredWord, b: CenteredWord) -> DistanceScale:
    """First coordinate (by absolute value) where the windows disagree.

    Scans the intersection of both windows outward from the origin.  The
    result's ``radius`` is the symmetric overlap radius, so the caller can
    tell whether the reported scale is the exact metric value.
    """
    lo = max(a.left, b.left)
    hi = min(a.right, b.right)
    radius = min(-lo, hi)
    best: int | None = None
    for n in range(lo, hi + 1):
        if a.at(n) != b.at(n):
            k = abs(n)
            if best is None or k < best:
                best = k
                if best == 0:
                    break
    return DistanceScale(best, radius)


def shift_window(w: CenteredWord, g: int) -> CenteredWord:
    """The window of the shifted point: coordinate n of the output reads n+g of the input."""
    if not w.left <= g <= w.right:
        raise ValueError(f"shift by {g} moves the origin outside [{w.left}, {w.right}]")
    return CenteredWord(w.symbols, w.left - g)


def shifts(limit: int) -> Iterator[int]:
    """Shift amounts 0, 1, -1, 2, -2, ... out to |g| <= limit, deterministic order."""
    yield 0
    for g in range(1, limit + 1):
        yield g
        yield -g
