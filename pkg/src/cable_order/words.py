"""Freely reduced words over a named generator alphabet.

A word is a sequence of syllables (generator, exponent) with nonzero
arbitrary-precision integer exponents and no two adjacent syllables on the
same generator.  Words are immutable values: every operation returns a fresh
reduced word, so they can be shared freely across concurrent sweeps.

Text syntax: syllables are whitespace-separated, ``a^3 b^-1 t^2``; an
exponent of 1 is left implicit (``a``); ``1`` or the empty string denotes the
identity.  The parser and printer round-trip bit-exactly on canonical forms.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator

Syllable = tuple[str, int]

_TOKEN = re.compile(r"([A-Za-z][A-Za-z0-9_]*)(?:\^(-?\d+))?\Z")


class WordSyntaxError(ValueError):
    """Raised when word text cannot be parsed."""


def _reduce(pairs: Iterable[Syllable]) -> tuple[Syllable, ...]:
    """Freely reduce a syllable sequence (merge runs, drop zero exponents)."""
    stack: list[Syllable] = []
    for gen, exp in pairs:
        if exp == 0:
            continue
        if stack and stack[-1][0] == gen:
            merged = stack[-1][1] + exp
            stack.pop()
            if merged:
                stack.append((gen, merged))
        else:
            stack.append((gen, exp))
    return tuple(stack)


@dataclass(frozen=True, slots=True)
class Word:
    """A freely reduced word.  Construct via :meth:`from_pairs` or :meth:`parse`."""

    syllables: tuple[Syllable, ...] = ()

    @staticmethod
    def identity() -> "Word":
        return Word()

    @staticmethod
    def from_pairs(pairs: Iterable[Syllable]) -> "Word":
        return Word(_reduce(pairs))

    @staticmethod
    def single(gen: str, exp: int = 1) -> "Word":
        return Word.from_pairs([(gen, exp)])

    @staticmethod
    def parse(text: str) -> "Word":
        tokens = text.split()
        if not tokens or tokens == ["1"]:
            return Word()
        pairs = []
        for tok in tokens:
            m = _TOKEN.match(tok)
            if m is None:
                raise WordSyntaxError(f"bad syllable {tok!r}")
            exp = int(m.group(2)) if m.group(2) is not None else 1
            if exp == 0:
                raise WordSyntaxError(f"zero exponent in {tok!r}")
            pairs.append((m.group(1), exp))
        return Word.from_pairs(pairs)

    def __str__(self) -> str:
        if not self.syllables:
            return "1"
        return " ".join(g if e == 1 else f"{g}^{e}" for g, e in self.syllables)

    def __iter__(self) -> Iterator[Syllable]:
        return iter(self.syllables)

    def __len__(self) -> int:
        return len(self.syllables)

    def __bool__(self) -> bool:
        return bool(self.syllables)

    def __mul__(self, other: "Word") -> "Word":
        return concat(self, other)

    def __invert__(self) -> "Word":
        return invert(self)

    def __pow__(self, n: int) -> "Word":
        return power(self, n)

    def is_identity(self) -> bool:
        return not self.syllables

    def generators(self) -> set[str]:
        return {g for g, _ in self.syllables}

    def length(self) -> int:
        """Total letter length, the sum of absolute exponents."""
        return sum(abs(e) for _, e in self.syllables)


def concat(*ws: Word) -> Word:
    pairs: list[Syllable] = []
    for w in ws:
        pairs.extend(w.syllables)
    return Word.from_pairs(pairs)


def invert(w: Word) -> Word:
    return Word(tuple((g, -e) for g, e in reversed(w.syllables)))


def power(w: Word, n: int) -> Word:
    if n == 0:
        return Word()
    base = w.syllables if n > 0 else invert(w).syllables
    return Word.from_pairs(base * abs(n))


def abelianize(w: Word) -> dict[str, int]:
    """Exponent sum per generator; generators with sum zero are dropped."""
    sums: dict[str, int] = {}
    for g, e in w.syllables:
        sums[g] = sums.get(g, 0) + e
    return {g: e for g, e in sums.items() if e}
