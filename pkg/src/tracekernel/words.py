"""Reduced words in the free group F(a, b).

Words are stored as syllables (generator, nonzero exponent) with adjacent
syllables on distinct generators. The string form uses ``a``, ``b`` for the
generators and ``A``, ``B`` for their inverses; the identity is ``""``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import groupby
from typing import Iterable, NamedTuple

from .errors import ShapeError

GENERATORS = ("a", "b")

_INVERSE_LETTER = {"a": "A", "A": "a", "b": "B", "B": "b"}
# Fixed letter order a < A < b < B used for least-rotation selection.
_TO_ORDER = str.maketrans("aAbB", "0123")
_FROM_ORDER = str.maketrans("0123", "aAbB")


class Syllable(NamedTuple):
    gen: str
    exp: int

    def letters(self) -> str:
        letter = self.gen if self.exp > 0 else self.gen.upper()
        return letter * abs(self.exp)


@dataclass(frozen=True)
class Word:
    """A freely reduced element of F(a, b)."""

    syllables: tuple[Syllable, ...] = ()

    def __post_init__(self):
        prev = None
        for s in self.syllables:
            if s.gen not in GENERATORS or s.exp == 0:
                raise ValueError(f"invalid syllable {s!r}")
            if s.gen == prev:
                raise ValueError("adjacent syllables share a generator; use reduce()")
            prev = s.gen

    @classmethod
    def from_string(cls, text: str) -> Word:
        raw = []
        for ch, run in groupby(text):
            if ch not in _INVERSE_LETTER:
                raise ValueError(f"invalid letter {ch!r} in {text!r}")
            k = len(list(run))
            raw.append((ch.lower(), k if ch.islower() else -k))
        return reduce(raw)

    @classmethod
    def generator(cls, gen: str, exp: int = 1) -> Word:
        return reduce([Syllable(gen, exp)])

    def letters(self) -> str:
        return "".join(s.letters() for s in self.syllables)

    def __str__(self) -> str:
        return self.letters()

    def __len__(self) -> int:
        return sum(abs(s.exp) for s in self.syllables)

    @property
    def letter_length(self) -> int:
        return len(self)

    def is_identity(self) -> bool:
        return not self.syllables

    def __mul__(self, other: Word) -> Word:
        return multiply(self, other)

    def __invert__(self) -> Word:
        return invert(self)

    def __pow__(self, k: int) -> Word:
        base = self if k >= 0 else invert(self)
        out = IDENTITY
        for _ in range(abs(k)):
            out = multiply(out, base)
        return out


IDENTITY = Word()


@dataclass(frozen=True, order=True)
class CyclicWord:
    """Canonical representative of a conjugacy class in F(a, b).

    ``letters`` is the least rotation (under a < A < b < B) of a cyclically
    reduced representative, so equality of CyclicWords is conjugacy.
    """

    letters: str

    def __str__(self) -> str:
        return self.letters

    def word(self) -> Word:
        return Word.from_string(self.letters)


@dataclass(frozen=True)
class AbelianImage:
    exp_a: int
    exp_b: int

    def __add__(self, other: AbelianImage) -> AbelianImage:
        return AbelianImage(self.exp_a + other.exp_a, self.exp_b + other.exp_b)

    def __neg__(self) -> AbelianImage:
        return AbelianImage(-self.exp_a, -self.exp_b)

    def is_zero(self) -> bool:
        return self.exp_a == 0 and self.exp_b == 0

    def as_tuple(self) -> tuple[int, int]:
        return (self.exp_a, self.exp_b)


def reduce(raw: Iterable[Syllable | tuple[str, int]]) -> Word:
    stack: list[list] = []
    for gen, exp in raw:
        if gen not in GENERATORS:
            raise ValueError(f"unknown generator {gen!r}")
        if exp == 0:
            continue
        if stack and stack[-1][0] == gen:
            stack[-1][1] += exp
            if stack[-1][1] == 0:
                stack.pop()
        else:
            stack.append([gen, exp])
    return Word(tuple(Syllable(g, e) for g, e in stack))


def multiply(u: Word, v: Word) -> Word:
    return reduce(u.syllables + v.syllables)


def invert(u: Word) -> Word:
    return Word(tuple(Syllable(s.gen, -s.exp) for s in reversed(u.syllables)))


def cyclic_reduce(u: Word) -> Word:
    syl = list(u.syllables)
    while len(syl) >= 2 and syl[0].gen == syl[-1].gen:
        first, last = syl[0], syl[-1]
        if (first.exp > 0) == (last.exp > 0):
            break
        k = min(abs(first.exp), abs(last.exp))
        step = k if first.exp > 0 else -k
        first = Syllable(first.gen, first.exp - step)
        last = Syllable(last.gen, last.exp + step)
        syl = ([first] if first.exp else []) + syl[1:-1] + ([last] if last.exp else [])
    return Word(tuple(syl))


def _least_rotation(s: str) -> str:
    # Naive O(L^2); construction words have at most (2n+1) + n(2n+1) letters.
    if not s:
        return s
    doubled = s + s
    L = len(s)
    return min(doubled[i:i + L] for i in range(L))


def canonical_class(u: Word) -> CyclicWord:
    letters = cyclic_reduce(u).letters().translate(_TO_ORDER)
    return CyclicWord(_least_rotation(letters).translate(_FROM_ORDER))


def are_conjugate(u: Word, v: Word) -> bool:
    return canonical_class(u) == canonical_class(v)


def abelianize(u: Word) -> AbelianImage:
    ea = sum(s.exp for s in u.syllables if s.gen == "a")
    eb = sum(s.exp for s in u.syllables if s.gen == "b")
    return AbelianImage(ea, eb)


def commutator(u: Word, v: Word) -> Word:
    return reduce(u.syllables + v.syllables + invert(u).syllables + invert(v).syllables)


def b_block_sequence(u: Word) -> tuple[int, ...]:
    """Cyclic sequence of b-run lengths between consecutive a's.

    Only defined for positive words that start and end with ``a``; the last
    entry is the wrap-around gap from the final ``a`` back to the first, which
    is always 0 for this shape.
    """
    syl = u.syllables
    if not syl or syl[0].gen != "a" or syl[-1].gen != "a":
        raise ShapeError(f"word {u} does not start and end with a")
    if any(s.exp < 0 for s in syl):
        raise ShapeError(f"word {u} has inverse letters")
    pieces = u.letters().split("a")
    wrap = len(pieces[0]) + len(pieces[-1])
    return tuple(len(p) for p in pieces[1:-1]) + (wrap,)
