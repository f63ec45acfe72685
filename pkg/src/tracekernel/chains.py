"""Integer linear combinations of conjugacy classes in F(a, b)."""

from __future__ import annotations

import json
from types import MappingProxyType
from typing import Iterable, Mapping

from .words import CyclicWord, Word, canonical_class


class Chain:
    """Formal sum of conjugacy classes with nonzero integer coefficients.

    Instances are treated as immutable; every operation returns a new chain.
    """

    __slots__ = ("_terms", "__weakref__")

    def __init__(self, terms: Mapping[CyclicWord, int] | None = None):
        clean = {}
        for cls, coeff in (terms or {}).items():
            if not isinstance(cls, CyclicWord):
                raise TypeError(f"chain keys must be CyclicWord, got {type(cls).__name__}")
            if coeff:
                clean[cls] = int(coeff)
        self._terms = clean

    @classmethod
    def from_words(cls, pairs: Iterable[tuple[int, Word]]) -> Chain:
        acc: dict[CyclicWord, int] = {}
        for coeff, word in pairs:
            key = canonical_class(word)
            acc[key] = acc.get(key, 0) + coeff
        return cls(acc)

    @classmethod
    def of(cls, word: Word | str, coeff: int = 1) -> Chain:
        if isinstance(word, str):
            word = Word.from_string(word)
        return cls.from_words([(coeff, word)])

    @property
    def terms(self) -> Mapping[CyclicWord, int]:
        return MappingProxyType(self._terms)

    def items(self):
        """Terms in sorted class-string order."""
        return sorted(self._terms.items(), key=lambda kv: kv[0].letters)

    def support(self) -> frozenset[CyclicWord]:
        return frozenset(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Chain):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        if not self._terms:
            return "Chain(0)"
        body = " ".join(f"{c:+d}|{k.letters}|" for k, c in self.items())
        return f"Chain({body})"

    def __add__(self, other: Chain) -> Chain:
        return chain_add(self, other)

    def __sub__(self, other: Chain) -> Chain:
        return chain_add(self, chain_scale(-1, other))

    def __neg__(self) -> Chain:
        return chain_scale(-1, self)

    def __rmul__(self, k: int) -> Chain:
        return chain_scale(k, self)

    def without(self, cls: CyclicWord) -> Chain:
        return Chain({k: v for k, v in self._terms.items() if k != cls})

    def to_dict(self) -> dict:
        return {
            "ring": "Z",
            "terms": [{"coeff": c, "class": k.letters} for k, c in self.items()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict) -> Chain:
        if data.get("ring") != "Z":
            raise ValueError(f"unsupported coefficient ring {data.get('ring')!r}")
        return cls.from_words(
            (int(t["coeff"]), Word.from_string(t["class"])) for t in data["terms"]
        )

    @classmethod
    def from_json(cls, text: str) -> Chain:
        return cls.from_dict(json.loads(text))


ZERO = Chain()


def chain_add(c1: Chain, c2: Chain) -> Chain:
    acc = dict(c1.terms)
    for k, v in c2.terms.items():
        acc[k] = acc.get(k, 0) + v
    return Chain(acc)


def chain_scale(k: int, c: Chain) -> Chain:
    if k == 0:
        return ZERO
    return Chain({cls: k * v for cls, v in c.terms.items()})


def support_size(c: Chain) -> int:
    return len(c)
