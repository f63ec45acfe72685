"""The words x_i = b^i a, W_sigma = a x_sigma(1) ... x_sigma(m), and the chain Theta_n."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

from .chains import Chain
from .errors import CertificationFailure, DomainError, ResourceError
from .words import (
    AbelianImage,
    Syllable,
    Word,
    abelianize,
    b_block_sequence,
    canonical_class,
    commutator,
)

DEFAULT_CAP = 10  # largest m enumerated in full; 10! = 3,628,800


@dataclass(frozen=True)
class SignedPermutation:
    images: tuple[int, ...]
    sign: int

    @classmethod
    def from_images(cls, images: Sequence[int]) -> SignedPermutation:
        images = tuple(images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise DomainError(f"{images} is not a permutation of 1..{len(images)}")
        return cls(images, parity_sign(images))

    def __len__(self) -> int:
        return len(self.images)


def parity_sign(images: Sequence[int]) -> int:
    """Sign by inversion count."""
    inv = sum(
        1
        for i in range(len(images))
        for j in range(i + 1, len(images))
        if images[i] > images[j]
    )
    return -1 if inv % 2 else 1


def _check_cap(m: int, cap: int) -> None:
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    if m > cap:
        raise ResourceError(f"{m}! permutations exceeds the enumeration cap (m <= {cap})")


def enumerate_signed_permutations(m: int, cap: int = DEFAULT_CAP) -> Iterator[SignedPermutation]:
    """All m! permutations of 1..m with their signs, in Heap's order.

    Consecutive permutations differ by one transposition, so the sign just
    flips at every step.
    """
    _check_cap(m, cap)
    a = list(range(1, m + 1))
    c = [0] * m
    sign = 1
    yield SignedPermutation(tuple(a), sign)
    i = 1
    while i < m:
        if c[i] < i:
            j = 0 if i % 2 == 0 else c[i]
            a[j], a[i] = a[i], a[j]
            sign = -sign
            yield SignedPermutation(tuple(a), sign)
            c[i] += 1
            i = 1
        else:
            c[i] = 0
            i += 1


def build_x(i: int) -> Word:
    if i < 1:
        raise DomainError(f"x_i needs i >= 1, got {i}")
    return Word((Syllable("b", i), Syllable("a", 1)))


def build_W(sigma: SignedPermutation | Sequence[int], n: int) -> Word:
    images = sigma.images if isinstance(sigma, SignedPermutation) else tuple(sigma)
    m = 2 * n
    if n < 1 or len(images) != m:
        raise DomainError(f"sigma has length {len(images)}, expected {m}")
    if sorted(images) != list(range(1, m + 1)):
        raise DomainError(f"{images} is not a permutation of 1..{m}")
    syl = [Syllable("a", 1)]
    for k in images:
        syl.append(Syllable("b", k))
        syl.append(Syllable("a", 1))
    return Word(tuple(syl))


def expected_letter_length(n: int) -> int:
    return (2 * n + 1) + n * (2 * n + 1)


def build_theta(n: int, cap: int = DEFAULT_CAP) -> Chain:
    """Theta_n = sum over S_2n of sgn(sigma) |W_sigma|."""
    _check_cap(2 * n, cap)
    return _build_theta(n)


@lru_cache(maxsize=8)
def _build_theta(n: int) -> Chain:
    return Chain.from_words(
        (p.sign, build_W(p, n)) for p in enumerate_signed_permutations(2 * n, cap=2 * n)
    )


def boundary_word() -> Word:
    """The commutator [a, b] = a b a^-1 b^-1 representing the boundary of Y."""
    return commutator(Word.generator("a"), Word.generator("b"))


@dataclass(frozen=True)
class DistinctnessCertificate:
    n: int
    permutations: int
    distinct_classes: int
    distinct_block_sequences: int
    block_sequences_match: bool
    unique_zero: bool
    block_sequences: tuple[tuple[int, ...], ...] = field(repr=False, default=())

    @property
    def distinct(self) -> bool:
        return (
            self.distinct_classes == self.permutations
            and self.distinct_block_sequences == self.permutations
            and self.block_sequences_match
            and self.unique_zero
        )

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "permutations": self.permutations,
            "distinct_classes": self.distinct_classes,
            "distinct_block_sequences": self.distinct_block_sequences,
            "block_sequences_match": self.block_sequences_match,
            "unique_zero": self.unique_zero,
            "distinct": self.distinct,
        }


def certify_pairwise_distinct(n: int, cap: int = DEFAULT_CAP) -> DistinctnessCertificate:
    """Check two ways that the (2n)! classes |W_sigma| are pairwise distinct.

    Generic route: the canonical cyclic forms are all different. Structural
    route: each b-block sequence is (sigma(1), ..., sigma(2n), 0) with a single
    zero, so the rotation is pinned and sigma can be read back off the class.
    """
    m = 2 * n
    _check_cap(m, cap)
    seen: dict = {}
    sequences = []
    for p in enumerate_signed_permutations(m, cap):
        w = build_W(p, n)
        cls = canonical_class(w)
        if cls in seen:
            raise CertificationFailure(
                f"W_{p.images} and W_{seen[cls]} share the class {cls}",
                witness=(seen[cls], p.images),
            )
        seen[cls] = p.images
        seq = b_block_sequence(w)
        if seq != p.images + (0,):
            raise CertificationFailure(
                f"block sequence of W_{p.images} is {seq}", witness=(p.images, seq)
            )
        if seq.count(0) != 1:
            raise CertificationFailure(f"block sequence {seq} has more than one 0", witness=seq)
        sequences.append(seq)
    return DistinctnessCertificate(
        n=n,
        permutations=math.factorial(m),
        distinct_classes=len(seen),
        distinct_block_sequences=len(set(sequences)),
        block_sequences_match=True,
        unique_zero=True,
        block_sequences=tuple(sequences),
    )


@dataclass(frozen=True)
class HomologyCertificate:
    n: int
    word_image: AbelianImage
    boundary_image: AbelianImage
    checked: int

    @property
    def excludes_boundary(self) -> bool:
        return self.boundary_image.is_zero() and not self.word_image.is_zero()

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "word_image": list(self.word_image.as_tuple()),
            "boundary_image": list(self.boundary_image.as_tuple()),
            "checked": self.checked,
            "excludes_boundary": self.excludes_boundary,
        }


def certify_homology(n: int, cap: int = DEFAULT_CAP) -> HomologyCertificate:
    """Every W_sigma has H_1 image (2n+1, n(2n+1)) while [a, b] maps to 0."""
    m = 2 * n
    _check_cap(m, cap)
    expected = AbelianImage(m + 1, m * (m + 1) // 2)
    checked = 0
    for p in enumerate_signed_permutations(m, cap):
        got = abelianize(build_W(p, n))
        if got != expected:
            raise CertificationFailure(
                f"W_{p.images} has abelian image {got}, expected {expected}", witness=p.images
            )
        checked += 1
    boundary = abelianize(boundary_word())
    if not boundary.is_zero():
        raise CertificationFailure(f"[a,b] has nonzero abelian image {boundary}")
    if expected.is_zero():
        raise CertificationFailure("word image is zero")
    return HomologyCertificate(n=n, word_image=expected, boundary_image=boundary, checked=checked)
