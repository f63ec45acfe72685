import itertools
import math
from collections import Counter

import pytest

from conftest import inversion_sign
from tracekernel.chains import support_size
from tracekernel.construction import (
    SignedPermutation,
    boundary_word,
    build_theta,
    build_W,
    build_x,
    certify_homology,
    certify_pairwise_distinct,
    enumerate_signed_permutations,
    expected_letter_length,
    parity_sign,
)
from tracekernel.errors import DomainError, ResourceError
from tracekernel.words import AbelianImage, Word, abelianize, cyclic_reduce

W = Word.from_string


@pytest.mark.parametrize("i, letters", [(1, "ba"), (2, "bba"), (5, "bbbbba")])
def test_build_x(i, letters):
    assert build_x(i).letters() == letters


def test_build_x_domain():
    with pytest.raises(DomainError):
        build_x(0)


@pytest.mark.parametrize(
    "images, n, letters",
    [
        ((1, 2), 1, "ababba"),
        ((2, 1), 1, "abbaba"),
        ((1, 2, 3, 4), 2, "ababbabbbabbbba"),
    ],
)
def test_build_W(images, n, letters):
    assert build_W(images, n).letters() == letters


def test_build_W_is_a_times_product_of_x():
    sigma = (3, 1, 4, 2)
    w = W("a")
    for i in sigma:
        w = w * build_x(i)
    assert build_W(sigma, 2) == w


def test_build_W_length_mismatch():
    with pytest.raises(DomainError):
        build_W((1, 2, 3), 2)
    with pytest.raises(DomainError):
        build_W((1, 1), 1)


def test_enumerate_small_cases():
    assert list(enumerate_signed_permutations(1)) == [SignedPermutation((1,), 1)]
    assert {p.images: p.sign for p in enumerate_signed_permutations(2)} == {(1, 2): 1, (2, 1): -1}
    assert sum(p.sign for p in enumerate_signed_permutations(3)) == 0


@pytest.mark.parametrize("m", range(1, 8))
def test_enumeration_matches_itertools_and_inversion_parity(m):
    perms = list(enumerate_signed_permutations(m))
    assert len(perms) == math.factorial(m)
    assert {p.images for p in perms} == set(itertools.permutations(range(1, m + 1)))
    for p in perms:
        assert p.sign == inversion_sign(p.images)
    if m >= 2:
        assert sum(p.sign for p in perms) == 0


def test_enumeration_is_deterministic():
    assert list(enumerate_signed_permutations(5)) == list(enumerate_signed_permutations(5))


def test_enumeration_cap():
    with pytest.raises(ResourceError):
        next(enumerate_signed_permutations(11))
    with pytest.raises(ResourceError):
        next(enumerate_signed_permutations(5, cap=4))
    with pytest.raises(ResourceError):
        build_theta(3, cap=5)


def test_from_images_uses_parity():
    assert SignedPermutation.from_images((2, 1, 3)).sign == -1
    assert parity_sign((3, 1, 2)) == 1


def test_theta_1_explicit():
    theta = build_theta(1)
    terms = {k.letters: v for k, v in theta.terms.items()}
    assert terms == {"aababb": 1, "aabbab": -1}


def _oracle_theta(n):
    """Independent enumeration: itertools permutations, inversion parity,
    class key = set of all rotations of the (already cyclically reduced) word."""
    acc = Counter()
    for sigma in itertools.permutations(range(1, 2 * n + 1)):
        s = "a" + "".join("b" * k + "a" for k in sigma)
        key = frozenset(s[i:] + s[:i] for i in range(len(s)))
        acc[key] += inversion_sign(sigma)
    return {k: v for k, v in acc.items() if v}


def test_theta_2_against_enumeration_oracle():
    oracle = _oracle_theta(2)
    theta = build_theta(2)
    assert len(oracle) == 24
    assert Counter(oracle.values()) == {1: 12, -1: 12}
    assert support_size(theta) == 24
    assert Counter(theta.terms.values()) == {1: 12, -1: 12}
    mine = {frozenset(k.letters[i:] + k.letters[:i] for i in range(len(k.letters))): v
            for k, v in theta.terms.items()}
    assert mine == oracle


@pytest.mark.parametrize("n", [1, 2, 3])
def test_W_already_reduced(n):
    L = expected_letter_length(n)
    for p in enumerate_signed_permutations(2 * n):
        w = build_W(p, n)
        assert len(w) == L
        assert cyclic_reduce(w) == w
        assert all(s.exp > 0 for s in w.syllables)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_abelian_image_independent_of_sigma(n):
    images = {abelianize(build_W(p, n)) for p in enumerate_signed_permutations(2 * n)}
    assert images == {AbelianImage(2 * n + 1, n * (2 * n + 1))}


def test_certify_pairwise_distinct_n1():
    cert = certify_pairwise_distinct(1)
    assert cert.distinct
    assert set(cert.block_sequences) == {(1, 2, 0), (2, 1, 0)}


@pytest.mark.parametrize("n, count", [(2, 24), (3, 720)])
def test_certify_pairwise_distinct(n, count):
    cert = certify_pairwise_distinct(n)
    assert cert.distinct
    assert cert.distinct_classes == count
    assert all(seq.count(0) == 1 for seq in cert.block_sequences)


@pytest.mark.parametrize("n, image", [(1, (3, 3)), (2, (5, 10)), (3, (7, 21))])
def test_certify_homology(n, image):
    cert = certify_homology(n)
    assert cert.word_image.as_tuple() == image
    assert cert.boundary_image.as_tuple() == (0, 0)
    assert cert.excludes_boundary


def test_boundary_word_is_commutator():
    assert boundary_word().letters() == "abAB"
