import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import words
from tracekernel.chains import ZERO, Chain
from tracekernel.construction import build_theta
from tracekernel.errors import (
    DimensionMismatch,
    DomainError,
    KindMismatch,
    ResampleExhausted,
    SingularMatrix,
)
from tracekernel.linrep import (
    GF,
    MERSENNE_61,
    QQ,
    Matrix,
    Representation,
    determinant,
    evaluate_word,
    inverse,
    mat_add,
    mat_mul,
    mat_neg,
    random_matrix,
    random_representation,
    trace,
    trace_of_chain,
)
from tracekernel.words import Word, invert

M = Matrix.from_rows
U = M([[1, 1], [0, 1]])
L = M([[1, 0], [1, 1]])
RHO = Representation(U, L)


def test_ring_operations():
    X = M([[3, -1], [Fraction(1, 2), 7]])
    assert mat_mul(Matrix.identity(2), X) == X
    assert mat_mul(U, L) == M([[2, 1], [1, 1]])
    assert mat_add(X, mat_neg(X)).is_zero()


def test_kind_and_dimension_mismatch():
    with pytest.raises(KindMismatch):
        mat_mul(U, U.to_field(GF(7)))
    with pytest.raises(DimensionMismatch):
        mat_add(U, Matrix.identity(3))


def test_determinant_examples():
    assert determinant(Matrix.identity(3)) == 1
    assert determinant(U) == 1
    assert determinant(M([[2, 0], [0, 3]])) == 6
    assert determinant(M([[0, 1], [1, 0]])) == -1
    assert determinant(M([[1, 2], [2, 4]])) == 0


def test_inverse_examples():
    assert inverse(Matrix.identity(2)) == Matrix.identity(2)
    assert inverse(U) == M([[1, -1], [0, 1]])
    assert inverse(M([[2, 0], [0, 3]])) == M([[Fraction(1, 2), 0], [0, Fraction(1, 3)]])
    with pytest.raises(SingularMatrix):
        inverse(M([[1, 2], [2, 4]]))


def test_trace_examples():
    assert trace(Matrix.identity(4)) == 4
    assert trace(M([[2, 1], [1, 1]])) == 3
    assert trace(M([[0, 1], [0, 0]])) == 0


def test_modp_arithmetic():
    F = GF(7)
    X = M([[3, 5], [2, 6]], F)
    assert determinant(X) == (18 - 10) % 7
    assert mat_mul(X, inverse(X)).is_identity()


def test_field_rejects_composite_modulus():
    with pytest.raises(DomainError):
        GF(91)


def test_evaluate_word_examples():
    assert evaluate_word(RHO, Word()) == Matrix.identity(2)
    assert evaluate_word(RHO, Word.from_string("ab")) == M([[2, 1], [1, 1]])
    assert evaluate_word(RHO, Word.from_string("a") * Word.from_string("A")).is_identity()
    assert evaluate_word(RHO, Word.from_string("AAb")) == mat_mul(
        mat_mul(inverse(U), inverse(U)), L
    )


def test_trace_of_chain_examples():
    assert trace_of_chain(RHO, ZERO) == 0
    for n in (1, 2, 3):
        assert trace_of_chain(Representation.identity(n), Chain.of("a")) == n
    assert trace_of_chain(RHO, build_theta(1).without(build_theta(1).items()[1][0])) == 15


def test_trace_of_chain_matches_termwise_sum():
    rng = random.Random(3)
    for field in (QQ, GF(101), GF(MERSENNE_61), GF(1000003)):
        rho = random_representation(2, field, seed=rng.randrange(1 << 30), bound=4)
        pairs = [(rng.randint(-3, 3), Word.from_string(s))
                 for s in ("ab", "aBB", "abAB", "aab", "b", "aaBab")]
        c = Chain.from_words(pairs)
        direct = field(sum(v * trace(evaluate_word(rho, k.word())) for k, v in c.terms.items()))
        assert trace_of_chain(rho, c) == direct


@pytest.mark.parametrize("kind", ["modp", "rational"])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_theta_vanishes(kind, n):
    rho = random_representation(n, kind, seed=11, bound=5)
    assert trace_of_chain(rho, build_theta(n)) == 0


def test_random_representation_deterministic():
    assert random_representation(3, "modp", seed=5) == random_representation(3, "modp", seed=5)
    assert random_representation(3, "modp", seed=5) != random_representation(3, "modp", seed=6)
    assert random_representation(2, "rational", seed=5) == random_representation(2, "rational", seed=5)


def test_random_representation_gl1():
    for seed in range(20):
        rho = random_representation(1, "rational", seed=seed)
        assert rho.img_a.rows[0][0] != 0 and rho.img_b.rows[0][0] != 0


def test_random_representation_rational_bound():
    rho = random_representation(3, "rational", seed=2, bound=5)
    assert all(-5 <= x <= 5 for X in (rho.img_a, rho.img_b) for r in X.rows for x in r)


def test_random_representation_invertible_at_scale():
    for seed in range(1000):
        rho = random_representation(3, "modp", seed=seed)
        assert determinant(rho.img_a) != 0 and determinant(rho.img_b) != 0


def test_resample_exhausted():
    # a random 6x6 matrix over F_2 is invertible with probability ~0.29
    with pytest.raises(ResampleExhausted):
        random_representation(6, "modp", seed=1, prime=2, max_retries=1)


def test_representation_rejects_singular():
    with pytest.raises(SingularMatrix):
        Representation(U, M([[1, 1], [1, 1]]))


# -- properties ------------------------------------------------------------

seeds = st.integers(0, 2**32)
fields = st.sampled_from([QQ, GF(101), GF(MERSENNE_61)])


@settings(max_examples=50, deadline=None)
@given(words, words, seeds, fields)
def test_homomorphism(u, v, seed, field):
    rho = random_representation(2, field, seed=seed, bound=3)
    assert evaluate_word(rho, u * v) == mat_mul(evaluate_word(rho, u), evaluate_word(rho, v))


@settings(max_examples=50, deadline=None)
@given(words, words, seeds, fields)
def test_trace_conjugation_invariant(w, g, seed, field):
    rho = random_representation(2, field, seed=seed, bound=3)
    assert trace(evaluate_word(rho, g * w * invert(g))) == trace(evaluate_word(rho, w))


@settings(max_examples=50, deadline=None)
@given(words, seeds)
def test_rational_and_modp_agree(w, seed):
    p = 1000003
    rho_q = random_representation(2, "rational", seed=seed, bound=4)
    # inverse letters introduce 1/det denominators, which must be units mod p
    if determinant(rho_q.img_a) % p == 0 or determinant(rho_q.img_b) % p == 0:
        return
    rho_p = Representation(rho_q.img_a.to_field(GF(p)), rho_q.img_b.to_field(GF(p)))
    assert evaluate_word(rho_q, w).to_field(GF(p)) == evaluate_word(rho_p, w)


@settings(max_examples=50, deadline=None)
@given(seeds, st.integers(1, 4), fields)
def test_inverse_cross_check(seed, n, field):
    X = random_matrix(n, field, random.Random(seed), bound=6)
    if determinant(X) == 0:
        with pytest.raises(SingularMatrix):
            inverse(X)
    else:
        assert mat_mul(X, inverse(X)).is_identity()
        assert mat_mul(inverse(X), X).is_identity()
