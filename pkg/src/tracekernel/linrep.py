"""Exact matrices over Q or F_p, representations of F(a, b), and trace evaluation.

Scalars are plain Python numbers. Over Q an entry is an ``int`` when it is
integral and a ``fractions.Fraction`` otherwise; over F_p it is the residue in
``range(p)``. The field travels with the matrix, never with the entries.
"""

from __future__ import annotations

import random
import weakref
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence, Union

import numpy as np
import sympy

from . import _batched
from .chains import Chain
from .errors import (
    DimensionMismatch,
    DomainError,
    KindMismatch,
    ResampleExhausted,
    SingularMatrix,
)
from .words import Word

RATIONAL = "rational"
MODP = "modp"
MERSENNE_61 = _batched.MERSENNE_61
DEFAULT_BOUND = 10
DEFAULT_RETRIES = 100

Scalar = Union[int, Fraction]


def _q(x) -> Scalar:
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


@dataclass(frozen=True)
class Field:
    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind == RATIONAL:
            if self.p is not None:
                raise DomainError("the rational field takes no modulus")
        elif self.kind == MODP:
            if self.p is None or not sympy.isprime(self.p):
                raise DomainError(f"modulus {self.p} is not prime")
        else:
            raise DomainError(f"unknown scalar kind {self.kind!r}")

    @property
    def is_modp(self) -> bool:
        return self.kind == MODP

    def __call__(self, x) -> Scalar:
        if self.kind == RATIONAL:
            return _q(Fraction(x))
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def inv(self, x: Scalar) -> Scalar:
        if x == 0:
            raise SingularMatrix("division by zero")
        if self.kind == RATIONAL:
            return _q(1 / Fraction(x))
        return pow(x, -1, self.p)

    def __str__(self) -> str:
        return "Q" if self.kind == RATIONAL else f"F_{self.p}"


QQ = Field(RATIONAL)


def GF(p: int = MERSENNE_61) -> Field:
    return Field(MODP, p)


def make_field(kind: str | Field, prime: int = MERSENNE_61) -> Field:
    if isinstance(kind, Field):
        return kind
    return QQ if kind == RATIONAL else Field(kind, prime)


@dataclass(frozen=True)
class Matrix:
    field: Field
    rows: tuple[tuple[Scalar, ...], ...]

    def __post_init__(self):
        n = len(self.rows)
        if any(len(r) != n for r in self.rows):
            raise DimensionMismatch("matrix must be square")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], field: Field = QQ) -> Matrix:
        return cls(field, tuple(tuple(field(x) for x in r) for r in rows))

    @classmethod
    def identity(cls, n: int, field: Field = QQ) -> Matrix:
        return cls(field, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, n: int, field: Field = QQ) -> Matrix:
        return cls(field, tuple((0,) * n for _ in range(n)))

    @classmethod
    def scalar(cls, x, field: Field = QQ) -> Matrix:
        return cls.from_rows([[x]], field)

    @property
    def n(self) -> int:
        return len(self.rows)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.rows for x in r)

    def is_identity(self) -> bool:
        return self == Matrix.identity(self.n, self.field)

    def to_field(self, field: Field) -> Matrix:
        return Matrix.from_rows(self.rows, field)

    def to_list(self) -> list[list]:
        """JSON-friendly entries: ints stay ints, fractions become 'p/q'."""
        return [[x if isinstance(x, int) else str(x) for x in r] for r in self.rows]

    def __matmul__(self, other: Matrix) -> Matrix:
        return mat_mul(self, other)

    def __add__(self, other: Matrix) -> Matrix:
        return mat_add(self, other)

    def __neg__(self) -> Matrix:
        return mat_neg(self)

    def __sub__(self, other: Matrix) -> Matrix:
        return mat_add(self, mat_neg(other))


def _check(X: Matrix, Y: Matrix) -> None:
    if X.field != Y.field:
        raise KindMismatch(f"{X.field} vs {Y.field}")
    if X.n != Y.n:
        raise DimensionMismatch(f"{X.n} vs {Y.n}")


def mat_mul(X: Matrix, Y: Matrix) -> Matrix:
    _check(X, Y)
    cols = tuple(zip(*Y.rows))
    if X.field.is_modp:
        p = X.field.p
        rows = tuple(
            tuple(sum(a * b for a, b in zip(r, c)) % p for c in cols) for r in X.rows
        )
    else:
        rows = tuple(tuple(_q(sum(a * b for a, b in zip(r, c))) for c in cols) for r in X.rows)
    return Matrix(X.field, rows)


def mat_add(X: Matrix, Y: Matrix) -> Matrix:
    _check(X, Y)
    if X.field.is_modp:
        p = X.field.p
        rows = tuple(tuple((a + b) % p for a, b in zip(r, s)) for r, s in zip(X.rows, Y.rows))
    else:
        rows = tuple(tuple(_q(a + b) for a, b in zip(r, s)) for r, s in zip(X.rows, Y.rows))
    return Matrix(X.field, rows)


def mat_neg(X: Matrix) -> Matrix:
    if X.field.is_modp:
        p = X.field.p
        return Matrix(X.field, tuple(tuple(-a % p for a in r) for r in X.rows))
    return Matrix(X.field, tuple(tuple(-a for a in r) for r in X.rows))


def mat_scale(k, X: Matrix) -> Matrix:
    k = X.field(k)
    if X.field.is_modp:
        p = X.field.p
        return Matrix(X.field, tuple(tuple(k * a % p for a in r) for r in X.rows))
    return Matrix(X.field, tuple(tuple(_q(k * a) for a in r) for r in X.rows))


def _div(F: Field, a: Scalar, b: Scalar) -> Scalar:
    if F.is_modp:
        return a * pow(b, -1, F.p) % F.p
    return _q(Fraction(a) / b)


def _sub(F: Field, a: Scalar, b: Scalar) -> Scalar:
    return (a - b) % F.p if F.is_modp else _q(a - b)


def _mul(F: Field, a: Scalar, b: Scalar) -> Scalar:
    return a * b % F.p if F.is_modp else _q(a * b)


def determinant(X: Matrix) -> Scalar:
    F = X.field
    A = [list(r) for r in X.rows]
    n = X.n
    det = 1
    for col in range(n):
        pivot = next((r for r in range(col, n) if A[r][col] != 0), None)
        if pivot is None:
            return 0
        if pivot != col:
            A[col], A[pivot] = A[pivot], A[col]
            det = F(-det)
        det = _mul(F, det, A[col][col])
        for r in range(col + 1, n):
            if A[r][col] != 0:
                f = _div(F, A[r][col], A[col][col])
                A[r] = [_sub(F, x, _mul(F, f, y)) for x, y in zip(A[r], A[col])]
    return det


def inverse(X: Matrix) -> Matrix:
    """Gauss-Jordan inverse; raises SingularMatrix when det X = 0."""
    F = X.field
    n = X.n
    A = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(X.rows)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if A[r][col] != 0), None)
        if pivot is None:
            raise SingularMatrix("matrix is not invertible")
        A[col], A[pivot] = A[pivot], A[col]
        inv_p = F.inv(A[col][col])
        A[col] = [_mul(F, x, inv_p) for x in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [_sub(F, x, _mul(F, f, y)) for x, y in zip(A[r], A[col])]
    return Matrix(F, tuple(tuple(r[n:]) for r in A))


def trace(X: Matrix) -> Scalar:
    t = sum(X.rows[i][i] for i in range(X.n))
    return t % X.field.p if X.field.is_modp else _q(t)


def mat_pow(X: Matrix, e: int) -> Matrix:
    if e < 0:
        return mat_pow(inverse(X), -e)
    result = Matrix.identity(X.n, X.field)
    base = X
    while e:
        if e & 1:
            result = mat_mul(result, base)
        e >>= 1
        if e:
            base = mat_mul(base, base)
    return result


@dataclass(frozen=True)
class Representation:
    """Homomorphism F(a, b) -> GL_n given by the images of a and b."""

    img_a: Matrix
    img_b: Matrix

    def __post_init__(self):
        _check(self.img_a, self.img_b)
        if determinant(self.img_a) == 0 or determinant(self.img_b) == 0:
            raise SingularMatrix("generator images must be invertible")

    @property
    def n(self) -> int:
        return self.img_a.n

    @property
    def field(self) -> Field:
        return self.img_a.field

    @cached_property
    def _images(self) -> dict[str, Matrix]:
        return {"a": self.img_a, "b": self.img_b}

    def generator_power(self, gen: str, exp: int) -> Matrix:
        return mat_pow(self._images[gen], exp)

    @classmethod
    def identity(cls, n: int, field: Field = QQ) -> Representation:
        I = Matrix.identity(n, field)
        return cls(I, I)

    def to_dict(self) -> dict:
        return {"field": str(self.field), "a": self.img_a.to_list(), "b": self.img_b.to_list()}


def evaluate_word(rho: Representation, w: Word) -> Matrix:
    out = Matrix.identity(rho.n, rho.field)
    for s in w.syllables:
        out = mat_mul(out, rho.generator_power(s.gen, s.exp))
    return out


def random_matrix(n: int, field: Field, rng: random.Random, bound: int = DEFAULT_BOUND) -> Matrix:
    """Uniform residues over F_p, uniform integers in [-bound, bound] over Q."""
    if field.is_modp:
        draw = lambda: rng.randrange(field.p)  # noqa: E731
    else:
        draw = lambda: rng.randint(-bound, bound)  # noqa: E731
    return Matrix(field, tuple(tuple(draw() for _ in range(n)) for _ in range(n)))


def random_representation(
    n: int,
    kind: str | Field = MODP,
    seed: int = 0,
    bound: int = DEFAULT_BOUND,
    prime: int = MERSENNE_61,
    max_retries: int = DEFAULT_RETRIES,
) -> Representation:
    """Deterministic random pair of invertible matrices for a given seed."""
    if n < 1:
        raise DomainError(f"dimension must be >= 1, got {n}")
    if bound < 1:
        raise DomainError(f"bound must be positive, got {bound}")
    field = make_field(kind, prime)
    rng = random.Random(seed)
    for _ in range(max_retries):
        A = random_matrix(n, field, rng, bound)
        B = random_matrix(n, field, rng, bound)
        if determinant(A) != 0 and determinant(B) != 0:
            return Representation(A, B)
    raise ResampleExhausted(
        f"no invertible pair after {max_retries} draws (n={n}, field={field}, seed={seed})"
    )


# -- chain traces ---------------------------------------------------------
#
# Class representatives are evaluated along a trie of their syllables, so
# words with a common prefix share the partial product. Each trie level is a
# batch: with numpy for F_p (when a kernel exists), else per node.


_TRIES: weakref.WeakKeyDictionary = weakref.WeakKeyDictionary()


def _trie(chain: Chain):
    cached = _TRIES.get(chain)
    if cached is None:
        cached = _TRIES[chain] = _build_trie(chain)
    return cached


@dataclass
class _TrieLevel:
    size: int
    nodes: list[tuple[int, tuple[str, int]]]  # (parent, syllable) per node
    groups: dict[tuple[str, int], tuple[np.ndarray, np.ndarray]]  # syllable -> (nodes, parents)


def _build_trie(chain: Chain):
    levels: list[list[tuple[int, tuple[str, int]]]] = []
    index: list[dict] = []
    ends: dict[int, list[tuple[int, int]]] = {}  # depth -> [(node, coeff)]
    for cls, coeff in chain.items():
        node = 0
        syl = cls.word().syllables
        for depth, s in enumerate(syl):
            if depth == len(levels):
                levels.append([])
                index.append({})
            key = (node, (s.gen, s.exp))
            found = index[depth].get(key)
            if found is None:
                found = len(levels[depth])
                index[depth][key] = found
                levels[depth].append(key)
            node = found
        ends.setdefault(len(syl), []).append((node, coeff))
    out = []
    for nodes in levels:
        groups: dict = {}
        for idx, (parent, s) in enumerate(nodes):
            groups.setdefault(s, ([], []))
            groups[s][0].append(idx)
            groups[s][1].append(parent)
        out.append(
            _TrieLevel(
                size=len(nodes),
                nodes=nodes,
                groups={s: (np.array(i), np.array(q)) for s, (i, q) in groups.items()},
            )
        )
    return out, ends


def trace_of_chain(rho: Representation, c: Chain) -> Scalar:
    """Sum of coeff * tr(rho(w)) over the terms of the chain."""
    F = rho.field
    if not c:
        return F(0)
    levels, ends_at = _trie(c)

    powers: dict[tuple[str, int], Matrix] = {}

    def power(s):
        if s not in powers:
            powers[s] = rho.generator_power(*s)
        return powers[s]

    total = 0
    batched = F.is_modp and _batched.supports(F.p)
    if batched:
        prev = np.array([Matrix.identity(rho.n, F).rows], dtype=np.uint64)
        traces = lambda mats: _batched.batch_trace(mats, F.p)  # noqa: E731
    else:
        prev = [Matrix.identity(rho.n, F)]
        traces = lambda mats: [trace(M) for M in mats]  # noqa: E731

    for depth in range(len(levels) + 1):
        if depth in ends_at:
            tr = traces(prev)
            total += sum(coeff * tr[node] for node, coeff in ends_at[depth])
        if depth == len(levels):
            break
        level = levels[depth]
        if batched:
            cur = np.empty((level.size, rho.n, rho.n), dtype=np.uint64)
            for s, (idxs, parents) in level.groups.items():
                Y = np.array(power(s).rows, dtype=np.uint64)
                cur[idxs] = _batched.batch_matmul(prev[parents], Y, F.p)
        else:
            cur = [mat_mul(prev[parent], power(s)) for parent, s in level.nodes]
        prev = cur
    return F(total)
