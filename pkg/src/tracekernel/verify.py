"""Exact verifiers for the standard polynomial identity and the kernel chain Theta_n.

Every check returns a :class:`VerificationReport`; a failing report carries
enough witness data (matrices, seeds, values) to reproduce the failure.
"""

from __future__ import annotations

import json
import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from typing import Callable, Sequence

from .chains import Chain
from .construction import (
    DEFAULT_CAP,
    build_theta,
    build_x,
    certify_homology,
    certify_pairwise_distinct,
    enumerate_signed_permutations,
)
from .errors import (
    CertificationFailure,
    ControlFailure,
    DimensionMismatch,
    DomainError,
    KindMismatch,
    ResourceError,
    VerificationFailure,
)
from .linrep import (
    DEFAULT_BOUND,
    MERSENNE_61,
    MODP,
    QQ,
    Matrix,
    Representation,
    evaluate_word,
    inverse,
    make_field,
    mat_add,
    mat_mul,
    mat_neg,
    random_matrix,
    random_representation,
    trace,
    trace_of_chain,
)

FAST_MAX_M = 16  # 2^16 stored partial sums
NAIVE_CHECK_MAX_M = 8
DEFAULT_TRIALS = {"modp": 100, "rational": 25}


@dataclass
class VerificationReport:
    check: str
    params: dict
    outcome: str = "pass"
    witness: object = None
    details: dict = field(default_factory=dict)
    elapsed_ms: float = 0.0

    @property
    def passed(self) -> bool:
        return self.outcome == "pass"

    def fail(self, witness) -> None:
        if self.outcome == "pass":
            self.outcome = "fail"
            self.witness = witness

    def raise_for_outcome(self) -> None:
        if not self.passed:
            exc = ControlFailure if self.check == "control" else VerificationFailure
            raise exc(self)

    def to_dict(self, timing: bool = True) -> dict:
        details = self.details
        if isinstance(details.get("reports"), list):
            details = dict(details, reports=[r.to_dict(timing) for r in details["reports"]])
        d = {
            "check": self.check,
            "params": self.params,
            "outcome": self.outcome,
            "witness": self.witness,
            "details": details,
        }
        if timing:
            d["elapsed_ms"] = round(self.elapsed_ms, 3)
        return d

    def to_json(self, timing: bool = True, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(timing), indent=indent, sort_keys=False)


def _jsonable(x):
    if isinstance(x, Matrix):
        return x.to_list()
    if isinstance(x, Representation):
        return x.to_dict()
    if isinstance(x, Fraction):
        return str(x)
    return x


class _Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.ms = (time.perf_counter() - self.t0) * 1000.0


def _map_trials(fn: Callable, seeds: Sequence[int], workers: int) -> list:
    if workers and workers > 1 and len(seeds) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, seeds, chunksize=max(1, len(seeds) // (4 * workers))))
    return [fn(s) for s in seeds]


def trial_seeds(seed: int, trials: int) -> list[int]:
    return [seed ^ t for t in range(trials)]


# -- standard polynomial ----------------------------------------------------


def _check_mats(mats: Sequence[Matrix]) -> None:
    if not mats:
        raise DomainError("need at least one matrix")
    f, n = mats[0].field, mats[0].n
    for X in mats[1:]:
        if X.field != f:
            raise KindMismatch(f"{X.field} vs {f}")
        if X.n != n:
            raise DimensionMismatch(f"{X.n} vs {n}")


def al_sum_naive(mats: Sequence[Matrix], cap: int = DEFAULT_CAP) -> Matrix:
    """Standard polynomial by direct expansion over all m! signed products."""
    _check_mats(mats)
    F, n = mats[0].field, mats[0].n
    total = Matrix.zeros(n, F)
    for p in enumerate_signed_permutations(len(mats), cap):
        prod = mats[p.images[0] - 1]
        for i in p.images[1:]:
            prod = mat_mul(prod, mats[i - 1])
        total = mat_add(total, prod if p.sign > 0 else mat_neg(prod))
    return total


def al_sum_fast(mats: Sequence[Matrix], max_m: int = FAST_MAX_M) -> Matrix:
    """Standard polynomial by dynamic programming over subsets.

    For a subset S of indices, M(S) is the signed sum of all orderings of S.
    Peeling off the first factor X_i of each ordering gives
    M(S) = sum over i in S of (-1)^(# of j in S below i) X_i M(S - {i}),
    with M(empty) = I. The answer is M({1..m}).
    """
    _check_mats(mats)
    m = len(mats)
    if m > max_m:
        raise ResourceError(f"subset table for m={m} exceeds the cap m <= {max_m}")
    F, n = mats[0].field, mats[0].n
    table: list[Matrix | None] = [None] * (1 << m)
    table[0] = Matrix.identity(n, F)
    for mask in range(1, 1 << m):
        acc = None
        below = 0
        for i in range(m):
            bit = 1 << i
            if not mask & bit:
                continue
            term = mat_mul(mats[i], table[mask ^ bit])
            if below % 2:
                term = mat_neg(term)
            acc = term if acc is None else mat_add(acc, term)
            below += 1
        table[mask] = acc
    return table[-1]


def _al_trial(t_seed: int, n: int, m: int, field_, bound: int, naive_check: bool):
    rng = random.Random(t_seed)
    mats = [random_matrix(n, field_, rng, bound) for _ in range(m)]
    fast = al_sum_fast(mats)
    naive = al_sum_naive(mats, cap=m) if naive_check else None
    return mats, fast, naive


def verify_amitsur_levitzki(
    n: int,
    trials: int = 100,
    kind: str = MODP,
    seed: int = 0,
    bound: int = DEFAULT_BOUND,
    prime: int = MERSENNE_61,
    num_matrices: int | None = None,
    naive_check_max: int = NAIVE_CHECK_MAX_M,
    workers: int = 1,
) -> VerificationReport:
    """Random m-tuples of n x n matrices must give S_m = 0 exactly (m = 2n by default).

    The matrices are arbitrary, not necessarily invertible. The first trial is
    cross-checked against the naive expansion when m <= naive_check_max.
    """
    m = 2 * n if num_matrices is None else num_matrices
    field_ = make_field(kind, prime)
    report = VerificationReport(
        "al",
        {"n": n, "m": m, "trials": trials, "kind": field_.kind, "seed": seed,
         "bound": bound, "prime": field_.p},
    )
    with _Timer() as tm:
        seeds = trial_seeds(seed, trials)
        fn = partial(_al_trial, n=n, m=m, field_=field_, bound=bound, naive_check=False)
        results = _map_trials(fn, seeds, workers)
        zeros = 0
        for t_seed, (mats, fast, _) in zip(seeds, results):
            if fast.is_zero():
                zeros += 1
            else:
                report.fail({"seed": t_seed, "matrices": [X.to_list() for X in mats],
                             "value": fast.to_list()})
        naive_checked = 0
        if m <= naive_check_max and trials:
            mats, fast, naive = _al_trial(seeds[0], n, m, field_, bound, naive_check=True)
            naive_checked = 1
            if naive != fast:
                report.fail({"seed": seeds[0], "matrices": [X.to_list() for X in mats],
                             "fast": fast.to_list(), "naive": naive.to_list()})
        report.details = {"zero_results": zeros, "naive_cross_checks": naive_checked}
    report.elapsed_ms = tm.ms
    return report


def verify_al_sharpness(
    n: int,
    trials: int = 10,
    kind: str = MODP,
    seed: int = 0,
    bound: int = DEFAULT_BOUND,
    prime: int = MERSENNE_61,
) -> VerificationReport:
    """Passes when some random (2n-1)-tuple has a nonzero standard polynomial."""
    m = 2 * n - 1
    field_ = make_field(kind, prime)
    report = VerificationReport(
        "al_sharpness",
        {"n": n, "m": m, "trials": trials, "kind": field_.kind, "seed": seed,
         "bound": bound, "prime": field_.p},
    )
    with _Timer() as tm:
        found = None
        tried = 0
        for t_seed in trial_seeds(seed, trials):
            tried += 1
            mats, fast, _ = _al_trial(t_seed, n, m, field_, bound, naive_check=False)
            if not fast.is_zero():
                found = {"seed": t_seed, "matrices": [X.to_list() for X in mats],
                         "value": fast.to_list()}
                break
        if found is None:
            report.outcome = "fail"
        report.witness = found
        report.details = {"tuples_tried": tried}
    report.elapsed_ms = tm.ms
    return report


# -- kernel chain -------------------------------------------------------------


def _kernel_trial(t_seed: int, n: int, theta: Chain, kind, bound: int, prime: int):
    rho = random_representation(n, kind, t_seed, bound, prime)
    chain_value = trace_of_chain(rho, theta)
    xs = [evaluate_word(rho, build_x(i)) for i in range(1, 2 * n + 1)]
    al_value = trace(mat_mul(rho.img_a, al_sum_fast(xs)))
    return rho, chain_value, al_value


def verify_kernel(
    n: int,
    trials: int = 100,
    kind: str = MODP,
    seed: int = 0,
    bound: int = DEFAULT_BOUND,
    prime: int = MERSENNE_61,
    cap: int = DEFAULT_CAP,
    workers: int = 1,
) -> VerificationReport:
    """tr(rho(Theta_n)) = 0 for random rho: F(a, b) -> GL_n, computed two ways.

    Route one sums the traces of the class representatives of Theta_n. Route
    two forms X_i = rho(x_i) and takes tr(A S_2n(X_1, ..., X_2n)).
    """
    field_ = make_field(kind, prime)
    report = VerificationReport(
        "kernel",
        {"n": n, "trials": trials, "kind": field_.kind, "seed": seed,
         "bound": bound, "prime": field_.p},
    )
    with _Timer() as tm:
        theta = build_theta(n, cap)
        seeds = trial_seeds(seed, trials)
        fn = partial(_kernel_trial, n=n, theta=theta, kind=field_, bound=bound, prime=prime)
        zeros = 0
        for t_seed, (rho, cv, av) in zip(seeds, _map_trials(fn, seeds, workers)):
            if cv == 0 and av == 0:
                zeros += 1
            else:
                report.fail({"seed": t_seed, "representation": rho.to_dict(),
                             "chain_trace": _jsonable(cv), "al_trace": _jsonable(av)})
        report.details = {"support_size": len(theta), "zero_traces": zeros}
    report.elapsed_ms = tm.ms
    return report


def verify_noncancellation(n: int, cap: int = DEFAULT_CAP) -> VerificationReport:
    """Theta_n has (2n)! distinct classes, each with coefficient +1 or -1."""
    report = VerificationReport("distinct", {"n": n})
    with _Timer() as tm:
        try:
            cert = certify_pairwise_distinct(n, cap)
        except CertificationFailure as exc:
            report.fail({"error": str(exc), "witness": exc.witness})
            cert = None
        theta = build_theta(n, cap)
        coeffs = list(theta.terms.values())
        expected = math.factorial(2 * n)
        pos = sum(1 for c in coeffs if c == 1)
        neg = sum(1 for c in coeffs if c == -1)
        if len(theta) != expected:
            report.fail({"support_size": len(theta), "expected": expected})
        if pos + neg != len(coeffs) or pos != neg:
            report.fail({"positive": pos, "negative": neg, "terms": len(coeffs)})
        report.details = {
            "support_size": len(theta),
            "expected": expected,
            "positive": pos,
            "negative": neg,
            "certificate": cert.to_dict() if cert else None,
        }
    report.elapsed_ms = tm.ms
    return report


def verify_homology(n: int, cap: int = DEFAULT_CAP) -> VerificationReport:
    report = VerificationReport("homology", {"n": n})
    with _Timer() as tm:
        try:
            cert = certify_homology(n, cap)
            report.details = cert.to_dict()
            if not cert.excludes_boundary:
                report.fail(cert.to_dict())
        except CertificationFailure as exc:
            report.fail({"error": str(exc), "witness": exc.witness})
    report.elapsed_ms = tm.ms
    return report


def verify_negative_control(
    n: int,
    trials: int = 10,
    kind: str = MODP,
    seed: int = 0,
    bound: int = DEFAULT_BOUND,
    prime: int = MERSENNE_61,
    cap: int = DEFAULT_CAP,
) -> VerificationReport:
    """Guards against an evaluator that returns 0 for everything.

    Theta_n with its first term removed and the single class |a| must each
    give a nonzero trace for some trial, while the full Theta_n stays zero.
    """
    field_ = make_field(kind, prime)
    report = VerificationReport(
        "control",
        {"n": n, "trials": trials, "kind": field_.kind, "seed": seed,
         "bound": bound, "prime": field_.p},
    )
    with _Timer() as tm:
        theta = build_theta(n, cap)
        dropped = theta.items()[0][0]
        partial_chain = theta.without(dropped)
        single_a = Chain.of("a")
        identity_value = trace_of_chain(Representation.identity(n, field_), single_a)
        partial_nonzero = a_nonzero = 0
        full_nonzero = []
        for t_seed in trial_seeds(seed, trials):
            rho = random_representation(n, field_, t_seed, bound, prime)
            if trace_of_chain(rho, partial_chain) != 0:
                partial_nonzero += 1
            if trace_of_chain(rho, single_a) != 0:
                a_nonzero += 1
            if trace_of_chain(rho, theta) != 0:
                full_nonzero.append(t_seed)
        if identity_value != field_(n):
            report.fail({"identity_trace_of_a": _jsonable(identity_value)})
        if partial_nonzero == 0:
            report.fail({"dropped_class": dropped.letters, "all_partial_traces_zero": True})
        if a_nonzero == 0:
            report.fail({"all_traces_of_a_zero": True})
        if full_nonzero:
            report.fail({"full_theta_nonzero_seeds": full_nonzero})
        report.details = {
            "dropped_class": dropped.letters,
            "partial_nonzero_trials": partial_nonzero,
            "single_a_nonzero_trials": a_nonzero,
            "full_theta_nonzero_trials": len(full_nonzero),
        }
    report.elapsed_ms = tm.ms
    return report


# -- SL_2 trace relation ------------------------------------------------------


def random_sl2(rng: random.Random, bound: int = DEFAULT_BOUND) -> Matrix:
    """Integer a, b, c with a != 0 and d = (1 + bc) / a, so det = 1 exactly."""
    while True:
        a = rng.randint(-bound, bound)
        if a:
            break
    b = rng.randint(-bound, bound)
    c = rng.randint(-bound, bound)
    d = Fraction(1 + b * c, a)
    return Matrix.from_rows([[a, b], [c, d]], QQ)


def verify_sl2_relation(trials: int = 100, seed: int = 0, bound: int = DEFAULT_BOUND) -> VerificationReport:
    """tr(AB) + tr(A^-1 B) = tr(A) tr(B) on random exact SL_2(Q) pairs."""
    report = VerificationReport("sl2", {"trials": trials, "seed": seed, "bound": bound})
    with _Timer() as tm:
        held = 0
        for t_seed in trial_seeds(seed, trials):
            rng = random.Random(t_seed)
            A, B = random_sl2(rng, bound), random_sl2(rng, bound)
            lhs = trace(mat_mul(A, B)) + trace(mat_mul(inverse(A), B))
            rhs = trace(A) * trace(B)
            if lhs == rhs:
                held += 1
            else:
                report.fail({"seed": t_seed, "A": A.to_list(), "B": B.to_list(),
                             "lhs": _jsonable(lhs), "rhs": _jsonable(rhs)})
        report.details = {"relations_held": held}
    report.elapsed_ms = tm.ms
    return report


# -- everything ---------------------------------------------------------------

ALL_CHECKS = ("distinct", "homology", "al", "kernel", "control", "sl2")


def verify_all(
    n: int,
    trials: int | None = None,
    kind: str = MODP,
    seed: int = 0,
    bound: int = DEFAULT_BOUND,
    prime: int = MERSENNE_61,
    cap: int = DEFAULT_CAP,
    workers: int = 1,
) -> VerificationReport:
    """Run every check, in the order the argument for Theta_n proceeds."""
    field_ = make_field(kind, prime)
    if trials is None:
        trials = DEFAULT_TRIALS[field_.kind]
    report = VerificationReport(
        "all",
        {"n": n, "trials": trials, "kind": field_.kind, "seed": seed,
         "bound": bound, "prime": field_.p, "cap": cap},
    )
    with _Timer() as tm:
        subs = [
            verify_noncancellation(n, cap),
            verify_homology(n, cap),
            verify_amitsur_levitzki(n, trials, field_, seed, bound, prime, workers=workers),
            verify_kernel(n, trials, field_, seed, bound, prime, cap, workers),
            verify_negative_control(n, min(trials, 10), field_, seed, bound, prime, cap),
            verify_sl2_relation(trials, seed, bound),
        ]
        failed = [r.check for r in subs if not r.passed]
        if failed:
            report.fail({"failed_checks": failed})
        report.details = {"reports": subs}
    report.elapsed_ms = tm.ms
    return report

