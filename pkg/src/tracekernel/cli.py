"""Command line: ``tracekernel construct | verify <check> | bench``.

Every flag can also be set through an environment variable named
``TRACEKERNEL_<FLAG>`` (for example ``TRACEKERNEL_SEED=7``); flags win.
"""

from __future__ import annotations

import argparse
import os
import random
import statistics
import sys
import time
from dataclasses import dataclass

import sympy

from . import verify as V
from .construction import DEFAULT_CAP, build_theta
from .errors import DomainError, ResourceError
from .linrep import DEFAULT_BOUND, MERSENNE_61, MODP, RATIONAL, make_field, random_matrix

ENV_PREFIX = "TRACEKERNEL_"
CHECKS = ("kernel", "al", "distinct", "homology", "control", "sl2", "all")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass
class RunConfig:
    command: str
    n: int
    trials: int | None
    kind: str
    prime: int
    seed: int
    bound: int
    cap: int
    out: str | None
    workers: int
    check: str | None = None
    sharpness: bool = False

    def validate(self) -> None:
        if self.n < 1:
            raise DomainError(f"--n must be >= 1, got {self.n}")
        if self.trials is not None and self.trials < 1:
            raise DomainError(f"--trials must be >= 1, got {self.trials}")
        if self.kind == MODP and not sympy.isprime(self.prime):
            raise DomainError(f"--prime {self.prime} is not prime")
        if self.bound < 1:
            raise DomainError("--bound must be positive")
        if self.workers < 1:
            raise DomainError("--workers must be >= 1")

    @property
    def resolved_trials(self) -> int:
        return self.trials if self.trials is not None else V.DEFAULT_TRIALS[self.kind]


def _env(name: str, default, cast=str):
    raw = os.environ.get(ENV_PREFIX + name.upper())
    return default if raw is None else cast(raw)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=_env("n", 1, int))
    common.add_argument("--trials", type=int, default=_env("trials", None, int))
    common.add_argument("--kind", choices=(MODP, RATIONAL), default=_env("kind", MODP))
    common.add_argument("--prime", type=int, default=_env("prime", MERSENNE_61, int))
    common.add_argument("--seed", type=int, default=_env("seed", 0, int))
    common.add_argument("--bound", type=int, default=_env("bound", DEFAULT_BOUND, int))
    common.add_argument("--cap", type=int, default=_env("cap", DEFAULT_CAP, int))
    common.add_argument("--workers", type=int, default=_env("workers", 1, int))
    common.add_argument("--out", default=_env("out", None))

    parser = argparse.ArgumentParser(
        prog="tracekernel",
        description="Build the kernel chains Theta_n and verify their trace identities exactly.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("construct", parents=[common], help="write Theta_n as chain JSON")
    pv = sub.add_parser("verify", parents=[common], help="run a verification check")
    pv.add_argument("check", choices=CHECKS)
    pv.add_argument("--sharpness", action="store_true",
                    help="with 'al', also look for a nonzero (2n-1)-tuple")
    sub.add_parser("bench", parents=[common], help="time the standard-polynomial evaluators")
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        n=args.n,
        trials=args.trials,
        kind=args.kind,
        prime=args.prime,
        seed=args.seed,
        bound=args.bound,
        cap=args.cap,
        out=args.out,
        workers=args.workers,
        check=getattr(args, "check", None),
        sharpness=getattr(args, "sharpness", False),
    )


def _write(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text + "\n")
        return
    with open(path, "w") as fh:
        fh.write(text + "\n")


def cmd_construct(cfg: RunConfig) -> int:
    theta = build_theta(cfg.n, cfg.cap)
    path = cfg.out or f"theta_{cfg.n}.json"
    _write(theta.to_json(), path)
    lengths = [len(cls.letters) for cls in theta.terms]
    print(f"n={cfg.n} support_size={len(theta)} letter_length min={min(lengths)} "
          f"max={max(lengths)} -> {path}")
    return EXIT_OK


def run_check(cfg: RunConfig) -> V.VerificationReport:
    trials = cfg.resolved_trials
    kw = dict(kind=cfg.kind, seed=cfg.seed, bound=cfg.bound, prime=cfg.prime)
    check = cfg.check
    if check == "kernel":
        return V.verify_kernel(cfg.n, trials, cap=cfg.cap, workers=cfg.workers, **kw)
    if check == "al":
        report = V.verify_amitsur_levitzki(cfg.n, trials, workers=cfg.workers, **kw)
        if cfg.sharpness:
            sharp = V.verify_al_sharpness(cfg.n, min(trials, 10), **kw)
            report.details["sharpness"] = sharp.to_dict(timing=False)
            if not sharp.passed:
                report.fail({"sharpness": "no nonzero (2n-1)-tuple found"})
        return report
    if check == "distinct":
        return V.verify_noncancellation(cfg.n, cfg.cap)
    if check == "homology":
        return V.verify_homology(cfg.n, cfg.cap)
    if check == "control":
        return V.verify_negative_control(cfg.n, min(trials, 10), cap=cfg.cap, **kw)
    if check == "sl2":
        return V.verify_sl2_relation(trials, cfg.seed, cfg.bound)
    if check == "all":
        return V.verify_all(cfg.n, trials, cap=cfg.cap, workers=cfg.workers, **kw)
    raise DomainError(f"unknown check {check!r}")


def cmd_verify(cfg: RunConfig) -> int:
    report = run_check(cfg)
    _write(report.to_json(), cfg.out)
    print(f"{report.check}: {report.outcome} ({report.elapsed_ms:.1f} ms)", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAIL


def _time_ms(fn, repeat: int = 1) -> float:
    samples = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        samples.append((time.perf_counter() - t0) * 1000.0)
    return statistics.median(samples)


def bench_rows(max_n: int, cfg: RunConfig, naive_max_m: int = 8) -> list[tuple[int, str, float]]:
    """Rows (n, algorithm, elapsed_ms) for n = 1..max_n.

    Naive expansion is skipped once 2n exceeds naive_max_m; its cost grows as (2n)!.
    """
    field_ = make_field(cfg.kind, cfg.prime)
    rows = []
    for n in range(1, max_n + 1):
        rng = random.Random(cfg.seed ^ n)
        mats = [random_matrix(n, field_, rng, cfg.bound) for _ in range(2 * n)]
        if 2 * n <= naive_max_m:
            rows.append((n, "al_naive", _time_ms(lambda: V.al_sum_naive(mats, cap=2 * n))))
        rows.append((n, "al_fast", _time_ms(lambda: V.al_sum_fast(mats))))
        if 2 * n <= cfg.cap:
            build_theta(n, cfg.cap)
            rows.append((n, "kernel_trial", _time_ms(
                lambda: V.verify_kernel(n, 1, field_, cfg.seed, cfg.bound, cfg.prime, cfg.cap))))
    return rows


def cmd_bench(cfg: RunConfig) -> int:
    print("n,algorithm,elapsed_ms")
    for n, algo, ms in bench_rows(cfg.n, cfg):
        print(f"{n},{algo},{ms:.3f}")
    return EXIT_OK


COMMANDS = {"construct": cmd_construct, "verify": cmd_verify, "bench": cmd_bench}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = _config(args)
    try:
        cfg.validate()
    except DomainError as exc:
        parser.print_usage(sys.stderr)
        print(f"tracekernel: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[cfg.command](cfg)
    except (ResourceError, DomainError) as exc:
        print(f"tracekernel: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"tracekernel: I/O error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
