"""Command-line entry point.

Exit codes: 0 all checks pass, 1 a check failed (or, with --strict, a
precondition warning was raised), 2 usage or input error.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

from sympy import isprime

from . import bkk, ultra
from .center import Poly, classical_bracket, poisson_bracket, random_poly, xi
from .errors import WeylBKKError
from .io import emit_report, parse_morphism, parse_word, ring_to_dict, symplecto_to_dict
from .morphisms import degree, random_tame_word, word_to_morphism
from .scalars import INTEGERS, RingKind, prime_field
from .weyl import omega

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    """Validated command-line configuration."""

    subcommand: str
    n: int = 1
    p: int | None = None
    primes: list[int] | None = None
    seed: int = 0
    count: int = 10
    length: int = 4
    degree_bound: int = 9
    generator_degree: int = 3
    coeff_bound: int = 1
    samples: int = 20
    morphism: Path | None = None
    word: Path | None = None
    untwist: bool = False
    strict: bool = False
    format: str = "human"
    timing: bool = True
    x: str | None = None
    m: int | None = None
    length_bits: int = 10

    def validate(self) -> RunConfig:
        if self.n < 1:
            raise UsageError("--n must be positive")
        if self.p is not None and not isprime(self.p):
            raise UsageError(f"--p {self.p} is not prime")
        for q in self.primes or []:
            if not isprime(q):
                raise UsageError(f"{q} in --primes is not prime")
        if self.primes is not None and len(set(self.primes)) != len(self.primes):
            raise UsageError("--primes must be distinct")
        if min(self.count, self.length + 1, self.degree_bound, self.generator_degree, self.coeff_bound, self.samples) < 1:
            raise UsageError("size parameters must be positive")
        return self


@dataclass
class Outcome:
    command: str
    params: dict[str, Any]
    reports: list[dict[str, Any]]
    passed: bool
    warnings: list[str] = field(default_factory=list)
    summary: list[str] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {
            "command": self.command,
            "params": self.params,
            "pass": self.passed,
            "warnings": self.warnings,
            "reports": self.reports,
        }


def _primes_arg(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.replace(" ", "").split(",") if tok]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad prime list {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["human", "structured"], default="human")
    common.add_argument("--strict", action="store_true", help="treat precondition warnings as failures")
    common.add_argument("--no-timing", dest="timing", action="store_false", help="omit timing fields")
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="weylbkk", description="Weyl algebra / center symplectomorphism checks")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    vb = sub.add_parser("verify-bracket", parents=[common], help="bracket property suite on the center")
    vb.add_argument("--n", type=int, default=1)
    vb.add_argument("--p", type=int, required=True)
    vb.add_argument("--samples", type=int, default=20, help="random triples per property")

    fc = sub.add_parser("fc", parents=[common], help="center restriction of a morphism document")
    fc.add_argument("--morphism", type=Path, required=True)
    fc.add_argument("--p", type=int, help="prime (required for documents over Z)")
    fc.add_argument("--untwist", action="store_true", help="apply inverse Frobenius to the result")

    ind = sub.add_parser("independence", parents=[common], help="per-prime and CRT comparison for a tame word")
    ind.add_argument("--word", type=Path, required=True)
    ind.add_argument("--primes", type=_primes_arg, help="comma-separated primes (default: smallest above the bound)")

    rs = sub.add_parser("random-suite", parents=[common], help="independence, symplecticity and dominance on seeded words")
    rs.add_argument("--n", type=int, default=1)
    rs.add_argument("--count", type=int, default=10)
    rs.add_argument("--length", type=int, default=4, help="word length")
    rs.add_argument("--degree-bound", type=int, default=9)
    rs.add_argument("--generator-degree", type=int, default=3)
    rs.add_argument("--coeff-bound", type=int, default=1)
    rs.add_argument("--primes", type=_primes_arg)

    ud = sub.add_parser("ultra-demo", parents=[common], help="nearest-point approximation bound")
    ud.add_argument("--p", type=int, required=True)
    ud.add_argument("--m", type=int, required=True)
    ud.add_argument("--x", default="0", help="integer, or b:<bits> with position 1 first")
    ud.add_argument("--L", dest="length_bits", type=int, default=10, help="truncation length")
    return parser


def config_from_args(argv: Sequence[str] | None = None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    values = {k: v for k, v in vars(ns).items() if v is not None}
    return RunConfig(**values).validate()


# -- commands ---------------------------------------------------------------


def cmd_verify_bracket(cfg: RunConfig) -> Outcome:
    n, p = cfg.n, cfg.p
    ring = prime_field(p)
    nv = 2 * n
    rng = random.Random(cfg.seed)
    checks: dict[str, list] = {"generators": [], "oracle": [], "antisymmetry": [], "leibniz": [], "jacobi": []}
    for i in range(nv):
        for j in range(nv):
            value = poisson_bracket(xi(n, ring, i + 1), xi(n, ring, j + 1))
            if value != Poly.constant(nv, ring, omega(n, i, j)):
                checks["generators"].append({"i": i + 1, "j": j + 1, "value": str(value)})
    for _ in range(cfg.samples):
        a, b, c = (random_poly(rng, nv, ring, 3, 3) for _ in range(3))
        ab = poisson_bracket(a, b)
        triple = {"a": str(a), "b": str(b), "c": str(c)}
        if ab != classical_bracket(a, b):
            checks["oracle"].append(triple)
        if ab != -poisson_bracket(b, a):
            checks["antisymmetry"].append(triple)
        if poisson_bracket(a, b * c) != ab * c + b * poisson_bracket(a, c):
            checks["leibniz"].append(triple)
        jac = (
            poisson_bracket(a, poisson_bracket(b, c))
            + poisson_bracket(b, poisson_bracket(c, a))
            + poisson_bracket(c, ab)
        )
        if jac:
            checks["jacobi"].append(triple)
    reports = [
        {"check": name, "params": {"n": n, "p": p}, "pass": not wit, "witnesses": wit}
        for name, wit in checks.items()
    ]
    return Outcome(
        "verify-bracket",
        {"n": n, "p": p, "seed": cfg.seed, "samples": cfg.samples},
        reports,
        all(r["pass"] for r in reports),
        summary=[f"{r['check']}: {'pass' if r['pass'] else 'FAIL'}" for r in reports],
    )


def _read(path: Path) -> str:
    try:
        return path.read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def cmd_fc(cfg: RunConfig) -> Outcome:
    f = parse_morphism(_read(cfg.morphism))
    if f.ring.kind is RingKind.INTEGERS:
        if cfg.p is None:
            raise UsageError("--p is required for a morphism over Z")
        f = f.reduce_mod_p(cfg.p)
    elif cfg.p is not None and cfg.p != f.ring.characteristic:
        raise UsageError(f"--p {cfg.p} disagrees with the document ring {f.ring}")
    p = f.ring.require_char_p()
    warnings = []
    if p < degree(f) + 2:
        warnings.append(f"p={p} is below the degree bound Deg f + 2 = {degree(f) + 2}")
    s = bkk.center_restriction(f)
    if cfg.untwist:
        s = bkk.untwist(s)
    verdict = bkk.verify_symplectic(s)
    label = "phi_p" if cfg.untwist else "f_c"
    summary = [f"{label}(xi{i + 1}) = {im}" for i, im in enumerate(s.images)]
    summary.append(f"symplectic: {'pass' if verdict.passed else 'FAIL'}")
    return Outcome(
        "fc",
        {"p": p, "untwist": cfg.untwist, "ring": ring_to_dict(f.ring), "degree": degree(f)},
        [{"check": label, "map": symplecto_to_dict(s)}, verdict.to_dict()],
        verdict.passed,
        warnings,
        summary,
    )


def _independence_summary(rep: bkk.IndependenceReport) -> list[str]:
    lines = []
    for r in rep.per_prime:
        flag = "" if r.bound_ok else " (below degree bound)"
        lines.append(f"p={r.p}: {'match' if r.match else 'MISMATCH'}{flag}")
    lines.append(f"crt: {'consistent' if rep.crt_consistent else 'inconsistent'}"
                 f"{'' if rep.crt_range_ok else ' (modulus too small for tau)'}")
    return lines


def cmd_independence(cfg: RunConfig) -> Outcome:
    word = parse_word(_read(cfg.word))
    if word.ring != INTEGERS:
        raise UsageError("independence expects a word over Z")
    primes = cfg.primes or bkk.sufficient_primes(word)
    rep = bkk.independence_report(word, primes)
    warnings = [f"p={q} is below the degree bound Deg f + 2 = {rep.degree + 2}" for q in rep.precondition_flags]
    return Outcome(
        "independence",
        {"primes": primes},
        [rep.to_dict()],
        rep.passed,
        warnings,
        _independence_summary(rep),
    )


def cmd_random_suite(cfg: RunConfig) -> Outcome:
    reports, warnings, summary = [], [], []
    passed = True
    for k in range(cfg.count):
        seed = cfg.seed + k
        word = random_tame_word(
            seed, cfg.n, cfg.length, cfg.degree_bound, cfg.coeff_bound, generator_degree=cfg.generator_degree
        )
        primes = cfg.primes or bkk.sufficient_primes(word)
        rep = bkk.independence_report(word, primes)
        f = word_to_morphism(word)
        warnings += [f"seed {seed}: p={q} below the degree bound" for q in rep.precondition_flags]
        reports.append(rep.to_dict())
        ok = rep.passed
        eligible = [q for q in primes if q > 2 and q >= rep.degree + 2]
        if eligible:
            fp = f.reduce_mod_p(eligible[0])
            sym = bkk.verify_symplectic(bkk.phi_p(fp))
            dom = bkk.dominant_check(fp)
            reports += [sym.to_dict(), dom.to_dict()]
            ok = ok and sym.passed and dom.passed
        passed = passed and ok
        summary.append(f"seed {seed}: degree {rep.degree}, primes {primes}: {'pass' if ok else 'FAIL'}")
    return Outcome(
        "random-suite",
        {
            "seed": cfg.seed,
            "n": cfg.n,
            "count": cfg.count,
            "length": cfg.length,
            "degree_bound": cfg.degree_bound,
            "generator_degree": cfg.generator_degree,
            "coeff_bound": cfg.coeff_bound,
        },
        reports,
        passed,
        warnings,
        summary,
    )


def cmd_ultra_demo(cfg: RunConfig) -> Outcome:
    if cfg.length_bits < 1:
        raise UsageError("--L must be positive")
    try:
        x = ultra.bits_from_text(cfg.x, cfg.length_bits)
    except ValueError as exc:
        raise UsageError(f"bad --x: {exc}") from exc
    rep = ultra.approx_check(x, cfg.p, cfg.m)
    return Outcome(
        "ultra-demo",
        {"p": cfg.p, "m": cfg.m, "L": cfg.length_bits},
        [rep],
        rep["pass"],
        summary=[
            f"x = {''.join(map(str, x))}",
            f"nearest e({rep['nearest']}), d2 = {rep['distance']} < 1/{cfg.m}: {'pass' if rep['pass'] else 'FAIL'}",
        ],
    )


COMMANDS = {
    "verify-bracket": cmd_verify_bracket,
    "fc": cmd_fc,
    "independence": cmd_independence,
    "random-suite": cmd_random_suite,
    "ultra-demo": cmd_ultra_demo,
}


def run(cfg: RunConfig) -> tuple[int, Outcome]:
    out = COMMANDS[cfg.subcommand](cfg)
    if not out.passed:
        return EXIT_FAIL, out
    if cfg.strict and out.warnings:
        return EXIT_FAIL, out
    return EXIT_PASS, out


def render(out: Outcome, cfg: RunConfig, code: int, elapsed_ms: float) -> str:
    if cfg.format == "structured":
        data = out.to_dict()
        data["exit_code"] = code
        if cfg.timing:
            data["timing_ms"] = round(elapsed_ms, 3)
        return emit_report(data, timing=cfg.timing)
    lines = list(out.summary)
    lines += [f"warning: {w}" for w in out.warnings]
    lines.append(f"{out.command}: {'PASS' if code == EXIT_PASS else 'FAIL'}")
    return "\n".join(lines)


def main(argv: Sequence[str] | None = None) -> int:
    try:
        cfg = config_from_args(argv)
    except SystemExit as exc:  # argparse usage errors
        return EXIT_USAGE if exc.code else EXIT_PASS
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    start = time.perf_counter()
    try:
        code, out = run(cfg)
    except (UsageError, WeylBKKError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(render(out, cfg, code, (time.perf_counter() - start) * 1000))
    return code


if __name__ == "__main__":
    sys.exit(main())
