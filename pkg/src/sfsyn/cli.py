"""Command-line surface: witness emission, bound verification, the
embedding checker, the exhaustive search, letter-necessity evidence,
and a bare suffix-freeness test.

Every command is deterministic for fixed inputs and flags.  Reports
consist of named assertions with expected and actual values; timing
lines are emitted separately so byte comparison of the assertion
section stays meaningful.  Exit codes: 0 all assertions pass, 1 some
assertion failed, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field

from .collisions import pair_statuses
from .dfa import (
    Dfa,
    format_dfa,
    is_minimal,
    parse_dfa,
    suffix_free_violation,
    to_dot,
    transition_semigroup,
    witness,
)
from .injection import strict_bound_witness, verify_injective
from .search import search_max
from .semigroup import closure, wsf_bound


class UsageError(Exception):
    """Bad arguments or unreadable input; maps to exit code 2."""


@dataclass(frozen=True)
class Assertion:
    name: str
    expected: object
    actual: object
    ok: bool


def same(name: str, expected, actual) -> Assertion:
    return Assertion(name, expected, actual, expected == actual)


@dataclass
class VerificationReport:
    """One command run: what was asked, what was checked, how long it
    took.  Overall pass means every assertion passed, and the process
    exit status follows it."""

    command: str
    inputs: dict
    assertions: list[Assertion] = field(default_factory=list)
    details: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(a.ok for a in self.assertions)

    def to_json(self) -> dict:
        doc = {
            "command": self.command,
            "inputs": self.inputs,
            "assertions": [
                {
                    "name": a.name,
                    "expected": _plain(a.expected),
                    "actual": _plain(a.actual),
                    "pass": a.ok,
                }
                for a in self.assertions
            ],
            "passed": self.passed,
        }
        if self.details:
            doc["details"] = self.details
        doc["timings"] = self.timings
        return doc

    def render(self) -> str:
        lines = [f"command: {self.command}"]
        if self.inputs:
            lines.append(
                "inputs: " + " ".join(f"{k}={v}" for k, v in self.inputs.items())
            )
        for a in self.assertions:
            mark = "PASS" if a.ok else "FAIL"
            lines.append(f"{mark} {a.name}: expected {a.expected}, actual {a.actual}")
        for key, value in self.details.items():
            lines.append(f"note {key}: {value}")
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'}")
        for key, value in self.timings.items():
            lines.append(f"# timing {key}: {value:.3f}s")
        return "\n".join(lines) + "\n"


def _plain(value):
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return str(value)


def _emit(report: VerificationReport, as_json: bool) -> int:
    if as_json:
        print(json.dumps(report.to_json(), indent=2))
    else:
        sys.stdout.write(report.render())
    return 0 if report.passed else 1


def _load_dfa(path: str) -> Dfa:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e}") from None
    try:
        return parse_dfa(text)
    except ValueError as e:
        raise UsageError(f"{path}: {e}") from None


def _word(w: str) -> str:
    # empty words print as the conventional epsilon name
    return w if w else "(empty)"


# ----------------------------------------------------------- subcommands


def cmd_witness(args) -> int:
    if args.n < 4:
        raise UsageError("the witness family starts at n=4")
    d = witness(args.n)
    text = to_dot(d) if args.format == "dot" else format_dfa(d)
    if args.json:
        doc = {
            "command": "witness",
            "inputs": {"n": args.n, "format": args.format},
            "dfa": text,
        }
        print(json.dumps(doc, indent=2))
    else:
        sys.stdout.write(text)
    return 0


def cmd_verify_bound(args) -> int:
    if args.n < 4:
        raise UsageError("the bound is defined from n=4 up")
    if args.n > 8 and not args.allow_slow:
        raise UsageError(
            f"n={args.n} closes a semigroup of {wsf_bound(args.n)} elements; "
            "pass --allow-slow to run it anyway"
        )
    if args.n > 8:
        print(f"warning: n={args.n} may take a long time", file=sys.stderr)
    started = time.perf_counter()
    d = witness(args.n)
    sg = transition_semigroup(d)
    report = VerificationReport(command="verify-bound", inputs={"n": args.n})
    report.assertions.append(
        same("semigroup size reaches the bound", wsf_bound(args.n), sg.size)
    )
    report.assertions.append(
        same("witness language is suffix-free", True, suffix_free_violation(d) is None)
    )
    report.assertions.append(same("witness automaton is minimal", True, is_minimal(d)))
    colliding = sum(1 for s in pair_statuses(sg) if s.colliding)
    report.assertions.append(same("no interior pair collides", 0, colliding))
    if args.n >= 7:
        inj = verify_injective(sg)
        report.assertions.append(
            same("embedding is injective on the witness semigroup", True, inj.passed)
        )
        report.details["case_counts"] = dict(sorted(inj.case_counts.items()))
    report.timings["total"] = time.perf_counter() - started
    return _emit(report, args.json)


def cmd_phi(args) -> int:
    d = _load_dfa(args.dfa)
    if d.n < 7:
        raise UsageError("the embedding needs at least 7 states")
    started = time.perf_counter()
    report = VerificationReport(command="phi", inputs={"dfa": args.dfa, "n": d.n})
    violation = suffix_free_violation(d)
    if violation is not None:
        w, v = violation
        report.assertions.append(
            Assertion(
                "input language is suffix-free",
                "no accepted word is a proper suffix of another",
                f"both {_word(w + v)} and its suffix {_word(v)} are accepted",
                False,
            )
        )
        report.timings["total"] = time.perf_counter() - started
        return _emit(report, args.json)
    report.assertions.append(
        same("input language is suffix-free", True, True)
    )
    report.assertions.append(same("input automaton is minimal", True, is_minimal(d)))
    if not is_minimal(d):
        report.timings["total"] = time.perf_counter() - started
        return _emit(report, args.json)
    sg = transition_semigroup(d)
    inj = verify_injective(sg)
    report.assertions.append(
        same("every image collapses its interior", True, inj.all_images_collapsing)
    )
    report.assertions.append(same("images are pairwise distinct", True, inj.images_distinct))
    report.assertions.append(same("every image inverts back", True, inj.round_trips))
    report.assertions.append(
        Assertion("semigroup size within the bound", f"<= {inj.bound}", inj.size, inj.within_bound)
    )
    if inj.counterexample:
        report.details["counterexample"] = inj.counterexample
    report.details["case_counts"] = dict(sorted(inj.case_counts.items()))
    colliding = any(s.colliding for s in pair_statuses(sg))
    gap = strict_bound_witness(sg)
    if colliding:
        report.assertions.append(
            Assertion(
                "colliding pair forces a strict gap",
                "a collapsing transformation no element maps to",
                "found" if gap is not None else "missing",
                gap is not None,
            )
        )
        if gap is not None:
            report.details["gap_witness"] = str(gap.images)
    report.timings["total"] = time.perf_counter() - started
    return _emit(report, args.json)


def cmd_search(args) -> int:
    checkpoint_dir = os.environ.get("SFSYN_CHECKPOINT_DIR") or None
    try:
        result = search_max(
            args.n,
            args.target,
            max_letters=args.max_letters,
            checkpoint_dir=checkpoint_dir,
            resume_from=args.resume,
            threads=args.threads,
        )
    except ValueError as e:
        raise UsageError(str(e)) from None
    print(json.dumps(result.to_json(), indent=2))
    return 0 if result.uniqueness_confirmed else 1


def cmd_letters(args) -> int:
    if not 5 <= args.n <= 7:
        raise UsageError("letter-necessity evidence covers 5 <= n <= 7")
    started = time.perf_counter()
    d = witness(args.n)
    bound = wsf_bound(args.n)
    report = VerificationReport(command="letters", inputs={"n": args.n})
    for i, name in enumerate(d.letters):
        rest = [t for j, t in enumerate(d.delta) if j != i]
        size = closure(rest).size
        report.assertions.append(
            Assertion(
                f"dropping letter {name} shrinks the semigroup",
                f"size below {bound}",
                size,
                size < bound,
            )
        )
    report.timings["total"] = time.perf_counter() - started
    return _emit(report, args.json)


def cmd_suffix_free(args) -> int:
    d = _load_dfa(args.dfa)
    started = time.perf_counter()
    report = VerificationReport(command="suffix-free", inputs={"dfa": args.dfa})
    violation = suffix_free_violation(d)
    if violation is None:
        report.assertions.append(same("language is suffix-free", True, True))
    else:
        w, v = violation
        report.assertions.append(
            Assertion(
                "language is suffix-free",
                "no accepted word is a proper suffix of another",
                f"both {_word(w + v)} and its suffix {_word(v)} are accepted",
                False,
            )
        )
    report.timings["total"] = time.perf_counter() - started
    return _emit(report, args.json)


# ------------------------------------------------------------- the parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sfsyn",
        description="suffix-free syntactic complexity toolkit",
    )
    parser.add_argument("--json", action="store_true", help="emit reports as JSON")
    parser.add_argument("--threads", type=int, default=1, help="worker processes")
    parser.add_argument(
        "--seed", type=int, default=None, help="seed for sampled verification"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("witness", help="emit the five-letter witness DFA")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--format", choices=("dfa", "dot"), default="dfa")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("verify-bound", help="check the witness reaches the bound")
    p.add_argument("--n", type=int, required=True)
    p.add_argument(
        "--allow-slow", action="store_true", help="permit n beyond the default cap of 8"
    )
    p.set_defaults(func=cmd_verify_bound)

    p = sub.add_parser("phi", help="run the embedding over a DFA's semigroup")
    p.add_argument("dfa", help="path to a DFA file")
    p.set_defaults(func=cmd_phi)

    p = sub.add_parser("search", help="exhaustive maximality search")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--target", type=int, default=None)
    p.add_argument("--max-letters", type=int, default=10)
    p.add_argument("--resume", default=None, help="checkpoint file to resume from")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("letters", help="evidence that every witness letter is needed")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_letters)

    p = sub.add_parser("suffix-free", help="test a DFA file for suffix-freeness")
    p.add_argument("dfa", help="path to a DFA file")
    p.set_defaults(func=cmd_suffix_free)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
