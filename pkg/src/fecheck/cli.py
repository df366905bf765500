"""fecheck command line.

    fecheck <command> [path|expr] --seed N --samples N --report text|json --max-degree N

Commands: verify, polarize, degree, rank, hod, suite.  Output depends only on
the input and the seed.  Exit status is 0 iff every expected verdict matched
(or, for the probing commands, the probe found what it looks for).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Sequence

from fecheck import feq
from fecheck.atoms import AdditiveMap
from fecheck.exactfield import default_samples
from fecheck.genpoly import monomial_degree
from fecheck.multiadd import SymForm, polarize, sample_tuples
from fecheck.parser import ParseError, parse_expression
from fecheck.scenario_file import ScenarioFileError, load_scenarios
from fecheck.structure import hod_degree, kernel_rank

COMMANDS = ("verify", "polarize", "degree", "rank", "hod", "suite")


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: str | None = None
    seed: int = 7
    samples: int = 10
    report_format: str = "text"
    max_degree: int = 4

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.samples < 1:
            raise ValueError("--samples must be at least 1")
        if self.max_degree < 1:
            raise ValueError("--max-degree must be at least 1")
        if self.seed < 0:
            raise ValueError("--seed must be nonnegative")
        if self.report_format not in ("text", "json"):
            raise ValueError("--report must be text or json")
        if self.command != "suite" and not self.input:
            raise ValueError(f"{self.command} needs an input")


def _scenario_output(config: RunConfig, reports: list[feq.Report]) -> tuple[int, dict, list[str]]:
    mismatches = [r for r in reports if not r.matched]
    bundle = {
        "command": config.command,
        "seed": config.seed,
        "samples": config.samples,
        "results": [r.to_dict() for r in reports],
        "mismatches": len(mismatches),
    }
    lines = []
    for r in reports:
        mark = "ok  " if r.matched else "MISMATCH"
        actual = "PASS" if r.actual else "FAIL"
        expected = "pass" if r.expected else "fail"
        lines.append(f"{mark} {actual} {r.scenario} (expected {expected})")
        for w in r.witnesses:
            lines.append(f"       witness x = {w['input']}: lhs = {w['lhs']}, rhs = {w['rhs']}")
        for e in r.errors:
            lines.append(f"       error at x = {e['input']}: {e['error']}")
    lines.append(f"{len(reports)} scenarios, {len(mismatches)} mismatches (seed {config.seed})")
    return (0 if not mismatches else 1), bundle, lines


def _run_polarize(config, samples):
    f = parse_expression(config.input, "fn")
    n = config.max_degree
    P, verdict = polarize(f, n, samples[: min(len(samples), 5)])
    values = []
    for ys in sample_tuples(samples, n, 5):
        values.append({"ys": [str(y) for y in ys], "value": str(P(*ys))})
    bundle = {"command": "polarize", "n": n, "consistent": verdict.passed,
              "detail": verdict.detail, "values": values, "seed": config.seed}
    if verdict.witness:
        bundle["witness"] = verdict.witness
    lines = [f"polarize n={n}: {verdict.label} ({verdict.detail})"]
    lines += [f"  A({', '.join(v['ys'])}) = {v['value']}" for v in values]
    return (0 if verdict.passed else 1), bundle, lines


def _run_degree(config, samples):
    f = parse_expression(config.input, "fn")
    n = monomial_degree(f, config.max_degree, samples)
    bundle = {"command": "degree", "degree": n, "max_degree": config.max_degree,
              "seed": config.seed, "samples": len(samples)}
    text = f"degree {n}" if n is not None else f"no degree <= {config.max_degree}"
    return (0 if n is not None else 1), bundle, [text]


def _run_rank(config, samples):
    value = parse_expression(config.input)
    if isinstance(value, AdditiveMap):
        K = lambda x, y: value(x * y)  # noqa: E731
        what = f"(x, y) -> {value}(x*y)"
    elif isinstance(value, SymForm) and value.arity == 2:
        K = value
        what = f"(x, y) -> {value}(x, y)"
    else:
        raise ValueError("rank needs an additive map or a form of arity 2")
    r = kernel_rank(K, samples, samples)
    bundle = {"command": "rank", "kernel": what, "rank": r, "grid": len(samples),
              "seed": config.seed}
    return 0, bundle, [f"rank {r} on a {len(samples)}x{len(samples)} grid for {what}"]


def _run_hod(config, samples):
    D = parse_expression(config.input, "map")
    rep = hod_degree(D, config.max_degree, samples, seed=config.seed)
    bundle = {"command": "hod", "degree": rep.degree, "D(1)": str(rep.d_at_one),
              "precondition": rep.precondition_ok, "seed": rep.seed,
              "increments": [str(y) for y in rep.increments]}
    if not rep.precondition_ok:
        text = f"not a higher-order derivation: D(1) = {rep.d_at_one} != 0"
    elif rep.degree is None:
        text = f"no order <= {config.max_degree} detected"
    else:
        text = f"degree {rep.degree}"
    return (0 if rep.degree is not None else 1), bundle, [text]


def run(config: RunConfig) -> tuple[int, str]:
    """Execute one command; returns (exit status, rendered report)."""
    samples = default_samples(config.seed, config.samples)
    if config.command == "suite":
        result = feq.builtin_suite(config.seed, config.samples)
        status, bundle, lines = _scenario_output(config, result.reports)
    elif config.command == "verify":
        scenarios = load_scenarios(config.input, config.seed, config.samples)
        status, bundle, lines = _scenario_output(config, feq.run_scenarios(scenarios, config.seed))
    else:
        handler = {"polarize": _run_polarize, "degree": _run_degree,
                   "rank": _run_rank, "hod": _run_hod}[config.command]
        status, bundle, lines = handler(config, samples)
    if config.report_format == "json":
        return status, json.dumps(bundle, indent=2, sort_keys=True) + "\n"
    return status, "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fecheck", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("input", nargs="?", help="scenario file (verify) or expression")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--samples", type=int, default=10,
                   help="pseudo-random samples added to the structured ones")
    p.add_argument("--report", choices=("text", "json"), default="text")
    p.add_argument("--max-degree", type=int, default=4)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = RunConfig(args.command, args.input, args.seed, args.samples,
                           args.report, args.max_degree)
        status, out = run(config)
    except (ParseError, ScenarioFileError, ValueError, OSError) as exc:
        print(f"fecheck: error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(out)
    return status


if __name__ == "__main__":
    sys.exit(main())
