"""Reader for ``.feq`` scenario files.

A file holds one or more documents separated by a line of ``---``.  Each
document is a set of ``key: value`` lines; indented lines continue the
previous value and ``#`` starts a comment::

    name: thm7_converse
    lhs: at(trace(81/16*prod(sub(t^2), sub(t^2))), x^2)
    rhs: apply(3/2*sub(t^2))^4
    samples: t, t+1, 1/t, (t^2+1)/(t-3)
    expect: pass

``samples: default`` uses the structured samples plus seeded random ones.
"""

from __future__ import annotations

from pathlib import Path

from fecheck.exactfield import default_samples
from fecheck.feq import Scenario
from fecheck.parser import ParseError, parse_elem, parse_fn

REQUIRED = ("name", "lhs", "rhs", "samples", "expect")


class ScenarioFileError(ValueError):
    pass


def _documents(text: str):
    doc: dict[str, tuple[str, int]] = {}
    key = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if line.strip() == "---":
            if doc:
                yield doc
            doc, key = {}, None
            continue
        if not line.strip():
            continue
        if line[0].isspace():
            if key is None:
                raise ScenarioFileError(f"line {lineno}: continuation without a key")
            value, start = doc[key]
            doc[key] = (value + " " + line.strip(), start)
            continue
        if ":" not in line:
            raise ScenarioFileError(f"line {lineno}: expected 'key: value'")
        key, value = (s.strip() for s in line.split(":", 1))
        if key not in REQUIRED:
            raise ScenarioFileError(f"line {lineno}: unknown key {key!r}")
        if key in doc:
            raise ScenarioFileError(f"line {lineno}: duplicate key {key!r}")
        doc[key] = (value, lineno)
    if doc:
        yield doc


def _field(doc, key, parse):
    value, lineno = doc[key]
    try:
        return parse(value)
    except ParseError as exc:
        raise ScenarioFileError(f"line {lineno + exc.line - 1}: {key}: {exc}") from exc


def parse_scenarios(text: str, seed: int = 0, n_random: int = 10) -> list[Scenario]:
    scenarios = []
    for doc in _documents(text):
        missing = [k for k in REQUIRED if k not in doc]
        if missing:
            raise ScenarioFileError(f"scenario is missing {', '.join(missing)}")
        expect = doc["expect"][0].lower()
        if expect not in ("pass", "fail"):
            raise ScenarioFileError(f"line {doc['expect'][1]}: expect must be pass or fail")
        raw_samples = doc["samples"][0]
        if raw_samples.strip() == "default":
            samples = default_samples(seed, n_random)
        else:
            samples = _field(doc, "samples",
                             lambda v: [parse_elem(s) for s in v.split(",") if s.strip()])
        scenarios.append(Scenario(
            doc["name"][0],
            _field(doc, "lhs", parse_fn),
            _field(doc, "rhs", parse_fn),
            tuple(samples),
            expect == "pass",
        ))
    if not scenarios:
        raise ScenarioFileError("no scenarios found")
    return scenarios


def load_scenarios(path: str | Path, seed: int = 0, n_random: int = 10) -> list[Scenario]:
    return parse_scenarios(Path(path).read_text(encoding="utf-8"), seed, n_random)
