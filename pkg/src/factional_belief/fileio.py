"""Interchange formats: rationals as "num/den" strings, the prior and
epistemic-model JSON documents, degree-sequence and edge-list text files,
and deterministic CSV/JSON report writing.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Sequence, Union

from .errors import ParseError
from .epistemic import EpistemicModel
from .model import (
    AgentType,
    ConcreteGraph,
    Prior,
    StatePrior,
    TypeDistribution,
)

PathLike = Union[str, Path]


def parse_rational(text) -> Fraction:
    """Parse "num/den", an integer string, or a decimal string, exactly."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        raise ParseError(
            f"refusing float {text!r}; pass a rational string like '2/5'"
        )
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {text!r}: {exc}") from None


def format_rational(x: Fraction) -> str:
    return str(Fraction(x))


def format_decimal(x) -> str:
    return repr(float(x))


# ---------------------------------------------------------------------------
# Prior JSON
# ---------------------------------------------------------------------------


def prior_from_dict(doc: Mapping) -> Prior:
    try:
        states = []
        for label, body in doc["states"].items():
            types = body["types"]
            states.append(
                StatePrior(
                    label=str(label),
                    prob=parse_rational(body["prob"]),
                    types=TypeDistribution(
                        alpha=parse_rational(types.get("alpha", 0)),
                        chi=parse_rational(types.get("chi", 0)),
                        nu=parse_rational(types.get("nu", 0)),
                    ),
                )
            )
        return Prior(
            p=parse_rational(doc["p"]),
            mu=parse_rational(doc["mu"]),
            states=tuple(states),
        )
    except KeyError as exc:
        raise ParseError(f"prior document missing field {exc}") from None


def prior_to_dict(prior: Prior) -> dict:
    return {
        "p": format_rational(prior.p),
        "mu": format_rational(prior.mu),
        "states": {
            s.label: {
                "prob": format_rational(s.prob),
                "types": {
                    t.value: format_rational(s.types.prob(t)) for t in AgentType
                },
            }
            for s in prior.states
        },
    }


def load_prior(path: PathLike) -> Prior:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read prior file {path}: {exc}") from None
    return prior_from_dict(doc)


def dump_prior(prior: Prior, path: PathLike) -> None:
    Path(path).write_text(json.dumps(prior_to_dict(prior), indent=2) + "\n")


# ---------------------------------------------------------------------------
# Epistemic model JSON
# ---------------------------------------------------------------------------


def epistemic_model_from_dict(doc: Mapping) -> EpistemicModel:
    try:
        outcomes = list(doc["outcomes"])
        prob = {o: parse_rational(doc["prob"][o]) for o in outcomes}
        partitions = {
            agent: [list(cell) for cell in cells]
            for agent, cells in doc["partitions"].items()
        }
    except KeyError as exc:
        raise ParseError(f"model document missing field {exc}") from None
    return EpistemicModel.make(prob, partitions)


def epistemic_model_to_dict(model: EpistemicModel) -> dict:
    return {
        "outcomes": list(model.space.outcomes),
        "prob": {
            o: format_rational(p)
            for o, p in zip(model.space.outcomes, model.space.probs)
        },
        "partitions": {
            agent: [sorted(cell) for cell in part.cells]
            for agent, part in zip(model.agents, model.partitions)
        },
    }


def load_epistemic_model(path: PathLike) -> EpistemicModel:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read model file {path}: {exc}") from None
    return epistemic_model_from_dict(doc)


# ---------------------------------------------------------------------------
# Degree sequences and edge lists
# ---------------------------------------------------------------------------


def parse_degree_sequence(text: str, source: str = "<degrees>") -> list[int]:
    """One integer per line, or run-length lines "count x degree"."""
    out: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            if "x" in line:
                count_s, degree_s = line.split("x")
                count, degree = int(count_s), int(degree_s)
                if count < 0:
                    raise ValueError("negative count")
                out.extend([degree] * count)
            else:
                out.append(int(line))
        except ValueError as exc:
            raise ParseError(f"{source}:{lineno}: bad degree line {line!r} ({exc})")
    if not out:
        raise ParseError(f"{source}: no degrees found")
    return out


def load_degree_sequence(path: PathLike) -> list[int]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read degree file {path}: {exc}") from None
    return parse_degree_sequence(text, source=str(path))


def dump_degree_sequence(seq: Sequence[int], path: PathLike) -> None:
    Path(path).write_text("".join(f"{d}\n" for d in seq))


def parse_edge_list(text: str, source: str = "<edges>") -> ConcreteGraph:
    """Whitespace-separated "u v" per line, vertices 0-indexed. The vertex
    count is one past the largest endpoint unless a "# n <count>" header is
    present."""
    edges = []
    n = 0
    declared = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].split()
            if len(body) == 2 and body[0] == "n":
                declared = int(body[1])
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"{source}:{lineno}: expected 'u v', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"{source}:{lineno}: non-integer endpoint in {line!r}")
        edges.append((u, v))
        n = max(n, u + 1, v + 1)
    if declared is not None:
        n = max(n, declared)
    return ConcreteGraph(n, edges)


def load_edge_list(path: PathLike) -> ConcreteGraph:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read edge list {path}: {exc}") from None
    return parse_edge_list(text, source=str(path))


def dump_edge_list(graph: ConcreteGraph, path: PathLike) -> None:
    lines = [f"# n {graph.n}"]
    lines.extend(f"{u} {v}" for u, v in sorted(graph.edges))
    Path(path).write_text("".join(line + "\n" for line in lines))


# ---------------------------------------------------------------------------
# Report writing
# ---------------------------------------------------------------------------


def rows_to_csv(rows: Iterable[Mapping], columns: Sequence[str]) -> str:
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(str(row.get(c, "")) for c in columns))
    return "\n".join(lines) + "\n"


def write_report(payload, path=None, fmt: str = "csv", columns=None) -> str:
    """Serialize a report deterministically and optionally write it. CSV
    expects `payload` to be an iterable of row mappings with a column list;
    JSON takes anything JSON-serializable."""
    if fmt == "csv":
        if columns is None:
            raise ParseError("csv output needs a column list")
        text = rows_to_csv(payload, columns)
    elif fmt == "json":
        text = json.dumps(payload, indent=2, default=str) + "\n"
    else:
        raise ParseError(f"unknown format {fmt!r}; expected csv or json")
    if path is not None:
        Path(path).write_text(text)
    return text


PLOT_STUB = """\
#!/usr/bin/env python3
# Generic plotting stub: reads a CSV produced by the revolt CLI and plots
# the first column against the remaining numeric columns, if matplotlib is
# installed. The analysis pipeline itself never needs this.
import csv
import sys

path = sys.argv[1] if len(sys.argv) > 1 else "out.csv"
with open(path) as f:
    rows = list(csv.DictReader(f))
if not rows:
    sys.exit("no rows in " + path)
cols = list(rows[0])
x = [float(r[cols[0]]) for r in rows]
try:
    import matplotlib.pyplot as plt
except ImportError:
    sys.exit("matplotlib not installed; nothing to do")
for col in cols[1:]:
    try:
        ys = [float(r[col]) for r in rows]
    except ValueError:
        continue
    plt.plot(x, ys, marker="o", label=col)
plt.xlabel(cols[0])
plt.legend()
plt.savefig(path.rsplit(".", 1)[0] + ".png", dpi=150)
"""


def write_plot_stub(path: PathLike) -> None:
    Path(path).write_text(PLOT_STUB)
