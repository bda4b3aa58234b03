"""Command-line interface.

Subcommands: analyze, promise, sweep, validate, oracle, epistemic, gen,
bounds. Global flags (--seed, --format, --out, --jobs, --config) are
accepted by every subcommand; --config points at a JSON file whose keys
pre-fill that subcommand's options (explicit flags win).

Exit codes: 0 success, 2 validation/parse error, 3 enumeration budget
exceeded, 4 promise answered Null under --strict.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import bounds as bounds_mod
from . import fileio
from .algorithms import (
    PromiseInstance,
    PromiseOutcome,
    algorithm1,
    algorithm1_auto,
    algorithm1_general,
    algorithm1_multistate,
    algorithm3,
    crucial_thresholds,
    smallest_revolt,
)
from .epistemic import (
    belief_operator,
    common_belief_by_search,
    common_belief_fixpoint,
    is_evident_belief,
)
from .errors import (
    BudgetExceededError,
    Error,
    MislabeledStatesError,
    ValidationError,
)
from .experiments import (
    ANALYZE_COLUMNS,
    MAP_COLUMNS,
    SWEEP_COLUMNS,
    VALIDATE_COLUMNS,
    SweepConfig,
    grid,
    prop1_battery,
    run_promise_map,
    run_sweep,
    run_validate,
)
from .model import Prior
from .netgen import GenSpec, generate_graph, generate_sequence, torus_grid
from .oracle import (
    OracleBudget,
    clique_exists,
    clique_reduction,
    revolt_decision,
    RevoltInstance,
)

RAT = fileio.parse_rational


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="JSON file with option defaults")
    sub.add_argument("--seed", type=int, default=0, help="master 64-bit seed")
    sub.add_argument("--format", choices=("csv", "json"), default="csv")
    sub.add_argument("--out", help="output path (stdout when omitted)")
    sub.add_argument("--jobs", type=int, default=1, help="parallel workers")
    sub.add_argument(
        "--emit-plot-stub",
        metavar="PATH",
        help="also write a generic CSV-plotting script (needs no extra deps here)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="revolt",
        description="Belief-threshold revolt games on networks: exact "
        "equilibrium-size algorithms, oracle checks, and experiments.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("analyze", help="largest/smallest supported revolt sizes")
    p.add_argument("--prior", required=True)
    p.add_argument("--degrees", required=True)
    p.add_argument("--smallest", action="store_true")
    p.add_argument("--general", action="store_true")
    p.add_argument("--multistate", action="store_true")
    p.add_argument("--auto-relabel", action="store_true")
    p.add_argument("--cutoff-c", default="1")
    p.add_argument("--epsilon", default="1/100")
    _add_common(p)

    p = subs.add_parser("promise", help="promise decision / region map")
    p.add_argument("--prior", required=True)
    p.add_argument("--degrees", required=True)
    p.add_argument("--mu-star")
    p.add_argument("--grid-step")
    p.add_argument("--epsilon", required=True)
    p.add_argument("--delta", required=True)
    p.add_argument("--strict", action="store_true")
    p.add_argument("--show-thresholds", action="store_true")
    _add_common(p)

    p = subs.add_parser("sweep", help="parameter sweeps with seeded trials")
    p.add_argument("--prior", required=True)
    p.add_argument("--family", required=True, choices=("constant", "powerlaw", "ba", "er"))
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--axis", choices=("param", "p"), default="param")
    p.add_argument("--start", required=True)
    p.add_argument("--stop", required=True)
    p.add_argument("--step", required=True)
    p.add_argument("--param", help="fixed family parameter (p-axis sweeps)")
    p.add_argument("--trials", type=int, default=100)
    _add_common(p)

    p = subs.add_parser("validate", help="Monte-Carlo concentration check")
    p.add_argument("--prior", required=True)
    p.add_argument("--state", default="A")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--level", default="1/100")
    p.add_argument("--graph", help="edge-list file")
    p.add_argument("--torus", nargs=2, type=int, metavar=("ROWS", "COLS"))
    p.add_argument("--family")
    p.add_argument("--n", type=int)
    p.add_argument("--param")
    _add_common(p)

    p = subs.add_parser("oracle", help="exact small-instance revolt decision")
    p.add_argument("--graph", help="edge-list file")
    p.add_argument(
        "--edges", help="inline adjacency, e.g. '0-1,1-2,0-2' (config-friendly)"
    )
    p.add_argument("--n", type=int, help="vertex count for --edges (optional)")
    p.add_argument("--prior")
    p.add_argument("--mu-star")
    p.add_argument("--q-star")
    p.add_argument("--clique-reduce", type=int, metavar="K")
    p.add_argument("--budget-pairs", type=int, default=10_000)
    p.add_argument("--budget-assignments", type=int, default=200_000)
    _add_common(p)

    p = subs.add_parser("epistemic", help="belief operators and common belief")
    p.add_argument("--model")
    p.add_argument("--p", default="1/2")
    p.add_argument("--mu", default="1/2")
    p.add_argument("--event", help="comma-separated outcome labels")
    p.add_argument("--omega")
    p.add_argument("--verify-prop1", type=int, metavar="COUNT")
    _add_common(p)

    p = subs.add_parser("gen", help="degree-sequence / graph generators")
    p.add_argument("--family", required=True, choices=("constant", "powerlaw", "ba", "er"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--param", required=True)
    p.add_argument("--kind", choices=("sequence", "graph"), default="sequence")
    _add_common(p)

    p = subs.add_parser("bounds", help="closed-form probability bounds")
    p.add_argument("--prior", required=True)
    p.add_argument("--degrees")
    p.add_argument("--n", type=int)
    p.add_argument("--epsilon", default="1/50")
    p.add_argument("--epsilon0", default="1/10")
    p.add_argument("--c", default="1")
    _add_common(p)

    return parser


def _apply_config(parser, argv):
    """Pre-scan for --config and install its values as defaults."""
    if "--config" not in argv:
        return argv
    idx = argv.index("--config")
    if idx + 1 >= len(argv):
        raise ValidationError("--config needs a path")
    path = argv[idx + 1]
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise fileio.ParseError(f"cannot read config {path}: {exc}") from None
    if not isinstance(doc, dict):
        raise fileio.ParseError(f"config {path}: expected a JSON object")
    extra = []
    for key, value in doc.items():
        flag = "--" + str(key).replace("_", "-")
        if flag in argv:
            continue  # explicit flag wins
        if isinstance(value, bool):
            if value:
                extra.append(flag)
        elif isinstance(value, (list, tuple)):
            extra.append(flag)
            extra.extend(str(v) for v in value)
        else:
            extra.extend([flag, str(value)])
    return argv + extra


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_prior(path: str) -> Prior:
    return fileio.load_prior(path)


def _sizes_rows(sizes) -> list[dict]:
    return [
        {
            "state": s,
            "X_exact": fileio.format_rational(x),
            "X_decimal": fileio.format_decimal(x),
        }
        for s, x in sizes.items()
    ]


def cmd_analyze(args) -> int:
    prior = _load_prior(args.prior)
    degseq = fileio.load_degree_sequence(args.degrees)
    relabeled = False
    if args.multistate:
        sizes = algorithm1_multistate(degseq, prior)
    elif args.smallest:
        sizes = smallest_revolt(degseq, prior)
    elif args.general:
        sizes = algorithm1_general(
            degseq, prior, cutoff_c=RAT(args.cutoff_c), epsilon=RAT(args.epsilon)
        )
    elif args.auto_relabel:
        sizes, relabeled = algorithm1_auto(degseq, prior)
        if relabeled:
            print("note: state labels were swapped to restore X_A >= X_B", file=sys.stderr)
    else:
        try:
            sizes = algorithm1(degseq, prior)
        except MislabeledStatesError as exc:
            raise MislabeledStatesError(f"{exc} (rerun with --auto-relabel)") from None
    rows = _sizes_rows(sizes)
    if args.format == "json":
        payload = {"sizes": {r["state"]: r["X_exact"] for r in rows}, "relabeled": relabeled}
        _emit(fileio.write_report(payload, None, "json"), args.out)
    else:
        _emit(fileio.write_report(rows, None, "csv", ANALYZE_COLUMNS), args.out)
    return 0


def cmd_promise(args) -> int:
    prior = _load_prior(args.prior)
    degseq = fileio.load_degree_sequence(args.degrees)
    epsilon, delta = RAT(args.epsilon), RAT(args.delta)
    if args.show_thresholds:
        thresholds = {
            k: fileio.format_rational(v)
            for k, v in crucial_thresholds(degseq, prior).items()
        }
        print(json.dumps(thresholds, indent=2), file=sys.stderr)
    if args.grid_step:
        rows = run_promise_map(
            degseq, prior, grid(0, 1, RAT(args.grid_step)), epsilon, delta
        )
        if args.format == "json":
            text = fileio.write_report(rows, None, "json")
        else:
            text = fileio.write_report(rows, None, "csv", MAP_COLUMNS)
        _emit(text, args.out)
        if args.strict and any(r["outcome"] == PromiseOutcome.NULL.value for r in rows):
            return 4
        return 0
    if args.mu_star is None:
        raise ValidationError("promise needs --mu-star or --grid-step")
    inst = PromiseInstance(tuple(degseq), prior, RAT(args.mu_star), epsilon, delta)
    outcome = algorithm3(inst)
    payload = {"mu_star": fileio.format_rational(inst.mu_star), "outcome": outcome.value}
    if args.format == "json":
        _emit(fileio.write_report(payload, None, "json"), args.out)
    else:
        _emit(
            fileio.write_report(
                [dict(payload, mu_star_decimal=fileio.format_decimal(inst.mu_star))],
                None,
                "csv",
                MAP_COLUMNS,
            ),
            args.out,
        )
    if args.strict and outcome is PromiseOutcome.NULL:
        return 4
    return 0


def cmd_sweep(args) -> int:
    prior = _load_prior(args.prior)
    cfg = SweepConfig(
        family=args.family,
        n=args.n,
        axis=args.axis,
        values=grid(RAT(args.start), RAT(args.stop), RAT(args.step)),
        prior=prior,
        fixed_param=RAT(args.param) if args.param is not None else None,
        trials=args.trials,
        seed=args.seed,
        jobs=args.jobs,
    )
    rows = run_sweep(cfg)
    if args.format == "json":
        _emit(fileio.write_report(rows, None, "json"), args.out)
    else:
        _emit(fileio.write_report(rows, None, "csv", SWEEP_COLUMNS), args.out)
    return 0


def _validate_graph(args):
    if args.graph:
        return fileio.load_edge_list(args.graph)
    if args.torus:
        return torus_grid(args.torus[0], args.torus[1])
    if args.family:
        if args.n is None or args.param is None:
            raise ValidationError("generated validate graphs need --n and --param")
        return generate_graph(GenSpec(args.family, args.n, RAT(args.param), args.seed))
    raise ValidationError("validate needs --graph, --torus, or --family")


def cmd_validate(args) -> int:
    prior = _load_prior(args.prior)
    graph = _validate_graph(args)
    report = run_validate(
        graph, prior, args.state, args.trials, args.seed, RAT(args.level)
    )
    if args.format == "csv":
        _emit(
            fileio.write_report(report["trial_rows"], None, "csv", VALIDATE_COLUMNS),
            args.out,
        )
        summary = {k: v for k, v in report.items() if k != "trial_rows"}
        print(json.dumps(summary, indent=2, default=str), file=sys.stderr)
    else:
        _emit(fileio.write_report(report, None, "json"), args.out)
    return 0


def _inline_graph(text: str, n):
    try:
        pairs = [
            tuple(int(x) for x in chunk.split("-"))
            for chunk in text.split(",")
            if chunk.strip()
        ]
    except ValueError:
        raise ValidationError(f"bad inline edge list {text!r}; want 'u-v,u-v'")
    if any(len(p) != 2 for p in pairs):
        raise ValidationError(f"bad inline edge list {text!r}; want 'u-v,u-v'")
    size = n if n is not None else (max((max(p) for p in pairs), default=-1) + 1)
    from .model import ConcreteGraph

    return ConcreteGraph(size, pairs)


def cmd_oracle(args) -> int:
    if args.graph:
        graph = fileio.load_edge_list(args.graph)
    elif args.edges is not None:
        graph = _inline_graph(args.edges, args.n)
    else:
        raise ValidationError("oracle needs --graph or --edges")
    budget = OracleBudget(args.budget_pairs, args.budget_assignments)
    if args.clique_reduce is not None:
        inst = clique_reduction(graph, args.clique_reduce)
        has_clique = (
            clique_exists(graph, args.clique_reduce) if graph.n <= 20 else None
        )
    else:
        if not (args.prior and args.mu_star and args.q_star):
            raise ValidationError(
                "oracle needs --clique-reduce or --prior/--mu-star/--q-star"
            )
        inst = RevoltInstance(graph, _load_prior(args.prior), RAT(args.mu_star), RAT(args.q_star))
        has_clique = None
    supported, prob = revolt_decision(inst, budget)
    payload = {
        "n": graph.n,
        "mu_star": fileio.format_rational(inst.mu_star),
        "q_star": fileio.format_rational(inst.q_star),
        "revolt_supported": supported,
        "probability_exact": fileio.format_rational(prob),
        "probability_decimal": fileio.format_decimal(prob),
    }
    if has_clique is not None:
        payload["k"] = args.clique_reduce
        payload["clique_exists"] = has_clique
    _emit(fileio.write_report(payload, None, "json"), args.out)
    return 0


def cmd_epistemic(args) -> int:
    if args.verify_prop1:
        agree, total = prop1_battery(args.verify_prop1, args.seed)
        payload = {"models": total, "agreeing": agree, "all_agree": agree == total}
        _emit(fileio.write_report(payload, None, "json"), args.out)
        return 0 if agree == total else 2
    if not args.model or args.event is None:
        raise ValidationError("epistemic needs --model and --event (or --verify-prop1)")
    model = fileio.load_epistemic_model(args.model)
    event = frozenset(s.strip() for s in args.event.split(",") if s.strip())
    p, mu = RAT(args.p), RAT(args.mu)
    evident, witnesses = is_evident_belief(model, p, mu, event)
    fix = common_belief_fixpoint(model, p, mu, event)
    payload = {
        "event": sorted(event),
        "p": str(p),
        "mu": str(mu),
        "beliefs": {
            a: sorted(belief_operator(model, a, p, event)) for a in model.agents
        },
        "evident": evident,
        "witnesses": sorted(witnesses),
        "common_belief_event": sorted(fix),
    }
    if args.omega is not None:
        payload["omega"] = args.omega
        payload["common_at_omega_fixpoint"] = args.omega in fix
        payload["common_at_omega_search"] = common_belief_by_search(
            model, p, mu, event, args.omega
        )
    _emit(fileio.write_report(payload, None, "json"), args.out)
    return 0


def cmd_gen(args) -> int:
    spec = GenSpec(args.family, args.n, RAT(args.param), args.seed)
    meta = {
        "family": spec.family,
        "n": spec.n,
        "param": str(spec.param),
        "seed": spec.seed,
    }
    if spec.family == "powerlaw":
        meta["support"] = [1, spec.n - 1]  # truncation window of the pmf
    if args.kind == "graph":
        graph = generate_graph(spec)
        if args.out:
            fileio.dump_edge_list(graph, args.out)
        else:
            sys.stdout.write(
                "".join(f"{u} {v}\n" for u, v in sorted(graph.edges))
            )
        meta["edges"] = len(graph.edges)
    else:
        seq = generate_sequence(spec)
        if args.out:
            fileio.dump_degree_sequence(seq, args.out)
        else:
            sys.stdout.write("".join(f"{d}\n" for d in seq))
        meta["sum"] = sum(seq)
    print(json.dumps(meta), file=sys.stderr)
    return 0


def cmd_bounds(args) -> int:
    prior = _load_prior(args.prior)
    degseq = fileio.load_degree_sequence(args.degrees) if args.degrees else None
    n = args.n or (len(degseq) if degseq else None)
    if n is None:
        raise ValidationError("bounds needs --degrees or --n")
    epsilon, epsilon0, c = RAT(args.epsilon), RAT(args.epsilon0), RAT(args.c)
    reports = []
    if degseq:
        chi_star = bounds_mod.dependency_chi_star_bound(degseq)
        reports.append(
            bounds_mod.BoundReport.build(
                "dependency_chi_star_bound",
                {"d_max": max(degseq)},
                Fraction(chi_star),
                probability=False,
            )
        )
        reports.append(
            bounds_mod.BoundReport.build(
                "dependent_chernoff_tail",
                {"n": n, "t": epsilon * n, "chi_star": chi_star},
                bounds_mod.dependent_chernoff(n, epsilon * n, chi_star),
            )
        )
        if set(degseq) == {4} and set(prior.labels) == {"A", "B"}:
            for state in ("A", "B"):
                expect = bounds_mod.noncandidate_expectation_torus(prior, state)
                reports.append(
                    bounds_mod.BoundReport.build(
                        f"noncandidate_expectation_{state}", {"state": state}, expect
                    )
                )
            expect_a = bounds_mod.noncandidate_expectation_torus(prior, "A")
            markov = bounds_mod.markov_noncandidate_bound(expect_a, prior.mu, n)
            reports.append(
                bounds_mod.BoundReport.build(
                    "markov_noncandidate_bound",
                    {"expect": expect_a, "threshold": prior.mu},
                    markov,
                )
            )
    reports.append(
        bounds_mod.BoundReport.build(
            "high_degree_state_bound",
            {"epsilon0": epsilon0, "c": c, "n": n},
            bounds_mod.high_degree_state_bound(epsilon0, c, n),
        )
    )
    if set(prior.labels) == {"A", "B"}:
        ok = bounds_mod.high_degree_separation(prior, epsilon0)
        reports.append(
            bounds_mod.BoundReport.build(
                "high_degree_separation_ok",
                {"epsilon0": epsilon0},
                Fraction(int(ok)),
                probability=False,
            )
        )
    rows = [
        {
            "name": r.name,
            "value": r.value_str(),
            "clamped": r.clamped,
            "inputs": json.dumps({k: str(v) for k, v in r.inputs.items()}, sort_keys=True).replace(",", ";"),
        }
        for r in reports
    ]
    if args.format == "json":
        _emit(fileio.write_report(rows, None, "json"), args.out)
    else:
        _emit(
            fileio.write_report(rows, None, "csv", ("name", "value", "clamped", "inputs")),
            args.out,
        )
    return 0


HANDLERS = {
    "analyze": cmd_analyze,
    "promise": cmd_promise,
    "sweep": cmd_sweep,
    "validate": cmd_validate,
    "oracle": cmd_oracle,
    "epistemic": cmd_epistemic,
    "gen": cmd_gen,
    "bounds": cmd_bounds,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _apply_config(parser, argv)
        args = parser.parse_args(argv)
        code = HANDLERS[args.command](args)
        if getattr(args, "emit_plot_stub", None):
            fileio.write_plot_stub(args.emit_plot_stub)
        return code
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (Error, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
