"""Experiment protocols behind the CLI: parameter sweeps over degree-sequence
families, threshold sweeps over the prior, Monte-Carlo concentration
validation on concrete graphs, and the promise-region map.

Reproducibility: every stochastic step seeds its own PCG64 generator with a
seed derived from the master seed and the relevant counters via
``netgen.derive_seed``; rerunning a config byte-reproduces its output.
Threshold (p) sweeps derive per-trial seeds from the trial counter alone, so
all grid points see the same sampled graphs and per-graph monotonicity in p
survives averaging. Family-parameter sweeps derive from (value, trial).
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from statistics import stdev
from typing import Iterable, Optional, Sequence

import numpy as np

from . import bounds as bounds_mod
from .algorithms import algorithm1_auto, equilibria_map, revolting_contexts
from .errors import ValidationError
from .fileio import format_decimal, format_rational
from .model import AgentType, ConcreteGraph, Prior
from .netgen import FAMILIES, GenSpec, derive_seed, generate_sequence

SWEEP_COLUMNS = (
    "param",
    "param_decimal",
    "mean_eA_exact",
    "mean_eA",
    "mean_eB_exact",
    "mean_eB",
    "std_eA",
    "std_eB",
    "trials",
    "relabeled",
)

MAP_COLUMNS = ("mu_star", "mu_star_decimal", "outcome")

ANALYZE_COLUMNS = ("state", "X_exact", "X_decimal")


@dataclass(frozen=True)
class SweepConfig:
    """One sweep request: a degree-sequence family at size n, an axis (the
    family's own parameter or the prior threshold p), the grid of axis
    values, and the trial/seed protocol."""

    family: str
    n: int
    axis: str  # "param" or "p"
    values: tuple[Fraction, ...]
    prior: Prior
    fixed_param: Optional[Fraction] = None
    trials: int = 100
    seed: int = 0
    jobs: int = 1

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValidationError(f"unknown family {self.family!r}")
        if self.axis not in ("param", "p"):
            raise ValidationError("axis must be 'param' or 'p'")
        if not self.values:
            raise ValidationError("sweep range is empty")
        if self.trials < 1:
            raise ValidationError("trials must be at least 1")
        if self.axis == "p" and self.fixed_param is None:
            raise ValidationError("a p sweep needs the family parameter fixed")


def grid(start, stop, step) -> tuple[Fraction, ...]:
    """Inclusive arithmetic grid with exact endpoints."""
    start, stop, step = Fraction(start), Fraction(stop), Fraction(step)
    if step <= 0:
        raise ValidationError("step must be positive")
    out = []
    v = start
    while v <= stop:
        out.append(v)
        v += step
    if not out:
        raise ValidationError("empty grid")
    return tuple(out)


def _run_pair(args) -> tuple[Fraction, Fraction, bool]:
    seq, prior = args
    sizes, relabeled = algorithm1_auto(seq, prior)
    return sizes["A"], sizes["B"], relabeled


def _map_jobs(fn, items: Sequence, jobs: int) -> list:
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


def _sequences_for_value(cfg: SweepConfig, value_index: int, param) -> list[list[int]]:
    if cfg.family == "constant":
        return [generate_sequence(GenSpec("constant", cfg.n, param))]
    return [
        generate_sequence(
            GenSpec(cfg.family, cfg.n, param, derive_seed(cfg.seed, value_index, t))
        )
        for t in range(cfg.trials)
    ]


def _sequences_shared(cfg: SweepConfig) -> list[list[int]]:
    if cfg.family == "constant":
        return [generate_sequence(GenSpec("constant", cfg.n, cfg.fixed_param))]
    return [
        generate_sequence(
            GenSpec(cfg.family, cfg.n, cfg.fixed_param, derive_seed(cfg.seed, t))
        )
        for t in range(cfg.trials)
    ]


def _aggregate(value: Fraction, results) -> dict:
    xa = [r[0] for r in results]
    xb = [r[1] for r in results]
    relabeled = sum(1 for r in results if r[2])
    mean_a = sum(xa, Fraction(0)) / len(xa)
    mean_b = sum(xb, Fraction(0)) / len(xb)
    std_a = stdev(float(x) for x in xa) if len(xa) > 1 else 0.0
    std_b = stdev(float(x) for x in xb) if len(xb) > 1 else 0.0
    return {
        "param": format_rational(value),
        "param_decimal": format_decimal(value),
        "mean_eA_exact": format_rational(mean_a),
        "mean_eA": format_decimal(mean_a),
        "mean_eB_exact": format_rational(mean_b),
        "mean_eB": format_decimal(mean_b),
        "std_eA": format_decimal(std_a),
        "std_eB": format_decimal(std_b),
        "trials": len(results),
        "relabeled": relabeled,
    }


def run_sweep(cfg: SweepConfig) -> list[dict]:
    """Rows of mean largest-revolt sizes along the sweep axis."""
    rows = []
    if cfg.axis == "param":
        for vi, value in enumerate(cfg.values):
            seqs = _sequences_for_value(cfg, vi, value)
            results = _map_jobs(_run_pair, [(seq, cfg.prior) for seq in seqs], cfg.jobs)
            rows.append(_aggregate(value, results))
    else:
        seqs = _sequences_shared(cfg)
        for value in cfg.values:
            prior = replace(cfg.prior, p=Fraction(value))
            results = _map_jobs(_run_pair, [(seq, prior) for seq in seqs], cfg.jobs)
            rows.append(_aggregate(value, results))
    return rows


def run_promise_map(
    degseq: Sequence[int],
    prior: Prior,
    mu_grid: Iterable[Fraction],
    epsilon,
    delta,
) -> list[dict]:
    rows = []
    for mu_star, outcome in equilibria_map(degseq, prior, mu_grid, epsilon, delta):
        rows.append(
            {
                "mu_star": format_rational(mu_star),
                "mu_star_decimal": format_decimal(mu_star),
                "outcome": outcome.value,
            }
        )
    return rows


# ---------------------------------------------------------------------------
# Monte-Carlo concentration validation
# ---------------------------------------------------------------------------

_TYPE_ORDER = (AgentType.ALPHA, AgentType.CHI, AgentType.NU)


def sample_type_assignment(prior: Prior, state: str, n: int, seed: int) -> list[AgentType]:
    """Draw n i.i.d. types from the state's distribution (PCG64-seeded)."""
    dist = prior.state(state).types
    cut1 = float(dist.alpha)
    cut2 = float(dist.alpha + dist.chi)
    rng = np.random.Generator(np.random.PCG64(seed))
    u = rng.random(n)
    return [
        _TYPE_ORDER[0] if x < cut1 else (_TYPE_ORDER[1] if x < cut2 else _TYPE_ORDER[2])
        for x in u
    ]


def run_validate(
    graph: ConcreteGraph,
    prior: Prior,
    state: str,
    trials: int,
    seed: int,
    level=Fraction(1, 100),
) -> dict:
    """Sample state-conditioned type assignments on the concrete graph and
    compare per-trial alpha/chi/candidate counts against the degree-sequence
    expectations and the dependent-Chernoff envelope.

    The envelope is the deviation at which the union bound over all trials
    of the two-sided tail reaches `level`: sqrt(chi* n ln(2 trials / level) / 2).
    """
    from .algorithms import expected_context_fraction, expected_type_fraction

    if trials < 1:
        raise ValidationError("trials must be at least 1")
    degseq = graph.degree_sequence()
    n = graph.n
    contexts = revolting_contexts(degseq, prior)
    member = {}
    for c in contexts:
        member.setdefault(c.degree, set()).add(
            (c.alpha_neighbors, c.chi_neighbors, c.nu_neighbors)
        )

    exp_alpha = expected_type_fraction(state, (AgentType.ALPHA,), prior)
    exp_chi = expected_type_fraction(state, (AgentType.CHI,), prior)
    exp_candidate = expected_context_fraction(state, contexts, prior, degseq)

    chi_star = bounds_mod.dependency_chi_star_bound(degseq) if max(degseq) > 0 else 1
    envelope = float(bounds_mod.chernoff_envelope(n, chi_star, trials, level))

    trial_rows = []
    max_dev = 0.0
    cand_sum = 0
    for t in range(trials):
        types = sample_type_assignment(prior, state, n, derive_seed(seed, t))
        n_alpha = sum(1 for x in types if x is AgentType.ALPHA)
        n_chi = sum(1 for x in types if x is AgentType.CHI)
        n_cand = 0
        for v in range(n):
            if types[v] is not AgentType.CHI:
                continue
            a = c = nu = 0
            for u in graph.neighbors(v):
                tu = types[u]
                if tu is AgentType.ALPHA:
                    a += 1
                elif tu is AgentType.CHI:
                    c += 1
                else:
                    nu += 1
            if (a, c, nu) in member.get(graph.degree(v), ()):
                n_cand += 1
        dev = abs(n_cand - float(exp_candidate) * n)
        max_dev = max(max_dev, dev)
        cand_sum += n_cand
        trial_rows.append(
            {
                "trial": t,
                "n_alpha": n_alpha,
                "n_chi": n_chi,
                "n_candidates": n_cand,
                "candidate_fraction": format_decimal(n_cand / n),
                "deviation": format_decimal(dev),
            }
        )

    devs = sorted(float(r["deviation"]) for r in trial_rows)
    return {
        "state": state,
        "n": n,
        "trials": trials,
        "expected_alpha_fraction": format_rational(exp_alpha),
        "expected_chi_fraction": format_rational(exp_chi),
        "expected_candidate_fraction": format_rational(exp_candidate),
        "expected_candidate_fraction_decimal": format_decimal(exp_candidate),
        "empirical_candidate_fraction": format_decimal(cand_sum / (trials * n)),
        "chi_star_bound": chi_star,
        "envelope_level": format_rational(Fraction(level)),
        "envelope_deviation": format_decimal(envelope),
        "max_deviation": format_decimal(max_dev),
        "deviation_quantiles": {
            "min": format_decimal(devs[0]),
            "median": format_decimal(devs[len(devs) // 2]),
            "max": format_decimal(devs[-1]),
        },
        "envelope_violations": sum(1 for d in devs if d > envelope),
        "trial_rows": trial_rows,
    }


VALIDATE_COLUMNS = (
    "trial",
    "n_alpha",
    "n_chi",
    "n_candidates",
    "candidate_fraction",
    "deviation",
)


# ---------------------------------------------------------------------------
# Randomized epistemic-model battery
# ---------------------------------------------------------------------------


def random_epistemic_model(
    seed: int, max_outcomes: int = 6, max_agents: int = 3
):
    """One random finite model plus thresholds: up to `max_outcomes` outcomes
    with positive rational probabilities (integer weights 1..8 normalized),
    random information partitions, and p, mu drawn from the eighths grid.
    Deterministic in the seed."""
    from .epistemic import AgentPartition, EpistemicModel, FiniteProbSpace

    rng = np.random.Generator(np.random.PCG64(seed))
    m = int(rng.integers(1, max_outcomes + 1))
    outcomes = tuple(range(m))
    weights = [int(w) for w in rng.integers(1, 9, size=m)]
    total = sum(weights)
    probs = tuple(Fraction(w, total) for w in weights)
    space = FiniteProbSpace(outcomes, probs)

    n_agents = int(rng.integers(1, max_agents + 1))
    partitions = []
    for _ in range(n_agents):
        k = int(rng.integers(1, m + 1))
        assignment = rng.integers(0, k, size=m)
        assignment[rng.integers(0, m)] = 0  # cell 0 always nonempty
        cells = [
            frozenset(o for o, c in zip(outcomes, assignment) if c == cell)
            for cell in range(k)
        ]
        partitions.append(AgentPartition(tuple(c for c in cells if c)))
    model = EpistemicModel(
        space, tuple(f"agent{i}" for i in range(n_agents)), tuple(partitions)
    )
    p = Fraction(int(rng.integers(0, 9)), 8)
    mu = Fraction(int(rng.integers(0, 9)), 8)
    return model, min(p, Fraction(1)), min(mu, Fraction(1))


def prop1_battery(count: int, seed: int) -> tuple[int, int]:
    """Run the fixpoint-vs-search equivalence over `count` random models;
    returns (number agreeing on every event and outcome, count)."""
    from .epistemic import check_fixpoint_search_agreement

    agree = 0
    for i in range(count):
        model, p, mu = random_epistemic_model(derive_seed(seed, i))
        if check_fixpoint_search_agreement(model, p, mu):
            agree += 1
    return agree, count
