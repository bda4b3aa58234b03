"""Degree-sequence algorithms for the largest supported revolt, the promise
decision procedure built on top of it, and its extensions: smallest
supported revolt, arbitrary-degree graphs, and more than two states.

All arithmetic is exact rational. Everything here depends on the graph only
through its degree multiset; permuting a sequence or substituting any graph
with the same degrees cannot change a result.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Optional

from .errors import MislabeledStatesError, ValidationError
from .model import (
    AgentType,
    ContextClass,
    DegreeSequence,
    Prior,
    StatePrior,
    context_likelihood,
    validate_degree_sequence,
)

ZERO = Fraction(0)


class PromiseOutcome(Enum):
    """Answer symbols for the promise decision problem."""

    OMEGA = "omega"  # the requested revolt size is supported in both states
    A = "A"  # supported in state A only
    EMPTY = "empty"  # supported in neither state
    NULL = "null"  # the two perturbed runs disagreed (promise violated)


@dataclass(frozen=True)
class PromiseInstance:
    degseq: tuple[int, ...]
    prior: Prior
    mu_star: Fraction
    epsilon: Fraction
    delta: Fraction

    def __post_init__(self):
        object.__setattr__(self, "degseq", tuple(validate_degree_sequence(self.degseq)))
        object.__setattr__(self, "mu_star", Fraction(self.mu_star))
        object.__setattr__(self, "epsilon", Fraction(self.epsilon))
        object.__setattr__(self, "delta", Fraction(self.delta))
        if self.epsilon <= 0 or self.delta <= 0:
            raise ValidationError("epsilon and delta must be positive")
        p, mu = self.prior.p, self.prior.mu
        third_d, third_e = self.delta / 3, self.epsilon / 3
        if not (0 < p - third_d and p + third_d < 1):
            raise ValidationError("p +/- delta/3 must stay inside (0, 1)")
        if not (0 < mu - third_e and mu + third_e < 1):
            raise ValidationError("mu +/- epsilon/3 must stay inside (0, 1)")


# ---------------------------------------------------------------------------
# Expected fractions
# ---------------------------------------------------------------------------


def expected_type_fraction(
    state: str, types: Iterable[AgentType], prior: Prior
) -> Fraction:
    """Expected fraction of agents whose type is in `types`, in the given
    state. Degree-independent."""
    dist = prior.state(state).types
    return sum((dist.prob(t) for t in set(types)), ZERO)


def expected_context_fraction(
    state: str,
    contexts: Iterable[ContextClass],
    prior: Prior,
    degseq: DegreeSequence,
) -> Fraction:
    """Expected fraction of agents whose realized context lies in the given
    set, in the given state: averages the per-degree membership probability
    over the degree multiset."""
    seq = validate_degree_sequence(degseq)
    by_degree: dict[int, list[ContextClass]] = {}
    for c in set(contexts):
        by_degree.setdefault(c.degree, []).append(c)
    counts = Counter(seq)
    total = ZERO
    for d, group in by_degree.items():
        if d not in counts:
            continue
        mass = sum((context_likelihood(c, state, prior) for c in group), ZERO)
        total += counts[d] * mass
    return total / len(seq)


def expected_fraction(
    state: str,
    prior: Prior,
    degseq: Optional[DegreeSequence] = None,
    types: Iterable[AgentType] = (),
    contexts: Iterable[ContextClass] = (),
) -> Fraction:
    """Union of a type selector and a context selector. The two parts must
    be disjoint (context own-types not also selected as whole types), which
    makes the union a plain sum."""
    types = set(types)
    contexts = list(contexts)
    if any(c.own_type in types for c in contexts):
        raise ValidationError("context selector overlaps the type selector")
    total = expected_type_fraction(state, types, prior) if types else ZERO
    if contexts:
        if degseq is None:
            raise ValidationError("a context selector needs a degree sequence")
        total += expected_context_fraction(state, contexts, prior, degseq)
    return total


# ---------------------------------------------------------------------------
# Candidate contexts
# ---------------------------------------------------------------------------


@lru_cache(maxsize=4096)
def _degree_table(
    states: tuple[StatePrior, ...], degree: int
) -> tuple[tuple[tuple[int, int, int], tuple[Fraction, ...], tuple[Fraction, ...]], ...]:
    """Per-degree table of possible chi-centered contexts: neighbor counts,
    per-state likelihood, per-state posterior. Contexts with zero likelihood
    in every state are omitted (they never occur and have no posterior).
    The table does not depend on p or mu, so threshold sweeps share it."""
    rows = []
    state_probs = tuple(s.prob for s in states)
    dists = tuple(s.types for s in states)
    if all(d.chi == 0 for d in dists):
        return ()
    # Types with zero mass in every state cannot occur; skipping them keeps
    # high-degree tables linear instead of quadratic in the degree.
    alpha_possible = any(d.alpha > 0 for d in dists)
    nu_possible = any(d.nu > 0 for d in dists)
    for a in range(degree + 1 if alpha_possible else 1):
        c_values = range(degree - a, degree + 1 - a) if not nu_possible else range(degree + 1 - a)
        for c in c_values:
            v = degree - a - c
            coeff = comb(degree, a) * comb(degree - a, c)
            likes = tuple(
                d.chi * coeff * d.alpha**a * d.chi**c * d.nu**v for d in dists
            )
            weighted = tuple(sp * lk for sp, lk in zip(state_probs, likes))
            total = sum(weighted, ZERO)
            if total == 0:
                continue
            posts = tuple(w / total for w in weighted)
            rows.append(((a, c, v), likes, posts))
    return tuple(rows)


def _state_index(prior: Prior) -> dict[str, int]:
    return {s.label: i for i, s in enumerate(prior.states)}


def candidate_contexts(
    prior: Prior,
    degrees: Iterable[int],
    candidate_states: Iterable[str],
    p: Optional[Fraction] = None,
) -> list[ContextClass]:
    """Chi-centered contexts (over the given degrees) whose posterior mass on
    the candidate-state set is at least p."""
    p = prior.p if p is None else Fraction(p)
    idx = _state_index(prior)
    sel = [idx[s] for s in candidate_states]
    out = []
    for d in sorted(set(degrees)):
        for (a, c, v), _likes, posts in _degree_table(prior.states, d):
            if sum((posts[i] for i in sel), ZERO) >= p:
                out.append(ContextClass(AgentType.CHI, a, c, v))
    return out


def _candidate_mass(
    prior: Prior,
    degrees: Iterable[int],
    candidate_states: frozenset,
    total_n: int,
) -> dict[str, Fraction]:
    """Per-state expected fraction (relative to total_n agents) of agents
    whose context is a candidate context over the given degree entries."""
    idx = _state_index(prior)
    sel = [idx[s] for s in candidate_states]
    counts = Counter(degrees)
    mass = [ZERO] * len(prior.states)
    for d, m in counts.items():
        for _counts, likes, posts in _degree_table(prior.states, d):
            if sum((posts[i] for i in sel), ZERO) >= prior.p:
                for i, lk in enumerate(likes):
                    mass[i] += m * lk
    return {s.label: mass[i] / total_n for i, s in enumerate(prior.states)}


# ---------------------------------------------------------------------------
# The two-state algorithm and the promise procedure
# ---------------------------------------------------------------------------


def algorithm1(degseq: DegreeSequence, prior: Prior) -> dict[str, Fraction]:
    """Largest supported revolt size (expected fraction) per state, for the
    two-state case.

    Candidate states are those whose expected chi+alpha mass reaches mu; the
    branch on the candidate set follows the weak inequalities verbatim. If
    only B qualifies, or the computed sizes come out reversed, the labels
    violate the X_A >= X_B convention and a relabel error is raised rather
    than a silently reordered answer.
    """
    prior.require_two_states()
    seq = validate_degree_sequence(degseq)

    e_alpha = {
        s: expected_type_fraction(s, (AgentType.ALPHA,), prior) for s in ("A", "B")
    }
    e_chi_alpha = {
        s: expected_type_fraction(s, (AgentType.CHI, AgentType.ALPHA), prior)
        for s in ("A", "B")
    }
    candidates = {s for s in ("A", "B") if e_chi_alpha[s] >= prior.mu}

    if candidates == {"B"}:
        raise MislabeledStatesError(
            "only state B is a candidate; labels appear swapped"
        )
    if not candidates:
        x = dict(e_alpha)
    elif candidates == {"A", "B"}:
        x = dict(e_chi_alpha)
    else:
        mass = _candidate_mass(prior, seq, frozenset({"A"}), len(seq))
        if mass["A"] + e_alpha["A"] >= prior.mu:
            x = {s: mass[s] + e_alpha[s] for s in ("A", "B")}
        else:
            x = dict(e_alpha)
    if x["A"] < x["B"]:
        raise MislabeledStatesError(
            "computed X_A < X_B; labels appear swapped"
        )
    return x


def revolting_contexts(degseq: DegreeSequence, prior: Prior) -> list[ContextClass]:
    """The chi-centered contexts that revolt under the two-state largest-
    revolt reasoning: every possible chi context when both states qualify,
    the candidate contexts when only A does and they carry enough mass, and
    none otherwise. Used by the Monte-Carlo validator to count realized
    candidates."""
    prior.require_two_states()
    seq = validate_degree_sequence(degseq)
    e_chi_alpha = {
        s: expected_type_fraction(s, (AgentType.CHI, AgentType.ALPHA), prior)
        for s in ("A", "B")
    }
    candidates = {s for s in ("A", "B") if e_chi_alpha[s] >= prior.mu}
    if candidates == {"B"}:
        raise MislabeledStatesError(
            "only state B is a candidate; labels appear swapped"
        )
    if not candidates:
        return []
    if candidates == {"A", "B"}:
        out = []
        for d in sorted(set(seq)):
            for (a, c, v), _likes, _posts in _degree_table(prior.states, d):
                out.append(ContextClass(AgentType.CHI, a, c, v))
        return out
    e_alpha_a = expected_type_fraction("A", (AgentType.ALPHA,), prior)
    mass = _candidate_mass(prior, seq, frozenset({"A"}), len(seq))
    if mass["A"] + e_alpha_a >= prior.mu:
        return candidate_contexts(prior, seq, ("A",))
    return []


def swap_state_labels(prior: Prior) -> Prior:
    """Exchange the A and B labels (distributions and state probabilities
    travel with their worlds)."""
    prior.require_two_states()
    a, b = prior.state("A"), prior.state("B")
    return Prior(
        p=prior.p,
        mu=prior.mu,
        states=(
            StatePrior("A", b.prob, b.types),
            StatePrior("B", a.prob, a.types),
        ),
    )


def algorithm1_auto(
    degseq: DegreeSequence, prior: Prior
) -> tuple[dict[str, Fraction], bool]:
    """algorithm1 with relabel-and-retry: returns sizes keyed by the caller's
    original labels plus whether a relabel was needed."""
    try:
        return algorithm1(degseq, prior), False
    except MislabeledStatesError:
        swapped = algorithm1(degseq, swap_state_labels(prior))
        return {"A": swapped["B"], "B": swapped["A"]}, True


def algorithm2(sizes: dict[str, Fraction], mu_star) -> PromiseOutcome:
    """Compare per-state largest-revolt sizes against the requested size."""
    mu_star = Fraction(mu_star)
    xa, xb = sizes["A"], sizes["B"]
    if xa < xb:
        raise ValidationError("algorithm2 requires X_A >= X_B")
    if xa >= mu_star and xb >= mu_star:
        return PromiseOutcome.OMEGA
    if xa >= mu_star:
        return PromiseOutcome.A
    return PromiseOutcome.EMPTY


def algorithm3(inst: PromiseInstance) -> PromiseOutcome:
    """Promise decision: run the size computation twice with thresholds
    nudged up and down by a third of the tolerance; agreement decides, any
    disagreement is Null."""
    up = replace(
        inst.prior, p=inst.prior.p + inst.delta / 3, mu=inst.prior.mu + inst.epsilon / 3
    )
    down = replace(
        inst.prior, p=inst.prior.p - inst.delta / 3, mu=inst.prior.mu - inst.epsilon / 3
    )
    s1 = algorithm2(algorithm1(inst.degseq, up), inst.mu_star)
    s2 = algorithm2(algorithm1(inst.degseq, down), inst.mu_star)
    return s1 if s1 == s2 else PromiseOutcome.NULL


def equilibria_map(
    degseq: DegreeSequence,
    prior: Prior,
    mu_grid: Iterable[Fraction],
    epsilon,
    delta,
) -> list[tuple[Fraction, PromiseOutcome]]:
    """Promise answers along a grid of requested sizes; the data behind the
    three-column supported/only-in-A/unsupported region picture."""
    seq = tuple(validate_degree_sequence(degseq))
    rows = []
    for mu_star in mu_grid:
        mu_star = Fraction(mu_star)
        if not 0 <= mu_star <= 1:
            raise ValidationError("grid values must lie in [0, 1]")
        inst = PromiseInstance(seq, prior, mu_star, Fraction(epsilon), Fraction(delta))
        rows.append((mu_star, algorithm3(inst)))
    return rows


def crucial_thresholds(degseq: DegreeSequence, prior: Prior) -> dict[str, Fraction]:
    """The finite set of values the two-state computation compares p and mu
    against on this instance, for auditing how far a promise input sits from
    a decision boundary."""
    prior.require_two_states()
    seq = validate_degree_sequence(degseq)
    out = {
        "e_A(chi+alpha)": expected_type_fraction(
            "A", (AgentType.CHI, AgentType.ALPHA), prior
        ),
        "e_B(chi+alpha)": expected_type_fraction(
            "B", (AgentType.CHI, AgentType.ALPHA), prior
        ),
    }
    mass = _candidate_mass(prior, seq, frozenset({"A"}), len(seq))
    e_alpha_a = expected_type_fraction("A", (AgentType.ALPHA,), prior)
    out["e_A(candidates+alpha)"] = mass["A"] + e_alpha_a
    idx = _state_index(prior)
    posts = sorted(
        {
            posts[idx["A"]]
            for d in set(seq)
            for _c, _l, posts in _degree_table(prior.states, d)
        }
    )
    for i, q in enumerate(posts):
        out[f"posterior_A_level_{i}"] = q
    return out


# ---------------------------------------------------------------------------
# Extensions
# ---------------------------------------------------------------------------


def smallest_revolt(degseq: DegreeSequence, prior: Prior) -> dict[str, Fraction]:
    """Expected size of the smallest supported revolt per state, via the
    action-relabeling symmetry: swap alpha/nu masses, cross the two state
    distributions, flip both thresholds, run the largest-revolt computation,
    and return one minus the size of the transformed world built from each
    original state. State probabilities travel with their worlds (the
    crossing preserves which world is which, so non-uniform state priors
    stay attached to the right distribution)."""
    prior.require_two_states()
    a, b = prior.state("A"), prior.state("B")
    transformed = Prior(
        p=1 - prior.p,
        mu=1 - prior.mu,
        states=(
            StatePrior("A", b.prob, b.types.swap_alpha_nu()),
            StatePrior("B", a.prob, a.types.swap_alpha_nu()),
        ),
    )
    sizes, _relabeled = algorithm1_auto(degseq, transformed)
    # Transformed A was built from original B and vice versa.
    return {"A": 1 - sizes["B"], "B": 1 - sizes["A"]}


def high_degree_cutoff(n: int, cutoff_c) -> int:
    """Smallest integer k with k >= cutoff_c * n^(1/3), computed exactly by
    comparing cubes."""
    c = Fraction(cutoff_c)
    if c <= 0 or n < 1:
        raise ValidationError("need cutoff_c > 0 and n >= 1")
    target = c.numerator**3 * n
    k = round((target ** (1 / 3)) / c.denominator) if n < 2**50 else 1
    while (k * c.denominator) ** 3 >= target and k > 0:
        k -= 1
    while (k * c.denominator) ** 3 < target:
        k += 1
    return k


def algorithm1_general(
    degseq: DegreeSequence,
    prior: Prior,
    cutoff_c=Fraction(1),
    epsilon=Fraction(1, 100),
) -> dict[str, Fraction]:
    """Arbitrary-degree variant: agents with degree >= cutoff_c * n^(1/3)
    see enough of the graph to identify the state, so their chi mass joins
    the revolt in A without a belief calculation. When they are rarer than
    an epsilon fraction they are ignored and the base computation runs on
    the whole sequence unchanged."""
    prior.require_two_states()
    seq = validate_degree_sequence(degseq)
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise ValidationError("epsilon must be positive")
    n = len(seq)
    cutoff = high_degree_cutoff(n, cutoff_c)
    high = [d for d in seq if d >= cutoff]
    if Fraction(len(high), n) < epsilon:
        return algorithm1(seq, prior)
    low = [d for d in seq if d < cutoff]

    h_frac = Fraction(len(high), n)
    e_alpha = {
        s: expected_type_fraction(s, (AgentType.ALPHA,), prior) for s in ("A", "B")
    }
    e_chi_alpha = {
        s: expected_type_fraction(s, (AgentType.CHI, AgentType.ALPHA), prior)
        for s in ("A", "B")
    }
    h_chi = {s: h_frac * prior.state(s).types.chi for s in ("A", "B")}
    candidates = {s for s in ("A", "B") if e_chi_alpha[s] >= prior.mu}

    if candidates == {"B"}:
        raise MislabeledStatesError(
            "only state B is a candidate; labels appear swapped"
        )
    if not candidates:
        x = dict(e_alpha)
    elif candidates == {"A", "B"}:
        x = dict(e_chi_alpha)
    else:
        mass = _candidate_mass(prior, low, frozenset({"A"}), n)
        base = {s: mass[s] + e_alpha[s] for s in ("A", "B")}
        if base["A"] + h_chi["A"] >= prior.mu:
            xa = base["A"] + h_chi["A"]
            xb = (
                base["B"] + h_chi["B"]
                if base["B"] + h_chi["B"] >= prior.mu
                else base["B"]
            )
            x = {"A": xa, "B": xb}
        else:
            x = dict(e_alpha)
    if x["A"] < x["B"]:
        raise MislabeledStatesError("computed X_A < X_B; labels appear swapped")
    return x


def multistate_fixpoint(
    degseq: DegreeSequence, prior: Prior
) -> tuple[dict[str, Fraction], frozenset]:
    """General-m variant: start from every state whose chi+alpha mass
    reaches mu, and repeatedly drop states that cannot sustain the revolt of
    the agents believing in the current candidate set. All failing states
    are dropped per round; the fixpoint is order-independent (it is the
    unique maximal self-supporting candidate set). Returns per-state sizes
    and the surviving set."""
    seq = validate_degree_sequence(degseq)
    labels = prior.labels
    e_alpha = {s: expected_type_fraction(s, (AgentType.ALPHA,), prior) for s in labels}
    e_chi_alpha = {
        s: expected_type_fraction(s, (AgentType.CHI, AgentType.ALPHA), prior)
        for s in labels
    }
    survivors = {s for s in labels if e_chi_alpha[s] >= prior.mu}
    while True:
        if survivors:
            mass = _candidate_mass(prior, seq, frozenset(survivors), len(seq))
        else:
            mass = {s: ZERO for s in labels}
        failing = {s for s in survivors if mass[s] + e_alpha[s] < prior.mu}
        if not failing:
            break
        survivors -= failing
    x = {s: mass[s] + e_alpha[s] for s in labels}
    return x, frozenset(survivors)


def algorithm1_multistate(degseq: DegreeSequence, prior: Prior) -> dict[str, Fraction]:
    """Per-state largest supported revolt with any number of states.

    Agents whose contexts put posterior mass >= p on the surviving candidate
    set revolt in every realized state, so each state's size is its expected
    candidate-plus-alpha mass (which degenerates to the alpha mass when no
    candidate state survives)."""
    sizes, _ = multistate_fixpoint(degseq, prior)
    return sizes
