"""Revolt-game model primitives.

Types, common priors, identity-agnostic contexts, exact context likelihoods
and state posteriors, payoff evaluation, and the concrete-graph container.
All probabilities are exact `fractions.Fraction` values and every comparison
is exact; nothing here touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Optional, Sequence

from .errors import (
    ImpossibleContextError,
    NotTwoStatesError,
    UnknownStateError,
    ValidationError,
)

ZERO = Fraction(0)
ONE = Fraction(1)


class AgentType(Enum):
    """The three agent types: always-revolt, never-revolt, conditional."""

    ALPHA = "alpha"
    CHI = "chi"
    NU = "nu"


class Action(Enum):
    REVOLT = "R"
    YIELD = "Y"


@dataclass(frozen=True)
class TypeDistribution:
    """Distribution over the three agent types within one state."""

    alpha: Fraction
    chi: Fraction
    nu: Fraction

    def __post_init__(self):
        for name in ("alpha", "chi", "nu"):
            v = getattr(self, name)
            if not isinstance(v, Fraction):
                object.__setattr__(self, name, Fraction(v))
        for name in ("alpha", "chi", "nu"):
            if getattr(self, name) < 0:
                raise ValidationError(f"type probability {name} is negative")
        if self.alpha + self.chi + self.nu != 1:
            raise ValidationError("type probabilities must sum to exactly 1")

    def prob(self, t: AgentType) -> Fraction:
        return getattr(self, t.value)

    def swap_alpha_nu(self) -> "TypeDistribution":
        return TypeDistribution(alpha=self.nu, chi=self.chi, nu=self.alpha)


@dataclass(frozen=True)
class StatePrior:
    """One state: its label, prior probability, and type distribution."""

    label: str
    prob: Fraction
    types: TypeDistribution

    def __post_init__(self):
        if not isinstance(self.prob, Fraction):
            object.__setattr__(self, "prob", Fraction(self.prob))
        if self.prob < 0:
            raise ValidationError(f"state {self.label!r} has negative probability")


@dataclass(frozen=True)
class Prior:
    """Common prior: thresholds (p, mu), state distribution, and per-state
    type distributions.

    p and mu are accepted on the closed interval [0, 1]; the promise-problem
    layer re-tightens them to the open interval where perturbation requires
    it (the clique-reduction instances need p = 1 here).
    """

    p: Fraction
    mu: Fraction
    states: tuple[StatePrior, ...]

    def __post_init__(self):
        object.__setattr__(self, "p", Fraction(self.p))
        object.__setattr__(self, "mu", Fraction(self.mu))
        object.__setattr__(self, "states", tuple(self.states))
        if not (0 <= self.p <= 1 and 0 <= self.mu <= 1):
            raise ValidationError("p and mu must lie in [0, 1]")
        if len(self.states) < 2:
            raise ValidationError("a prior needs at least two states")
        labels = [s.label for s in self.states]
        if len(set(labels)) != len(labels):
            raise ValidationError("state labels must be unique")
        if sum((s.prob for s in self.states), ZERO) != 1:
            raise ValidationError("state probabilities must sum to exactly 1")

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(s.label for s in self.states)

    def state(self, label: str) -> StatePrior:
        for s in self.states:
            if s.label == label:
                return s
        raise UnknownStateError(f"unknown state {label!r}")

    def type_prob(self, label: str, t: AgentType) -> Fraction:
        return self.state(label).types.prob(t)

    def require_two_states(self) -> None:
        if set(self.labels) != {"A", "B"}:
            raise NotTwoStatesError(
                "this operation needs exactly two states labeled A and B; "
                f"got {sorted(self.labels)}"
            )


def two_state_prior(
    p,
    mu,
    dist_a: TypeDistribution,
    dist_b: TypeDistribution,
    prob_a=Fraction(1, 2),
) -> Prior:
    """Convenience constructor for the fundamental two-state case."""
    prob_a = Fraction(prob_a)
    return Prior(
        p=Fraction(p),
        mu=Fraction(mu),
        states=(
            StatePrior("A", prob_a, dist_a),
            StatePrior("B", 1 - prob_a, dist_b),
        ),
    )


@dataclass(frozen=True)
class ContextClass:
    """Identity-agnostic context: own type plus neighbor type counts.

    Neighbor counts are a sufficient statistic because types are drawn
    i.i.d. given the state; this is what keeps the number of contexts
    polynomial in the degree.
    """

    own_type: AgentType
    alpha_neighbors: int
    chi_neighbors: int
    nu_neighbors: int

    def __post_init__(self):
        for name in ("alpha_neighbors", "chi_neighbors", "nu_neighbors"):
            if getattr(self, name) < 0:
                raise ValidationError("neighbor counts must be nonnegative")

    @property
    def degree(self) -> int:
        return self.alpha_neighbors + self.chi_neighbors + self.nu_neighbors

    def neighbor_count(self, t: AgentType) -> int:
        return {
            AgentType.ALPHA: self.alpha_neighbors,
            AgentType.CHI: self.chi_neighbors,
            AgentType.NU: self.nu_neighbors,
        }[t]

    @classmethod
    def make(cls, own_type: AgentType, neighbors: Mapping[AgentType, int]) -> "ContextClass":
        return cls(
            own_type=own_type,
            alpha_neighbors=neighbors.get(AgentType.ALPHA, 0),
            chi_neighbors=neighbors.get(AgentType.CHI, 0),
            nu_neighbors=neighbors.get(AgentType.NU, 0),
        )


def enumerate_contexts(
    degree: int, own_type: Optional[AgentType] = None
) -> list[ContextClass]:
    """All contexts of the given degree: count compositions of `degree` into
    the three types, crossed with the own type (or all three if None)."""
    if degree < 0:
        raise ValidationError("degree must be nonnegative")
    owns = [own_type] if own_type is not None else list(AgentType)
    out = []
    for own in owns:
        for a in range(degree + 1):
            for c in range(degree + 1 - a):
                out.append(ContextClass(own, a, c, degree - a - c))
    return out


def context_likelihood(c: ContextClass, state: str, prior: Prior) -> Fraction:
    """Pr[context | state]: own-type marginal times the multinomial mass of
    the neighbor counts under the state's type distribution."""
    dist = prior.state(state).types
    coeff = comb(c.degree, c.alpha_neighbors) * comb(
        c.degree - c.alpha_neighbors, c.chi_neighbors
    )
    return (
        dist.prob(c.own_type)
        * coeff
        * dist.alpha**c.alpha_neighbors
        * dist.chi**c.chi_neighbors
        * dist.nu**c.nu_neighbors
    )


def state_posterior(c: ContextClass, prior: Prior) -> dict[str, Fraction]:
    """Posterior over states given a context, by Bayes' rule; exact, sums
    to 1. Raises if the context is impossible under every state."""
    weighted = {
        s.label: s.prob * context_likelihood(c, s.label, prior) for s in prior.states
    }
    total = sum(weighted.values(), ZERO)
    if total == 0:
        raise ImpossibleContextError(
            f"context {c} has zero likelihood in every state"
        )
    return {label: w / total for label, w in weighted.items()}


def payoff(
    t: AgentType, own_action: Action, revolt_count: int, n: int, prior: Prior
) -> Fraction:
    """Realized payoff of an agent of type t given the total revolt count.

    The mu threshold is compared exactly: revolt_count >= mu * n as
    rationals, no rounding rule.
    """
    if not 0 <= revolt_count <= n:
        raise ValidationError("revolt_count must lie in [0, n]")
    if t is AgentType.ALPHA:
        return ONE if own_action is Action.REVOLT else ZERO
    if t is AgentType.NU:
        return ONE if own_action is Action.YIELD else ZERO
    met = Fraction(revolt_count) >= prior.mu * n
    if met and own_action is Action.REVOLT:
        return 1 - prior.p
    if not met and own_action is Action.YIELD:
        return prior.p
    return ZERO


class ConcreteGraph:
    """Simple undirected graph on vertices 0..n-1 (immutable by convention)."""

    __slots__ = ("n", "edges", "_neighbors")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        if n < 0:
            raise ValidationError("graph size must be nonnegative")
        self.n = n
        canon = set()
        for u, v in edges:
            if u == v:
                raise ValidationError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValidationError(f"edge ({u}, {v}) out of range for n={n}")
            canon.add((min(u, v), max(u, v)))
        self.edges = frozenset(canon)
        nbrs: list[list[int]] = [[] for _ in range(n)]
        for u, v in sorted(self.edges):
            nbrs[u].append(v)
            nbrs[v].append(u)
        self._neighbors = tuple(tuple(sorted(ns)) for ns in nbrs)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._neighbors[v]

    def degree(self, v: int) -> int:
        return len(self._neighbors[v])

    def degree_sequence(self) -> list[int]:
        return [len(ns) for ns in self._neighbors]

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def __eq__(self, other):
        return (
            isinstance(other, ConcreteGraph)
            and self.n == other.n
            and self.edges == other.edges
        )

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"ConcreteGraph(n={self.n}, edges={sorted(self.edges)})"


DegreeSequence = Sequence[int]


def validate_degree_sequence(degseq: DegreeSequence) -> list[int]:
    seq = list(degseq)
    if not seq:
        raise ValidationError("degree sequence must be nonempty")
    for d in seq:
        if not isinstance(d, int) or d < 0:
            raise ValidationError(f"degree {d!r} is not a nonnegative integer")
    return seq
