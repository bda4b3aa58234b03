from fractions import Fraction as F

import pytest

from factional_belief import (
    EpistemicModel,
    Prior,
    TypeDistribution,
    two_state_prior,
)


@pytest.fixture
def motivating_prior() -> Prior:
    """Two equally likely states; the anti-government one is 4/5 chi, the
    pro-government one 4/5 nu; thresholds p = 2/5, mu = 1/2."""
    return two_state_prior(
        F(2, 5),
        F(1, 2),
        TypeDistribution(alpha=F(0), chi=F(4, 5), nu=F(1, 5)),
        TypeDistribution(alpha=F(0), chi=F(1, 5), nu=F(4, 5)),
    )


@pytest.fixture
def die_model() -> EpistemicModel:
    """Fair die, one agent who has learned nothing."""
    return EpistemicModel.make(
        {i: F(1, 6) for i in range(1, 7)}, {"i": [[1, 2, 3, 4, 5, 6]]}
    )


@pytest.fixture
def two_agent_die() -> EpistemicModel:
    """Fair die; agent 1 learns the outcome up to pairs, agent 2 nothing."""
    return EpistemicModel.make(
        {i: F(1, 6) for i in range(1, 7)},
        {"1": [[1, 2], [3, 4], [5, 6]], "2": [[1, 2, 3, 4, 5, 6]]},
    )


def make_dist(alpha, chi, nu) -> TypeDistribution:
    return TypeDistribution(alpha=F(alpha), chi=F(chi), nu=F(nu))
