from fractions import Fraction as F

import pytest

from factional_belief import torus_grid, two_state_prior, TypeDistribution
from factional_belief.errors import ValidationError
from factional_belief.experiments import (
    SweepConfig,
    grid,
    random_epistemic_model,
    run_promise_map,
    run_sweep,
    run_validate,
    sample_type_assignment,
)

class TestGrid:
    def test_inclusive_exact(self):
        assert grid("1/20", "3/20", "1/20") == (F(1, 20), F(1, 10), F(3, 20))

    def test_endpoint_exact_no_drift(self):
        values = grid(0, 1, F(1, 200))
        assert len(values) == 201 and values[-1] == 1

    def test_step_positive(self):
        with pytest.raises(ValidationError):
            grid(0, 1, 0)


class TestSweep:
    def test_constant_family_single_run(self, motivating_prior):
        cfg = SweepConfig(
            family="constant",
            n=1000,
            axis="param",
            values=(F(1), F(2)),
            prior=motivating_prior,
            trials=100,
            seed=5,
        )
        rows = run_sweep(cfg)
        assert [r["trials"] for r in rows] == [1, 1]  # deterministic family
        assert rows[0]["mean_eA_exact"] == "4/5"
        assert rows[1]["mean_eA_exact"] == "96/125"
        assert rows[0]["mean_eB_exact"] == "1/5"

    def test_p_axis_requires_fixed_param(self, motivating_prior):
        with pytest.raises(ValidationError):
            SweepConfig(
                family="er",
                n=100,
                axis="p",
                values=(F(1, 2),),
                prior=motivating_prior,
                trials=2,
                seed=0,
            )

    def test_p_axis_reuses_graphs_across_values(self, motivating_prior):
        cfg = SweepConfig(
            family="er",
            n=150,
            axis="p",
            values=grid("1/10", "9/10", "1/10"),
            prior=motivating_prior,
            fixed_param=F(1, 30),
            trials=6,
            seed=12,
        )
        rows = run_sweep(cfg)
        # same graphs at every p, so means are weakly decreasing exactly
        ea = [F(r["mean_eA_exact"]) for r in rows]
        eb = [F(r["mean_eB_exact"]) for r in rows]
        assert all(a >= b for a, b in zip(ea, ea[1:]))
        assert all(a >= b for a, b in zip(eb, eb[1:]))

    def test_rows_deterministic(self, motivating_prior):
        cfg = SweepConfig(
            family="ba",
            n=80,
            axis="param",
            values=(F(1), F(2)),
            prior=motivating_prior,
            trials=5,
            seed=3,
        )
        assert run_sweep(cfg) == run_sweep(cfg)


class TestPromiseMap:
    def test_rows(self, motivating_prior):
        rows = run_promise_map(
            [4] * 1000, motivating_prior, [F(0), F(3, 5)], F(1, 200), F(1, 200)
        )
        assert rows[0]["outcome"] == "omega"
        assert rows[1]["outcome"] == "A"
        assert rows[1]["mu_star"] == "3/5"


class TestValidate:
    def test_sampling_deterministic(self, motivating_prior):
        a = sample_type_assignment(motivating_prior, "A", 50, 7)
        b = sample_type_assignment(motivating_prior, "A", 50, 7)
        assert a == b

    def test_forced_type_has_zero_deviation(self):
        dist = TypeDistribution(F(0), F(1), F(0))
        prior = two_state_prior(
            F(2, 5), F(1, 2), dist, TypeDistribution(F(0), F(0), F(1))
        )
        graph = torus_grid(3, 3)
        report = run_validate(graph, prior, "A", trials=10, seed=1)
        assert float(report["max_deviation"]) == 0.0
        assert report["empirical_candidate_fraction"] == "1.0"

    def test_torus_report_contents(self, motivating_prior):
        graph = torus_grid(5, 8)
        report = run_validate(graph, motivating_prior, "A", trials=30, seed=2)
        assert report["n"] == 40
        assert report["chi_star_bound"] == 17
        assert report["expected_candidate_fraction"] == "2432/3125"
        assert len(report["trial_rows"]) == 30
        assert report["envelope_violations"] == 0


class TestRandomModelGenerator:
    def test_deterministic(self):
        m1, p1, mu1 = random_epistemic_model(31337)
        m2, p2, mu2 = random_epistemic_model(31337)
        assert m1 == m2 and p1 == p2 and mu1 == mu2

    def test_respects_size_limits(self):
        for seed in range(40):
            model, p, mu = random_epistemic_model(seed)
            assert 1 <= len(model.space.outcomes) <= 6
            assert 1 <= len(model.agents) <= 3
            assert 0 <= p <= 1 and 0 <= mu <= 1
            assert p.denominator in (1, 2, 4, 8)
