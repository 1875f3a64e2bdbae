"""Tests for ruleratio.objective — the quadratic cost and its two minimizers."""
from __future__ import annotations

import numpy as np
import pytest

from ruleratio.counts import count
from ruleratio.objective import (
    ConvergenceError,
    analytic_solution,
    empirical_cost,
    numeric_minimizer,
    objective_gradient,
    regularized_objective,
    support_pairs,
)
from ruleratio.transactions import parse_records

TOY = parse_records(["a b", "a b", "a", "b"])
TOY_COUNTS = count(TOY)


def _random_counts(rng: np.random.Generator, max_items: int = 8, max_records: int = 50):
    n_items = int(rng.integers(2, max_items + 1))
    n_records = int(rng.integers(1, max_records + 1))
    p = rng.uniform(0.1, 0.6)
    tokens = [f"t{i}" for i in range(n_items)]
    lines = []
    for _ in range(n_records):
        keep = rng.random(n_items) < p
        lines.append(" ".join(t for t, k in zip(tokens, keep) if k))
    return count(parse_records(lines))


class TestCostValues:
    def test_support_covers_diagonal_and_both_orientations(self):
        assert support_pairs(TOY_COUNTS) == [(0, 0), (0, 1), (1, 0), (1, 1)]

    def test_toy_empirical_cost(self):
        # 0.5 * 0.25 * 3/4 - 0.5 * 2/4 = -0.15625
        assert empirical_cost({(0, 1): 0.5}, TOY_COUNTS) == -0.15625

    def test_toy_regularized_objective(self):
        # adds 1/(2*4) * 0.25 = 0.03125
        assert regularized_objective({(0, 1): 0.5}, TOY_COUNTS, 1.0) == -0.125

    def test_missing_keys_are_exact_zeros(self):
        assert empirical_cost({}, TOY_COUNTS) == 0.0

    def test_zero_records_is_an_error(self):
        empty = count(parse_records([]))
        with pytest.raises(ValueError, match="zero records"):
            empirical_cost({}, empty)

    def test_out_of_vocabulary_key_rejected(self):
        with pytest.raises(ValueError, match=r"\(5, 0\)"):
            empirical_cost({(5, 0): 1.0}, TOY_COUNTS)

    def test_negative_lam_rejected(self):
        with pytest.raises(ValueError):
            regularized_objective({}, TOY_COUNTS, -1.0)


class TestGradient:
    def test_toy_gradient_component(self):
        # d/dw at w=0.5: 0.5 * (3+1)/4 - 2/4 = 0
        grad = objective_gradient({(0, 1): 0.5}, TOY_COUNTS, 1.0)
        assert grad == {(0, 1): 0.0}

    def test_gradient_vanishes_at_the_analytic_solution(self):
        rng = np.random.default_rng(2041)
        for _ in range(20):
            c = _random_counts(rng)
            for lam in (0.5, 1.0, 5.0):
                sol = analytic_solution(c, lam)
                grad = objective_gradient(sol, c, lam)
                assert max((abs(g) for g in grad.values()), default=0.0) <= 1e-12

    def test_matches_central_finite_differences(self):
        rng = np.random.default_rng(515)
        step = 1e-6
        checked = 0
        while checked < 60:
            c = _random_counts(rng)
            support = support_pairs(c)
            if not support:
                continue
            lam = float(rng.uniform(0.0, 6.0))
            weights = {pair: float(rng.uniform(-1.0, 2.0)) for pair in support}
            grad = objective_gradient(weights, c, lam)
            for pair in support:
                up = dict(weights)
                dn = dict(weights)
                up[pair] += step
                dn[pair] -= step
                fd = (
                    regularized_objective(up, c, lam)
                    - regularized_objective(dn, c, lam)
                ) / (2 * step)
                rel = abs(fd - grad[pair]) / max(abs(grad[pair]), 1e-8)
                assert rel <= 1e-5
            checked += 1

    def test_coordinates_are_independent(self):
        # Changing one weight moves only that gradient component.
        weights = {(0, 0): 0.3, (0, 1): 0.7, (1, 1): 0.1}
        before = objective_gradient(weights, TOY_COUNTS, 2.0)
        weights[(0, 1)] = -0.2
        after = objective_gradient(weights, TOY_COUNTS, 2.0)
        assert after[(0, 0)] == before[(0, 0)]
        assert after[(1, 1)] == before[(1, 1)]
        assert after[(0, 1)] != before[(0, 1)]


class TestAnalyticSolution:
    def test_toy_solution(self):
        assert analytic_solution(TOY_COUNTS, 1.0) == {
            (0, 0): 0.75,
            (0, 1): 0.5,
            (1, 0): 0.5,
            (1, 1): 0.75,
        }

    def test_solution_is_nonnegative_everywhere(self):
        rng = np.random.default_rng(3178)
        for _ in range(20):
            c = _random_counts(rng)
            sol = analytic_solution(c, float(rng.uniform(0, 10)))
            assert all(v >= 0.0 for v in sol.values())

    def test_beats_random_perturbations(self):
        rng = np.random.default_rng(640)
        c = _random_counts(rng)
        lam = 1.5
        sol = analytic_solution(c, lam)
        best = regularized_objective(sol, c, lam)
        for _ in range(50):
            bumped = {
                k: v + float(rng.normal(scale=0.1)) for k, v in sol.items()
            }
            assert regularized_objective(bumped, c, lam) >= best

    def test_lam_zero_allowed_on_wellformed_counts(self):
        sol = analytic_solution(TOY_COUNTS, 0.0)
        assert sol[(0, 1)] == TOY_COUNTS.pair_count(0, 1) / TOY_COUNTS.unary_count(1)


class TestNumericMinimizer:
    def test_agrees_with_the_closed_form(self):
        rng = np.random.default_rng(99)
        for _ in range(30):
            c = _random_counts(rng)
            for lam in (0.5, 1.0, 5.0):
                exact = analytic_solution(c, lam)
                descent = numeric_minimizer(c, lam, tol=1e-10)
                assert descent.keys() == exact.keys()
                gap = max(
                    (abs(exact[k] - descent[k]) for k in exact), default=0.0
                )
                assert gap <= 1e-6

    def test_empty_support_returns_empty(self):
        c = count(parse_records(["", ""]))
        assert numeric_minimizer(c, 1.0) == {}

    def test_requires_positive_lam(self):
        with pytest.raises(ValueError):
            numeric_minimizer(TOY_COUNTS, 0.0)

    def test_budget_exhaustion_raises_with_final_norm(self):
        # Uneven item counts, so the fixed step contracts slowly and two
        # iterations cannot reach the tolerance.
        c = count(parse_records(["a b", "a b", "a", "b", "b", "b"]))
        with pytest.raises(ConvergenceError, match="projected gradient norm"):
            numeric_minimizer(c, 1.0, tol=1e-14, max_iter=2)
