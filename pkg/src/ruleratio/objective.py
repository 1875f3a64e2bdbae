"""Squared-error cost over pair weights, its gradient, and two minimizers.

The strength model assigns one weight per ordered item pair ``(i, j)``
(an indicator-basis expansion, so the weight *is* the estimate for that
pair).  Fitting the weights to the observed counts leads to the
per-record-normalized cost

    cost(w) = sum_ij [ 1/2 * w_ij^2 * C(j)/N  -  w_ij * C(i,j)/N ]

and, with a ridge penalty of weight ``lam`` scaled like the cost itself,

    objective(w) = cost(w) + lam/(2N) * sum_ij w_ij^2.

The objective is separable: each coordinate is an independent upward
parabola, so the global minimizer has the closed form

    w_ij = C(i,j) / (C(j) + lam)

which is non-negative wherever counts are, making the non-negativity
constraint inactive.  Pairs that never co-occur have a forced optimum of
zero, so only observed pairs are represented.

:func:`numeric_minimizer` re-derives the same minimizer by projected
gradient descent and exists purely as an independent cross-check of
:func:`analytic_solution`.
"""

from __future__ import annotations

import math
from typing import Mapping

import numpy as np

from .counts import CooccurrenceCounts

Pair = tuple[int, int]
PairWeights = dict[Pair, float]


class ConvergenceError(RuntimeError):
    """Projected gradient descent did not reach the tolerance in budget."""


def support_pairs(counts: CooccurrenceCounts) -> list[Pair]:
    """Ordered pairs ``(i, j)`` with a positive co-occurrence count.

    Includes the diagonal ``(i, i)`` for every occurring item and both
    orientations of every observed off-diagonal pair, in sorted order.
    """
    support = [(i, i) for i, c in counts.unary.items() if c > 0]
    for i, j, c in counts.iter_pairs():
        if c > 0:
            support.append((i, j))
            support.append((j, i))
    support.sort()
    return support


def _validate(weights: Mapping[Pair, float], counts: CooccurrenceCounts) -> None:
    if counts.n_records == 0:
        raise ValueError("counts cover zero records; the cost is undefined")
    n_items = counts.n_items
    for i, j in weights:
        if not (0 <= i < n_items and 0 <= j < n_items):
            raise ValueError(f"weight key ({i}, {j}) outside the vocabulary")


def empirical_cost(weights: Mapping[Pair, float], counts: CooccurrenceCounts) -> float:
    """Evaluate the unpenalized cost at ``weights``.

    Only stored entries contribute; a missing key is an exact zero and
    adds nothing to either sum.
    """
    _validate(weights, counts)
    n = counts.n_records
    terms = []
    for (i, j), w in weights.items():
        cj = counts.unary_count(j)
        cij = counts.pair_count(i, j)
        terms.append(0.5 * w * w * cj / n - w * cij / n)
    return math.fsum(terms)


def regularized_objective(
    weights: Mapping[Pair, float], counts: CooccurrenceCounts, lam: float
) -> float:
    """Cost plus the ridge penalty ``lam/(2N) * sum w^2``."""
    if lam < 0:
        raise ValueError(f"lam must be >= 0, got {lam}")
    _validate(weights, counts)
    n = counts.n_records
    penalty = lam / (2 * n) * math.fsum(w * w for w in weights.values())
    return empirical_cost(weights, counts) + penalty


def objective_gradient(
    weights: Mapping[Pair, float], counts: CooccurrenceCounts, lam: float
) -> PairWeights:
    """Partial derivatives of the regularized objective at ``weights``.

    Component ``(i, j)`` is ``w_ij * (C(j) + lam) / N - C(i,j) / N``;
    the result has exactly the keys of ``weights``.
    """
    if lam < 0:
        raise ValueError(f"lam must be >= 0, got {lam}")
    _validate(weights, counts)
    n = counts.n_records
    grad: PairWeights = {}
    for (i, j), w in weights.items():
        cj = counts.unary_count(j)
        cij = counts.pair_count(i, j)
        grad[(i, j)] = w * (cj + lam) / n - cij / n
    return grad


def analytic_solution(counts: CooccurrenceCounts, lam: float) -> PairWeights:
    """Closed-form minimizer ``C(i,j) / (C(j) + lam)`` over observed pairs.

    ``lam=0`` is allowed and yields the plain ratio matrix; it would only
    divide by zero for an item that co-occurs without occurring, which no
    well-formed counts contain (guarded anyway).
    """
    if lam < 0:
        raise ValueError(f"lam must be >= 0, got {lam}")
    solution: PairWeights = {}
    for i, j in support_pairs(counts):
        cj = counts.unary_count(j)
        if cj == 0 and lam == 0:
            raise ValueError(
                f"item {j} co-occurs but has zero count; undefined at lam=0"
            )
        solution[(i, j)] = counts.pair_count(i, j) / (cj + lam)
    return solution


def numeric_minimizer(
    counts: CooccurrenceCounts,
    lam: float,
    tol: float = 1e-10,
    max_iter: int = 200_000,
) -> PairWeights:
    """Minimize the regularized objective by projected gradient descent.

    Starts from zero, takes fixed steps of length ``N / (max C(j) + lam)``
    (the inverse of the largest per-coordinate curvature), clamps negative
    components to zero after each step, and stops once the sup norm of the
    projected gradient is at most ``tol``.  Kept deliberately independent
    of :func:`analytic_solution` so the two can cross-check each other.

    Raises
    ------
    ConvergenceError
        If the tolerance is not reached within ``max_iter`` iterations;
        the message reports the final projected-gradient norm.
    """
    if not lam > 0:
        raise ValueError(f"the numeric path requires lam > 0, got {lam}")
    support = support_pairs(counts)
    if not support:
        return {}
    n = counts.n_records
    cj = np.array([counts.unary_count(j) for _, j in support], dtype=np.float64)
    cij = np.array([counts.pair_count(i, j) for i, j in support], dtype=np.float64)
    step = n / (cj.max() + lam)
    w = np.zeros(len(support))
    for _ in range(max_iter):
        grad = (w * (cj + lam) - cij) / n
        # At the boundary only a descent direction (negative gradient) counts.
        projected = np.where((w > 0) | (grad < 0), grad, 0.0)
        norm = np.abs(projected).max()
        if norm <= tol:
            return {pair: float(w[k]) for k, pair in enumerate(support)}
        w = np.maximum(w - step * grad, 0.0)
    grad = (w * (cj + lam) - cij) / n
    projected = np.where((w > 0) | (grad < 0), grad, 0.0)
    raise ConvergenceError(
        f"no convergence in {max_iter} iterations; "
        f"projected gradient norm {np.abs(projected).max():.3e} > tol {tol:.3e}"
    )
