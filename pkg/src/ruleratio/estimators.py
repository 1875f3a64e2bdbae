"""Rule-strength estimators computed from co-occurrence counts.

Every family estimates the conditional probability that a record
containing the antecedent item ``y`` also contains the consequent item
``x``, from the pair count ``cxy`` and the antecedent count ``cy``:

* :class:`RegularizedRatio` -- ``cxy / (cy + lam)``, the closed-form
  minimizer of the regularized squared-error cost (see
  :mod:`ruleratio.objective`).
* :class:`ThresholdedRatio` -- the plain ratio ``cxy / cy`` when ``cxy``
  strictly exceeds a minimum-support threshold, else 0 (the Apriori
  estimator).
* :class:`AdditiveSmoothing` -- ``(cxy + mu) / (cy + mu * classes)``;
  ``mu=1, classes=2`` is Laplace smoothing.
* :class:`BetaPosterior` -- ``(cxy + a) / (cy + a + b)``, the posterior
  mean of a Bernoulli parameter under a Beta(a, b) prior.
* :class:`MaximumLikelihood` -- the unsmoothed ratio ``cxy / cy``.

All families map into [0, 1] whenever ``0 <= cxy <= cy`` and their
parameter constraints hold.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Union

import numpy as np

from .counts import CooccurrenceCounts

Pair = tuple[int, int]


class UndefinedRatioError(ValueError):
    """An estimator was asked for a ratio with a zero denominator.

    Unsmoothed families are undefined when the antecedent never occurs;
    callers are expected to restrict scoring to candidates with an
    observed antecedent.
    """


@dataclass(frozen=True)
class RegularizedRatio:
    """Strength ``cxy / (cy + lam)`` with ridge weight ``lam >= 0``.

    ``lam=0`` reduces to :class:`MaximumLikelihood`.  Larger ``lam``
    shrinks every score toward zero, hitting small-count antecedents
    hardest.
    """

    lam: float

    tag = "proposed"

    def __post_init__(self) -> None:
        if not self.lam >= 0:
            raise ValueError(f"lam must be >= 0, got {self.lam}")

    def strength(self, cxy: int, cy: int) -> float:
        if cy == 0:
            if self.lam == 0:
                raise UndefinedRatioError("antecedent count is 0 and lam is 0")
            return 0.0
        return cxy / (cy + self.lam)


@dataclass(frozen=True)
class ThresholdedRatio:
    """Ratio ``cxy / cy`` if ``cxy > theta``, else 0.

    The threshold is strict: a pair whose co-occurrence count equals
    ``theta`` scores 0.
    """

    theta: int

    tag = "apriori"

    def __post_init__(self) -> None:
        if not (isinstance(self.theta, (int, np.integer)) and self.theta >= 0):
            raise ValueError(f"theta must be a non-negative integer, got {self.theta!r}")

    def strength(self, cxy: int, cy: int) -> float:
        if cy == 0:
            raise UndefinedRatioError("antecedent count is 0")
        return cxy / cy if cxy > self.theta else 0.0


@dataclass(frozen=True)
class AdditiveSmoothing:
    """Strength ``(cxy + mu) / (cy + mu * classes)``.

    ``mu=0`` reduces to :class:`MaximumLikelihood`; ``mu=1, classes=2``
    is Laplace smoothing.
    """

    mu: float
    classes: int = 2

    tag = "additive"

    def __post_init__(self) -> None:
        if not self.mu >= 0:
            raise ValueError(f"mu must be >= 0, got {self.mu}")
        if not (isinstance(self.classes, (int, np.integer)) and self.classes >= 1):
            raise ValueError(f"classes must be a positive integer, got {self.classes!r}")

    def strength(self, cxy: int, cy: int) -> float:
        if cy == 0 and self.mu == 0:
            raise UndefinedRatioError("antecedent count is 0 and mu is 0")
        return (cxy + self.mu) / (cy + self.mu * self.classes)


@dataclass(frozen=True)
class BetaPosterior:
    """Posterior-mean strength ``(cxy + a) / (cy + a + b)``, ``a, b > 0``.

    ``a=1, b=1`` (uniform prior) coincides with Laplace smoothing.
    """

    a: float
    b: float

    tag = "beta"

    def __post_init__(self) -> None:
        if not self.a > 0:
            raise ValueError(f"a must be > 0, got {self.a}")
        if not self.b > 0:
            raise ValueError(f"b must be > 0, got {self.b}")

    def strength(self, cxy: int, cy: int) -> float:
        return (cxy + self.a) / (cy + self.a + self.b)


@dataclass(frozen=True)
class MaximumLikelihood:
    """Unsmoothed ratio ``cxy / cy``; unstable at small counts."""

    tag = "mle"

    def strength(self, cxy: int, cy: int) -> float:
        if cy == 0:
            raise UndefinedRatioError("antecedent count is 0")
        return cxy / cy


EstimatorSpec = Union[
    RegularizedRatio, ThresholdedRatio, AdditiveSmoothing, BetaPosterior, MaximumLikelihood
]

FAMILIES: dict[str, type] = {
    cls.tag: cls
    for cls in (
        RegularizedRatio,
        ThresholdedRatio,
        AdditiveSmoothing,
        BetaPosterior,
        MaximumLikelihood,
    )
}


def score(spec: EstimatorSpec, counts: CooccurrenceCounts, x: int, y: int) -> float:
    """Strength of the rule "``y`` predicts ``x``" under ``spec``."""
    return spec.strength(counts.pair_count(x, y), counts.unary_count(y))


def score_all(
    spec: EstimatorSpec,
    counts: CooccurrenceCounts,
    candidates: Iterable[Pair],
) -> dict[Pair, float]:
    """Score every ``(x, y)`` candidate; equals pointwise :func:`score`."""
    out: dict[Pair, float] = {}
    for x, y in candidates:
        try:
            out[(x, y)] = spec.strength(counts.pair_count(x, y), counts.unary_count(y))
        except UndefinedRatioError as exc:
            xt = counts.tokens[x] if x < len(counts.tokens) else str(x)
            yt = counts.tokens[y] if y < len(counts.tokens) else str(y)
            raise UndefinedRatioError(f"pair ({xt}, {yt}): {exc}") from exc
    return out


def strength_array(
    spec: EstimatorSpec, cxy: np.ndarray, cy: np.ndarray
) -> np.ndarray:
    """Vectorized :meth:`strength` over aligned count arrays.

    Requires every ``cy`` entry to be positive for the families that are
    undefined at ``cy=0``; produces results identical to the scalar path.
    """
    cxy = np.asarray(cxy, dtype=np.float64)
    cy = np.asarray(cy, dtype=np.float64)
    if isinstance(spec, RegularizedRatio):
        if spec.lam == 0 and np.any(cy == 0):
            raise UndefinedRatioError("antecedent count is 0 and lam is 0")
        return cxy / (cy + spec.lam)
    if isinstance(spec, ThresholdedRatio):
        if np.any(cy == 0):
            raise UndefinedRatioError("antecedent count is 0")
        return np.where(cxy > spec.theta, cxy / cy, 0.0)
    if isinstance(spec, AdditiveSmoothing):
        if spec.mu == 0 and np.any(cy == 0):
            raise UndefinedRatioError("antecedent count is 0 and mu is 0")
        return (cxy + spec.mu) / (cy + spec.mu * spec.classes)
    if isinstance(spec, BetaPosterior):
        return (cxy + spec.a) / (cy + spec.a + spec.b)
    if isinstance(spec, MaximumLikelihood):
        if np.any(cy == 0):
            raise UndefinedRatioError("antecedent count is 0")
        return cxy / cy
    raise TypeError(f"unknown estimator spec {spec!r}")


def describe(spec: EstimatorSpec) -> str:
    """One-line human-readable form, e.g. ``proposed(lam=5.5)``."""
    params = {
        k: v for k, v in vars(spec).items() if not k.startswith("_")
    }
    inner = ", ".join(f"{k}={v}" for k, v in params.items())
    return f"{spec.tag}({inner})"
