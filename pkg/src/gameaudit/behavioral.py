"""Behavioral variants of simple games: envy-adjusted investment and the ultimatum game."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

from .games import (
    BimatrixGame,
    GameError,
    NashMode,
    StrategyProfile,
    enumerate_pure_nash,
)

STAY = 0
INVEST = 1
INVESTMENT_LABELS = ("stays home", "invests abroad")


@dataclass(frozen=True)
class EnvyParams:
    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0
    delta: float = 0.0

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "delta"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise GameError(f"envy parameter {name} must be finite and >= 0, got {v!r}")

    @classmethod
    def symmetric(cls, epsilon: float) -> "EnvyParams":
        return cls(epsilon, epsilon, epsilon, epsilon)


def investment_game() -> BimatrixGame:
    """The envy-free investment game: company B picks the row, company A the column."""
    return apply_envy(EnvyParams())


def apply_envy(params: EnvyParams) -> BimatrixGame:
    """Investment game with envy terms added to the off-diagonal cells.

    In the usual (A's profit, B's profit) notation the matrix is::

                        A stays home      A invests abroad
        B stays home    (4, 4)            (3 + alpha, 2 - beta)
        B invests       (2 - gamma, 3 + delta)   (2, 2)

    A is the column player, so A's profit is stored as the column payoff.
    """
    p = params
    a_profit = [[4.0, 3.0 + p.alpha], [2.0 - p.gamma, 2.0]]
    b_profit = [[4.0, 2.0 - p.beta], [3.0 + p.delta, 2.0]]
    return BimatrixGame(INVESTMENT_LABELS, INVESTMENT_LABELS, b_profit, a_profit)


@dataclass(frozen=True)
class EnvyRegime:
    strict_nash: tuple[StrategyProfile, ...]
    weak_nash: tuple[StrategyProfile, ...]
    payoff_dominant: StrategyProfile | None


def _payoff_dominant(game: BimatrixGame, candidates) -> StrategyProfile | None:
    for s in candidates:
        u = game.cell(s.row_choice, s.col_choice)
        if all(u[0] >= game.cell(t.row_choice, t.col_choice)[0]
               and u[1] >= game.cell(t.row_choice, t.col_choice)[1] for t in candidates):
            return s
    return None


def classify_envy_regime(params: EnvyParams) -> EnvyRegime:
    game = apply_envy(params)
    strict = tuple(enumerate_pure_nash(game, NashMode.STRICT))
    weak = tuple(enumerate_pure_nash(game, NashMode.WEAK))
    return EnvyRegime(strict, weak, _payoff_dominant(game, strict))


def envy_threshold_sweep(grid_step: float, upper: float = 2.0) -> list[tuple[float, EnvyRegime]]:
    """Classify the symmetric envy game for epsilon = 0, step, 2*step, ... up to ``upper``."""
    if not grid_step > 0:
        raise GameError(f"grid step must be positive, got {grid_step!r}")
    count = int(math.floor(upper / grid_step + 1e-9))
    out = []
    for k in range(count + 1):
        eps = round(k * grid_step, 12)
        out.append((eps, classify_envy_regime(EnvyParams.symmetric(eps))))
    return out


def envy_law_violations(points) -> list[float]:
    """Epsilons in a sweep where the observed classification breaks the regime law.

    The law: (stay, stay) is a weak equilibrium exactly when epsilon <= 1, and
    (invest, invest) is a strict equilibrium exactly when epsilon > 0.
    """
    stay = StrategyProfile(STAY, STAY)
    invest = StrategyProfile(INVEST, INVEST)
    bad = []
    for eps, regime in points:
        if (stay in regime.weak_nash) != (eps <= 1.0 + 1e-12):
            bad.append(eps)
        elif (invest in regime.strict_nash) != (eps > 0):
            bad.append(eps)
    return bad


@dataclass(frozen=True)
class UltimatumInstance:
    total: int
    offer_step: int
    thresholds: Mapping[int, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.total <= 0 or self.offer_step <= 0:
            raise GameError("total and offer_step must be positive integers")
        if self.total % self.offer_step:
            raise GameError(f"offer_step {self.offer_step} does not divide total {self.total}")
        if any(p < 0 for p in self.thresholds.values()):
            raise GameError("threshold probabilities must be nonnegative")
        if abs(sum(self.thresholds.values()) - 1.0) > 1e-9:
            raise GameError("threshold probabilities must sum to 1")
        bad = [t for t in self.thresholds if not 0 <= t <= self.total]
        if bad:
            raise GameError(f"thresholds outside [0, {self.total}]: {bad}")

    def accept_probability(self, offer: int) -> float:
        # Responder accepts iff offer >= threshold.
        return sum(p for t, p in self.thresholds.items() if t <= offer)

    def offers(self) -> range:
        return range(self.offer_step, self.total, self.offer_step)


@dataclass(frozen=True)
class UltimatumOffer:
    offer: int
    proposer_expected: float
    accept_probability: float


def ultimatum_optimal_offer(instance: UltimatumInstance) -> UltimatumOffer:
    """Offer maximizing the proposer's expected share; ties go to the smaller offer."""
    offers = instance.offers()
    if not offers:
        raise GameError(f"no admissible offer: total {instance.total} <= step {instance.offer_step}")
    best = None
    for o in offers:
        p = instance.accept_probability(o)
        expected = (instance.total - o) * p
        if best is None or expected > best.proposer_expected + 1e-12:
            best = UltimatumOffer(o, expected, p)
    return best


def uniform_thresholds(values) -> dict[int, float]:
    values = list(values)
    return {int(v): 1.0 / len(values) for v in values}

