"""Equilibrium, regime and valuation audits for small games and value scales."""

from .games import (
    BimatrixGame,
    GameError,
    IndifferenceSolution,
    MixedProfile,
    NashMode,
    Player,
    Status,
    StrategyProfile,
    best_response,
    enumerate_pure_nash,
    full_support_indifference,
    solve_constant_sum_mixed,
)

__version__ = "0.1.0"
