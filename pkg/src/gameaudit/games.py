"""Finite two-player games and their equilibria.

A :class:`BimatrixGame` holds one payoff table per player.  Rows belong to the
row player, columns to the column player, and ``row_payoff[i, j]`` is what the
row player earns when the profile ``(i, j)`` is played.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

PURE_TIE_TOL = 1e-12
PROB_TOL = 1e-9
EQUILIBRIUM_TOL = 1e-7
PIVOT_TOL = 1e-10


class GameError(ValueError):
    """Raised for malformed games or arguments outside an operation's domain."""


class Player(enum.Enum):
    ROW = "row"
    COL = "col"


class NashMode(enum.Enum):
    WEAK = "weak"
    STRICT = "strict"


class Status(enum.Enum):
    VALID = "Valid"
    INVALID = "Invalid"
    DEGENERATE = "Degenerate"


def _as_table(values, name: str) -> np.ndarray:
    table = np.array(values, dtype=float)
    if table.ndim != 2 or table.shape[0] < 1 or table.shape[1] < 1:
        raise GameError(f"{name} must be a non-empty 2-D table")
    if not np.all(np.isfinite(table)):
        raise GameError(f"{name} contains non-finite payoffs")
    table.setflags(write=False)
    return table


@dataclass(frozen=True, eq=False)
class BimatrixGame:
    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    row_payoff: np.ndarray
    col_payoff: np.ndarray

    def __init__(self, row_labels: Sequence[str], col_labels: Sequence[str],
                 row_payoff, col_payoff):
        rows = _as_table(row_payoff, "row_payoff")
        cols = _as_table(col_payoff, "col_payoff")
        if rows.shape != cols.shape:
            raise GameError(f"payoff tables differ in shape: {rows.shape} vs {cols.shape}")
        row_labels = tuple(str(s) for s in row_labels)
        col_labels = tuple(str(s) for s in col_labels)
        if (len(row_labels), len(col_labels)) != rows.shape:
            raise GameError(
                f"{len(row_labels)}x{len(col_labels)} labels for a {rows.shape[0]}x{rows.shape[1]} table")
        object.__setattr__(self, "row_labels", row_labels)
        object.__setattr__(self, "col_labels", col_labels)
        object.__setattr__(self, "row_payoff", rows)
        object.__setattr__(self, "col_payoff", cols)

    @classmethod
    def from_cells(cls, cells, row_labels=None, col_labels=None) -> "BimatrixGame":
        """Build a game from a nested list of ``(row_payoff, col_payoff)`` pairs."""
        arr = np.array(cells, dtype=float)
        if arr.ndim != 3 or arr.shape[2] != 2:
            raise GameError("cells must be a table of (row_payoff, col_payoff) pairs")
        n, m = arr.shape[:2]
        row_labels = row_labels or [f"r{i}" for i in range(n)]
        col_labels = col_labels or [f"c{j}" for j in range(m)]
        return cls(row_labels, col_labels, arr[:, :, 0], arr[:, :, 1])

    @property
    def shape(self) -> tuple[int, int]:
        return self.row_payoff.shape

    def cell(self, i: int, j: int) -> tuple[float, float]:
        return float(self.row_payoff[i, j]), float(self.col_payoff[i, j])

    def payoff_of(self, player: Player) -> np.ndarray:
        return self.row_payoff if player is Player.ROW else self.col_payoff

    def same_as(self, other: "BimatrixGame") -> bool:
        return (self.row_labels == other.row_labels
                and self.col_labels == other.col_labels
                and np.array_equal(self.row_payoff, other.row_payoff)
                and np.array_equal(self.col_payoff, other.col_payoff))

    def constant_sum_violation(self, c: float | None = None, tol: float = PURE_TIE_TOL):
        """Return the first cell ``(i, j, sum)`` breaking constant sum ``c``, or None.

        With ``c`` omitted the sum of cell (0, 0) is used as the constant.
        """
        totals = self.row_payoff + self.col_payoff
        if c is None:
            c = float(totals[0, 0])
        bad = np.argwhere(np.abs(totals - c) > tol)
        if len(bad):
            i, j = (int(k) for k in bad[0])
            return i, j, float(totals[i, j])
        return None

    def is_constant_sum(self, c: float | None = None, tol: float = PURE_TIE_TOL) -> bool:
        return self.constant_sum_violation(c, tol) is None

    def expected(self, row_mix, col_mix) -> tuple[float, float]:
        x = np.asarray(row_mix, dtype=float)
        y = np.asarray(col_mix, dtype=float)
        return float(x @ self.row_payoff @ y), float(x @ self.col_payoff @ y)


@dataclass(frozen=True, order=True)
class StrategyProfile:
    row_choice: int
    col_choice: int

    def labels(self, game: BimatrixGame) -> tuple[str, str]:
        return game.row_labels[self.row_choice], game.col_labels[self.col_choice]


@dataclass(frozen=True, eq=False)
class MixedProfile:
    row_mix: np.ndarray
    col_mix: np.ndarray
    value: float  # row player's expected payoff


@dataclass(frozen=True, eq=False)
class IndifferenceSolution:
    row_weights: np.ndarray
    col_weights: np.ndarray
    status: Status
    # Equalised payoffs: row_value for the row player, col_value for the column player.
    row_value: float = float("nan")
    col_value: float = float("nan")


def _check_index(n: int, k: int, what: str) -> None:
    if not 0 <= k < n:
        raise GameError(f"{what} index {k} out of range 0..{n - 1}")


def best_response(game: BimatrixGame, player: Player, opponent_choice: int) -> frozenset[int]:
    """All strategies of ``player`` that maximise payoff against a pure opponent choice."""
    n, m = game.shape
    if player is Player.ROW:
        _check_index(m, opponent_choice, "column")
        column = game.row_payoff[:, opponent_choice]
    else:
        _check_index(n, opponent_choice, "row")
        column = game.col_payoff[opponent_choice, :]
    best = column.max()
    return frozenset(int(k) for k in np.flatnonzero(column >= best - PURE_TIE_TOL))


def _is_pure_nash(game: BimatrixGame, i: int, j: int, mode: NashMode) -> bool:
    n, m = game.shape
    a, b = game.row_payoff, game.col_payoff
    for k in range(n):
        if k == i:
            continue
        gain = a[k, j] - a[i, j]
        if gain > PURE_TIE_TOL or (mode is NashMode.STRICT and gain >= -PURE_TIE_TOL):
            return False
    for k in range(m):
        if k == j:
            continue
        gain = b[i, k] - b[i, j]
        if gain > PURE_TIE_TOL or (mode is NashMode.STRICT and gain >= -PURE_TIE_TOL):
            return False
    return True


def enumerate_pure_nash(game: BimatrixGame, mode: NashMode = NashMode.WEAK) -> list[StrategyProfile]:
    """Pure Nash equilibria in row-major order.

    Weak mode keeps profiles where no unilateral deviation gains; strict mode
    additionally requires every deviation to lose.
    """
    n, m = game.shape
    return [StrategyProfile(i, j) for i, j in itertools.product(range(n), range(m))
            if _is_pure_nash(game, i, j, mode)]


def _clean_mix(v: np.ndarray) -> np.ndarray:
    v = np.where(np.abs(v) < PROB_TOL, 0.0, v)
    v = np.clip(v, 0.0, None)
    return v / v.sum()


def solve_constant_sum_mixed(game: BimatrixGame) -> MixedProfile:
    """Minimax-optimal mixed strategies of a constant-sum game.

    Both players' linear programs are solved separately, so the returned
    profile is a saddle point rather than merely one player's guarantee.
    """
    bad = game.constant_sum_violation()
    if bad is not None:
        i, j, total = bad
        c = float(game.row_payoff[0, 0] + game.col_payoff[0, 0])
        raise GameError(f"game is not constant-sum: cell ({i},{j}) sums to {total!r}, expected {c!r}")
    a = game.row_payoff
    n, m = a.shape

    # Row player: maximise v subject to x^T A >= v, sum x = 1.
    res_row = linprog(
        c=np.r_[np.zeros(n), -1.0],
        A_ub=np.c_[-a.T, np.ones(m)], b_ub=np.zeros(m),
        A_eq=np.r_[np.ones(n), 0.0][None, :], b_eq=[1.0],
        bounds=[(0, None)] * n + [(None, None)], method="highs")
    # Column player: minimise w subject to A y <= w, sum y = 1.
    res_col = linprog(
        c=np.r_[np.zeros(m), 1.0],
        A_ub=np.c_[a, -np.ones(n)], b_ub=np.zeros(n),
        A_eq=np.r_[np.ones(m), 0.0][None, :], b_eq=[1.0],
        bounds=[(0, None)] * m + [(None, None)], method="highs")
    if not (res_row.success and res_col.success):
        raise GameError(f"linear program failed: {res_row.message} / {res_col.message}")
    x = _clean_mix(res_row.x[:n])
    y = _clean_mix(res_col.x[:m])
    return MixedProfile(x, y, float(x @ a @ y))


def max_deviation_gain(game: BimatrixGame, row_mix, col_mix) -> float:
    """Largest gain any player gets from switching to a pure strategy."""
    x = np.asarray(row_mix, dtype=float)
    y = np.asarray(col_mix, dtype=float)
    u_row, u_col = game.expected(x, y)
    row_gain = float(np.max(game.row_payoff @ y) - u_row)
    col_gain = float(np.max(x @ game.col_payoff) - u_col)
    return max(row_gain, col_gain)


def is_mixed_equilibrium(game: BimatrixGame, row_mix, col_mix, tol: float = EQUILIBRIUM_TOL) -> bool:
    return max_deviation_gain(game, row_mix, col_mix) <= tol


def solve_linear(matrix: np.ndarray, rhs: np.ndarray, pivot_tol: float = PIVOT_TOL) -> np.ndarray | None:
    """Gaussian elimination with partial pivoting.

    Returns None when a pivot falls below ``pivot_tol`` times the largest
    entry of the matrix, i.e. the system is treated as rank-deficient.
    """
    a = np.array(matrix, dtype=float)
    b = np.array(rhs, dtype=float)
    n = a.shape[0]
    threshold = pivot_tol * max(1.0, float(np.max(np.abs(a))))
    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if abs(a[p, k]) < threshold:
            return None
        if p != k:
            a[[k, p]] = a[[p, k]]
            b[[k, p]] = b[[p, k]]
        factors = a[k + 1:, k] / a[k, k]
        a[k + 1:, k:] -= np.outer(factors, a[k, k:])
        b[k + 1:] -= factors * b[k]
    x = np.zeros(n)
    for k in range(n - 1, -1, -1):
        x[k] = (b[k] - a[k, k + 1:] @ x[k + 1:]) / a[k, k]
    return x


def _indifference_system(payoff: np.ndarray):
    # Rows: payoff @ w - v = 0 for every opposing strategy, then sum(w) = 1.
    n, m = payoff.shape
    k = np.zeros((n + 1, m + 1))
    k[:n, :m] = payoff
    k[:n, m] = -1.0
    k[n, :m] = 1.0
    rhs = np.zeros(n + 1)
    rhs[n] = 1.0
    return k, rhs


def _is_prob_vector(v: np.ndarray) -> bool:
    return bool(np.all(v >= -PROB_TOL) and np.all(v <= 1 + PROB_TOL)
                and abs(v.sum() - 1.0) <= PROB_TOL)


def full_support_indifference(game: BimatrixGame) -> IndifferenceSolution:
    """Solve the equal-payoff system assuming every strategy is played.

    The column mix makes the row player indifferent across rows, and the row
    mix makes the column player indifferent across columns.  Nothing is
    clamped: weights outside [0, 1] come back as-is with status Invalid.
    """
    n, m = game.shape
    if n != m:
        raise GameError(f"full-support indifference needs a square game, got {n}x{m}")
    if n < 2:
        raise GameError("full-support indifference needs at least 2 strategies per player")
    col_sol = solve_linear(*_indifference_system(game.row_payoff))
    row_sol = solve_linear(*_indifference_system(game.col_payoff.T))
    if col_sol is None or row_sol is None:
        nan = np.full(n, np.nan)
        return IndifferenceSolution(
            nan if row_sol is None else row_sol[:n],
            nan if col_sol is None else col_sol[:n],
            Status.DEGENERATE)
    x, y = row_sol[:n], col_sol[:n]
    status = Status.VALID if _is_prob_vector(x) and _is_prob_vector(y) else Status.INVALID
    return IndifferenceSolution(x, y, status, row_value=float(col_sol[n]), col_value=float(row_sol[n]))
