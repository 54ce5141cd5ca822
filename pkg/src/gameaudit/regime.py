"""Penalty-shooting game: where does a full-support equilibrium exist?

Cell ``(i, j)`` holds the goal probability when the keeper picks ``i`` and the
shooter picks ``j``.  The shooter (column player) maximizes it, the keeper
maximizes its complement.  Sweeping two cells over [0, 1]^2 maps where the
indifference solution is a genuine mixed strategy (Valid) and where it asks for
"probabilities" outside [0, 1] (Invalid).
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy.stats import truncnorm

from .games import BimatrixGame, GameError, Status, full_support_indifference

KEEPER_LABELS = ("left", "straight", "right")
SHOOTER_LABELS = ("left", "middle", "right")
KEEPER_CODES = {"l": 0, "s": 1, "r": 2}
SHOOTER_CODES = {"l": 0, "m": 1, "r": 2}

# Default varied cells: keeper straight vs shooter left / middle.
DEFAULT_ENTRIES = ((1, 0), (1, 1))

Entry = tuple[int, int]


def parse_entry(text: str) -> Entry:
    """Parse ``"1,0"`` (0-based keeper,shooter indices) or a letter pair such as ``"sl"``."""
    text = text.strip().lower()
    if "," in text:
        i, j = (int(t) for t in text.split(","))
    elif len(text) == 2 and text[0] in KEEPER_CODES and text[1] in SHOOTER_CODES:
        i, j = KEEPER_CODES[text[0]], SHOOTER_CODES[text[1]]
    else:
        raise GameError(f"cannot parse cell {text!r}; use 'i,j' or a pair like 'sl'")
    if not (0 <= i < 3 and 0 <= j < 3):
        raise GameError(f"cell {text!r} outside the 3x3 table")
    return i, j


@dataclass(frozen=True, eq=False)
class PenaltyGame:
    goal_prob: np.ndarray

    def __post_init__(self):
        p = np.array(self.goal_prob, dtype=float)
        if p.shape != (3, 3):
            raise GameError(f"penalty game needs a 3x3 table, got shape {p.shape}")
        if not np.all((p >= 0) & (p <= 1)):
            raise GameError("goal probabilities must lie in [0, 1]")
        p.setflags(write=False)
        object.__setattr__(self, "goal_prob", p)

    def with_entries(self, overrides: Mapping[Entry, float]) -> "PenaltyGame":
        p = self.goal_prob.copy()
        for (i, j), v in overrides.items():
            p[i, j] = v
        return PenaltyGame(p)


def diagonal_save_game() -> PenaltyGame:
    """Keeper saves for sure on the shooter's side, the shot always scores otherwise."""
    return PenaltyGame(1.0 - np.eye(3))


def to_bimatrix(game: PenaltyGame) -> BimatrixGame:
    p = game.goal_prob
    return BimatrixGame(KEEPER_LABELS, SHOOTER_LABELS, 1.0 - p, p)


def classify(game: PenaltyGame) -> Status:
    return full_support_indifference(to_bimatrix(game)).status


@dataclass(frozen=True, eq=False)
class RegimeGrid:
    entry1: Entry
    entry2: Entry
    values: np.ndarray  # lattice shared by both axes
    cells: tuple[tuple[Status, ...], ...]  # cells[k1][k2] for (values[k1], values[k2])

    @property
    def resolution(self) -> int:
        return len(self.values)

    def fraction(self, status: Status) -> float:
        hits = sum(s is status for row in self.cells for s in row)
        return hits / self.resolution ** 2

    def status_at(self, k1: int, k2: int) -> Status:
        return self.cells[k1][k2]


def _sweep_row(args) -> tuple[Status, ...]:
    goal_prob, entry1, entry2, v1, values = args
    base = PenaltyGame(goal_prob)
    return tuple(classify(base.with_entries({entry1: v1, entry2: v2})) for v2 in values)


def sweep_regime(game: PenaltyGame, entry1: Entry = DEFAULT_ENTRIES[0],
                 entry2: Entry = DEFAULT_ENTRIES[1], resolution: int = 101,
                 workers: int = 1) -> RegimeGrid:
    """Classify every point of a uniform ``resolution`` x ``resolution`` lattice over [0, 1]^2.

    All cells other than the two varied ones keep their value from ``game``.
    With ``workers > 1`` lattice rows are farmed out to processes; ``map``
    keeps them in lattice order, so the grid is identical to a serial run.
    """
    entry1, entry2 = tuple(entry1), tuple(entry2)
    if entry1 == entry2:
        raise GameError(f"varied cells must differ, got {entry1} twice")
    if resolution < 2:
        raise GameError(f"resolution must be >= 2, got {resolution}")
    values = np.linspace(0.0, 1.0, resolution)
    jobs = [(game.goal_prob, entry1, entry2, float(v1), values) for v1 in values]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_row, jobs, chunksize=max(1, resolution // (4 * workers))))
    else:
        rows = [_sweep_row(job) for job in jobs]
    values.setflags(write=False)
    return RegimeGrid(entry1, entry2, values, tuple(rows))


# Parameter distributions for the Monte Carlo study.

@dataclass(frozen=True)
class PointMass:
    value: float

    def __post_init__(self):
        if not 0 <= self.value <= 1:
            raise GameError(f"point mass {self.value} outside [0, 1]")

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return np.full(n, self.value)


@dataclass(frozen=True)
class Uniform:
    lo: float = 0.0
    hi: float = 1.0

    def __post_init__(self):
        if not 0 <= self.lo <= self.hi <= 1:
            raise GameError(f"uniform support [{self.lo}, {self.hi}] must lie inside [0, 1]")

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.uniform(self.lo, self.hi, size=n)


@dataclass(frozen=True)
class TruncatedNormal:
    mean: float
    sd: float
    lo: float = 0.0
    hi: float = 1.0

    def __post_init__(self):
        if not self.sd > 0:
            raise GameError(f"sd must be positive, got {self.sd}")
        if not 0 <= self.lo < self.hi <= 1:
            raise GameError(f"truncation range [{self.lo}, {self.hi}] must lie inside [0, 1]")

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        a = (self.lo - self.mean) / self.sd
        b = (self.hi - self.mean) / self.sd
        return truncnorm.rvs(a, b, loc=self.mean, scale=self.sd, size=n, random_state=rng)


Distribution = PointMass | Uniform | TruncatedNormal


@dataclass(frozen=True)
class MonteCarloReport:
    samples: int
    fraction_valid: float
    fraction_invalid: float
    fraction_degenerate: float
    mean_params: dict[Entry, float]
    classification_at_mean: Status
    mean_value_over_valid: float
    # Mean goal probability over every non-degenerate sample, Invalid ones
    # included: the blended number that silently averages in non-solutions.
    blended_value: float
    straddles_boundary: bool


def monte_carlo_regime(game: PenaltyGame, varied: Mapping[Entry, Distribution],
                       samples: int, seed: int = 0) -> MonteCarloReport:
    """Sample the varied cells independently and tally the regime of each draw."""
    if samples < 1:
        raise GameError(f"samples must be >= 1, got {samples}")
    if not 1 <= len(varied) <= 2:
        raise GameError("vary one or two cells")
    rng = np.random.default_rng(seed)
    entries = sorted(varied)
    draws = {e: varied[e].sample(rng, samples) for e in entries}

    counts = {s: 0 for s in Status}
    valid_values, all_values = [], []
    for k in range(samples):
        sol = full_support_indifference(to_bimatrix(game.with_entries({e: draws[e][k] for e in entries})))
        counts[sol.status] += 1
        if sol.status is Status.VALID:
            valid_values.append(sol.col_value)
        if sol.status is not Status.DEGENERATE:
            all_values.append(sol.col_value)

    mean_params = {e: float(np.mean(draws[e])) for e in entries}
    frac_valid = counts[Status.VALID] / samples
    return MonteCarloReport(
        samples=samples,
        fraction_valid=frac_valid,
        fraction_invalid=counts[Status.INVALID] / samples,
        fraction_degenerate=counts[Status.DEGENERATE] / samples,
        mean_params=mean_params,
        classification_at_mean=classify(game.with_entries(mean_params)),
        mean_value_over_valid=float(np.mean(valid_values)) if valid_values else math.nan,
        blended_value=float(np.mean(all_values)) if all_values else math.nan,
        straddles_boundary=0.0 < frac_valid < 1.0,
    )


def grid_to_csv(grid: RegimeGrid) -> str:
    lines = ["v1,v2,class"]
    for k1, v1 in enumerate(grid.values):
        for k2, v2 in enumerate(grid.values):
            lines.append(f"{v1:.6g},{v2:.6g},{grid.cells[k1][k2].value}")
    return "\n".join(lines) + "\n"


PGM_LEVELS = {Status.VALID: 255, Status.DEGENERATE: 128, Status.INVALID: 0}


def grid_to_pgm(grid: RegimeGrid) -> str:
    """Plain (P2) PGM: columns run along v1, row 0 is the largest v2."""
    n = grid.resolution
    e1, e2 = grid.entry1, grid.entry2
    out = [
        "P2",
        f"# regime map: x = cell {e1[0]},{e1[1]} (v1 ascending left to right),"
        f" y = cell {e2[0]},{e2[1]} (row 0 = v2 maximum)",
        "# gray levels: Valid=255 Degenerate=128 Invalid=0",
        f"{n} {n}",
        "255",
    ]
    for k2 in range(n - 1, -1, -1):
        out.append(" ".join(str(PGM_LEVELS[grid.cells[k1][k2]]) for k1 in range(n)))
    return "\n".join(out) + "\n"


def read_pgm(text: str) -> np.ndarray:
    """Parse a plain PGM back into a (height, width) integer array."""
    tokens: list[str] = []
    for line in text.splitlines():
        tokens.extend(line.split("#", 1)[0].split())
    if not tokens or tokens[0] != "P2":
        raise GameError("not a plain (P2) PGM")
    width, height, _maxval = (int(t) for t in tokens[1:4])
    pixels = np.array([int(t) for t in tokens[4:]])
    if pixels.size != width * height:
        raise GameError(f"PGM has {pixels.size} pixels, header says {width}x{height}")
    return pixels.reshape(height, width)


def lattice_index(values: Sequence[float], v: float) -> int:
    return int(np.argmin(np.abs(np.asarray(values) - v)))
