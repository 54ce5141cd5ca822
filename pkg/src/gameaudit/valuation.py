"""Score-based decision audits and cost-benefit arithmetic.

Ranking options by the plain sum of their criterion values is compared with
ranking them by a sum of monotone per-criterion scores.  Any option that is not
Pareto-dominated can be pushed to the top by a suitable choice of scores; the
helpers here construct and verify such a choice.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np


class ValuationError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class DecisionInstance:
    option_labels: tuple[str, ...]
    criteria_labels: tuple[str, ...]
    values: np.ndarray  # values[o, c]

    def __init__(self, option_labels: Sequence[str], criteria_labels: Sequence[str], values):
        v = np.array(values, dtype=float)
        option_labels = tuple(str(o) for o in option_labels)
        criteria_labels = tuple(str(c) for c in criteria_labels)
        if v.shape != (len(option_labels), len(criteria_labels)):
            raise ValuationError(f"values shape {v.shape} does not match "
                                 f"{len(option_labels)} options x {len(criteria_labels)} criteria")
        if len(criteria_labels) < 1 or len(option_labels) < 1:
            raise ValuationError("need at least one option and one criterion")
        if len(set(option_labels)) != len(option_labels):
            raise ValuationError("option labels must be unique")
        if not np.all(np.isfinite(v)):
            raise ValuationError("values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "option_labels", option_labels)
        object.__setattr__(self, "criteria_labels", criteria_labels)
        object.__setattr__(self, "values", v)

    def index(self, option: str) -> int:
        try:
            return self.option_labels.index(option)
        except ValueError:
            raise ValuationError(f"unknown option {option!r}") from None


@dataclass(frozen=True)
class PiecewiseLinear:
    """Nondecreasing piecewise-linear map; end segments extend linearly."""

    xs: tuple[float, ...]
    ys: tuple[float, ...]

    def __post_init__(self):
        if len(self.xs) != len(self.ys) or len(self.xs) < 2:
            raise ValuationError("need at least two breakpoints")
        if any(b <= a for a, b in zip(self.xs, self.xs[1:])):
            raise ValuationError(f"breakpoint x values must be strictly increasing: {self.xs}")
        if any(b < a for a, b in zip(self.ys, self.ys[1:])):
            raise ValuationError(f"breakpoint y values must be nondecreasing: {self.ys}")

    @property
    def strictly_increasing(self) -> bool:
        return all(b > a for a, b in zip(self.ys, self.ys[1:]))

    def __call__(self, x: float) -> float:
        xs, ys = self.xs, self.ys
        k = bisect.bisect_right(xs, x) - 1
        k = min(max(k, 0), len(xs) - 2)
        slope = (ys[k + 1] - ys[k]) / (xs[k + 1] - xs[k])
        return ys[k] + slope * (x - xs[k])


IDENTITY = PiecewiseLinear((0.0, 1.0), (0.0, 1.0))


@dataclass(frozen=True)
class MonotoneTransform:
    functions: tuple[PiecewiseLinear, ...]

    @classmethod
    def identity(cls, n_criteria: int) -> "MonotoneTransform":
        return cls((IDENTITY,) * n_criteria)

    @classmethod
    def linear(cls, weights: Sequence[float]) -> "MonotoneTransform":
        return cls(tuple(PiecewiseLinear((0.0, 1.0), (0.0, float(w))) for w in weights))

    @property
    def strictly_increasing(self) -> bool:
        return all(f.strictly_increasing for f in self.functions)


@dataclass(frozen=True)
class NoFlipPossible:
    target: str
    witness: str
    reason: str  # "dominated" or "identical"


def _ranked(labels, totals) -> list[tuple[str, float]]:
    # Stable sort keeps input order among ties.
    order = sorted(range(len(labels)), key=lambda o: -totals[o])
    return [(labels[o], float(totals[o])) for o in order]


def rank_by_sum(instance: DecisionInstance) -> list[tuple[str, float]]:
    totals = [sum(float(v) for v in row) for row in instance.values]
    return _ranked(instance.option_labels, totals)


def scores(instance: DecisionInstance, transform: MonotoneTransform) -> list[float]:
    if len(transform.functions) != len(instance.criteria_labels):
        raise ValuationError(f"transform has {len(transform.functions)} functions for "
                             f"{len(instance.criteria_labels)} criteria")
    return [sum(f(float(v)) for f, v in zip(transform.functions, row)) for row in instance.values]


def rank_by_scores(instance: DecisionInstance, transform: MonotoneTransform) -> list[tuple[str, float]]:
    return _ranked(instance.option_labels, scores(instance, transform))


def strictly_wins(instance: DecisionInstance, transform: MonotoneTransform, target: str) -> bool:
    s = scores(instance, transform)
    t = instance.index(target)
    return all(s[t] > s[o] for o in range(len(s)) if o != t)


def dominator(instance: DecisionInstance, target: str) -> NoFlipPossible | None:
    """First option weakly Pareto-dominating ``target``; failing that, the first exact duplicate."""
    t = instance.index(target)
    v = instance.values
    others = [o for o in range(len(v)) if o != t and np.all(v[o] >= v[t])]
    for o in others:
        if np.any(v[o] > v[t]):
            return NoFlipPossible(target, instance.option_labels[o], "dominated")
    if others:
        return NoFlipPossible(target, instance.option_labels[others[0]], "identical")
    return None


def find_flipping_transform(instance: DecisionInstance, target: str) -> MonotoneTransform | NoFlipPossible:
    """A monotone rescoring under which ``target`` strictly beats every other option.

    Each criterion gets a smoothed step at the target's own value: options
    trailing the target there score 0, options level with or ahead of it score
    1.  The target then scores one point per criterion while any undominated
    rival misses at least one point.  Options with identical values can never be
    separated, so they are reported like dominators.
    """
    blocked = dominator(instance, target)
    if blocked is not None:
        return blocked
    t = instance.index(target)
    identity = MonotoneTransform.identity(len(instance.criteria_labels))
    if strictly_wins(instance, identity, target):
        return identity

    v = instance.values
    functions = []
    for c in range(v.shape[1]):
        level = float(v[t, c])
        gaps = [level - float(x) for x in v[:, c] if x < level]
        ramp = 0.5 * min(gaps) if gaps else 1.0
        functions.append(PiecewiseLinear(
            (level - ramp - 1.0, level - ramp, level, level + 1.0),
            (0.0, 0.0, 1.0, 1.0)))
    transform = MonotoneTransform(tuple(functions))
    if not strictly_wins(instance, transform, target):
        raise AssertionError(f"constructed transform failed to make {target!r} win")
    return transform


@dataclass(frozen=True)
class LinearInvariance:
    preserves_argmax: bool
    witness: tuple[str, str] | None  # (weighted winner, plain-sum winner) when they differ


def check_linear_invariance(instance: DecisionInstance, weights: Sequence[float]) -> LinearInvariance:
    if len(weights) != len(instance.criteria_labels):
        raise ValuationError(f"{len(weights)} weights for {len(instance.criteria_labels)} criteria")
    if any(not w > 0 for w in weights):
        raise ValuationError(f"weights must be positive, got {list(weights)}")
    plain = rank_by_sum(instance)[0][0]
    weighted = rank_by_scores(instance, MonotoneTransform.linear(weights))[0][0]
    if plain == weighted:
        return LinearInvariance(True, None)
    return LinearInvariance(False, (weighted, plain))


# Cost-benefit arithmetic.

@dataclass(frozen=True)
class LineItem:
    label: str
    unit_value: float
    quantity: float

    def __post_init__(self):
        if self.quantity < 0:
            raise ValuationError(f"{self.label}: quantity must be >= 0")
        if not (np.isfinite(self.unit_value) and np.isfinite(self.quantity)):
            raise ValuationError(f"{self.label}: amounts must be finite")

    @property
    def amount(self) -> float:
        return self.unit_value * self.quantity


@dataclass(frozen=True)
class CostBenefitModel:
    cost_side: tuple[LineItem, ...] = ()
    benefit_side: tuple[LineItem, ...] = ()

    def replace_unit_value(self, label: str, unit_value: float) -> "CostBenefitModel":
        def swap(items):
            return tuple(LineItem(i.label, unit_value, i.quantity) if i.label == label else i
                         for i in items)
        return CostBenefitModel(swap(self.cost_side), swap(self.benefit_side))

    def find(self, label: str) -> tuple[str, LineItem]:
        for side, items in (("cost", self.cost_side), ("benefit", self.benefit_side)):
            for item in items:
                if item.label == label:
                    return side, item
        raise ValuationError(f"no line item labelled {label!r}")


@dataclass(frozen=True)
class CostBenefitResult:
    total_cost: float
    total_benefit: float
    decision: str  # "Proceed" or "Reject"
    line_items: list[tuple[str, str, float]] = field(default_factory=list)


def cost_benefit(model: CostBenefitModel) -> CostBenefitResult:
    total_cost = sum(i.amount for i in model.cost_side)
    total_benefit = sum(i.amount for i in model.benefit_side)
    items = ([("cost", i.label, i.amount) for i in model.cost_side]
             + [("benefit", i.label, i.amount) for i in model.benefit_side])
    decision = "Proceed" if total_benefit >= total_cost else "Reject"
    return CostBenefitResult(total_cost, total_benefit, decision, items)


def break_even(model: CostBenefitModel, label: str) -> float:
    """Unit value of ``label`` at which total benefit equals total cost."""
    side, item = model.find(label)
    if item.quantity == 0:
        raise ValuationError(f"{label!r} has zero quantity; its unit value cannot move the balance")
    result = cost_benefit(model)
    if side == "benefit":
        rest = result.total_benefit - item.amount
        return (result.total_cost - rest) / item.quantity
    rest = result.total_cost - item.amount
    return (result.total_benefit - rest) / item.quantity


# Ford Pinto fuel-tank decision, in dollars.
PINTO_SOCIETAL_LOSS_ITEMS = (
    ("future productivity losses, direct", 132_000),
    ("future productivity losses, indirect", 41_300),
    ("medical costs, hospital", 700),
    ("insurance administration", 4_700),
    ("legal and court", 3_000),
    ("employer losses", 1_000),
    ("property damage", 1_500),
    ("victim's pain and suffering", 10_000),
    ("funeral", 900),
    ("assets (lost consumption)", 5_000),
    ("miscellaneous accident cost", 200),
    ("other", 425),
)


def pinto_societal_loss() -> int:
    return sum(v for _, v in PINTO_SOCIETAL_LOSS_ITEMS)


def pinto_model() -> CostBenefitModel:
    from .formats import read_cost_benefit_csv, bundled_text
    return read_cost_benefit_csv(bundled_text("pinto.csv"), "pinto.csv")


def pinto_decision_instance() -> DecisionInstance:
    """Both choices scored by their single net monetary outcome."""
    result = cost_benefit(pinto_model())
    return DecisionInstance(["upgrade", "keep"], ["net"],
                            [[-result.total_cost], [-result.total_benefit]])
