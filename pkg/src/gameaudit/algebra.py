"""Exhaustive axiom checks for small finite "value scales".

A :class:`FiniteStructure` is a carrier of labels with an addition table, an
optional multiplication table and an optional total order.  Every check scans
the carrier in its listed order and reports the first counterexample, so a
report is deterministic and each witness can be replayed against the tables
with :func:`replay`.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence


class AlgebraError(ValueError):
    pass


class Op(enum.Enum):
    ADD = "add"
    MUL = "mul"


Table = Mapping[tuple[str, str], str]


@dataclass(frozen=True, eq=False)
class FiniteStructure:
    carrier: tuple[str, ...]
    add: dict[tuple[str, str], str] = field(default_factory=dict)
    mul: dict[tuple[str, str], str] | None = None
    order: tuple[str, ...] | None = None
    zero: str | None = None
    one: str | None = None

    def __post_init__(self):
        carrier = tuple(self.carrier)
        object.__setattr__(self, "carrier", carrier)
        labels = set(carrier)
        if len(labels) != len(carrier):
            raise AlgebraError("carrier labels must be unique")
        for name in ("add", "mul"):
            table = getattr(self, name)
            if table is None:
                continue
            for (a, b), c in table.items():
                if not {a, b, c} <= labels:
                    raise AlgebraError(f"{name} table entry {a},{b} -> {c} uses labels outside the carrier")
        if self.order is not None:
            order = tuple(self.order)
            object.__setattr__(self, "order", order)
            if sorted(order) != sorted(carrier):
                raise AlgebraError("order must list every carrier label exactly once")
        for name in ("zero", "one"):
            v = getattr(self, name)
            if v is not None and v not in labels:
                raise AlgebraError(f"{name} {v!r} is not in the carrier")

    def table(self, op: Op) -> dict | None:
        return self.add if op is Op.ADD else self.mul

    def rank(self) -> dict[str, int] | None:
        return None if self.order is None else {a: k for k, a in enumerate(self.order)}

    @classmethod
    def integers_mod(cls, n: int, order: bool = False) -> "FiniteStructure":
        carrier = tuple(str(k) for k in range(n))
        add = {(str(a), str(b)): str((a + b) % n) for a in range(n) for b in range(n)}
        mul = {(str(a), str(b)): str((a * b) % n) for a in range(n) for b in range(n)}
        return cls(carrier, add, mul, carrier if order else None,
                   zero="0", one="1" if n > 1 else None)


@dataclass(frozen=True)
class Verdict:
    kind: str  # "Holds", "Fails", "NotApplicable"
    witness: tuple = ()
    missing: str = ""

    @property
    def holds(self) -> bool:
        return self.kind == "Holds"

    def __str__(self):
        if self.kind == "Fails":
            return f"Fails{self.witness}"
        if self.kind == "NotApplicable":
            return f"NotApplicable({self.missing})"
        return "Holds"


HOLDS = Verdict("Holds")


def fails(*witness) -> Verdict:
    return Verdict("Fails", tuple(witness))


def not_applicable(missing: str) -> Verdict:
    return Verdict("NotApplicable", missing=missing)


@dataclass
class AxiomReport:
    results: dict[str, Verdict] = field(default_factory=dict)
    # Identity element found per table prefix, needed to replay inverse witnesses.
    identities: dict[str, str] = field(default_factory=dict)

    def __getitem__(self, key: str) -> Verdict:
        return self.results[key]

    @property
    def holds(self) -> bool:
        return all(v.holds for v in self.results.values())

    def failures(self) -> dict[str, Verdict]:
        return {k: v for k, v in self.results.items() if v.kind == "Fails"}

    def lines(self) -> list[str]:
        return [f"{k}: {v}" for k, v in self.results.items()]


# Generic checks over a table restricted to a domain of labels.

def _closure(table: Table, domain: Sequence[str]) -> Verdict:
    allowed = set(domain)
    for a, b in itertools.product(domain, repeat=2):
        if table.get((a, b)) not in allowed:
            return fails(a, b)
    return HOLDS


def _associativity(table: Table, domain: Sequence[str]) -> Verdict:
    # Triples touching an undefined cell are skipped; closure reports those.
    get = table.get
    for a, b in itertools.product(domain, repeat=2):
        ab = get((a, b))
        if ab is None:
            continue
        for c in domain:
            left = get((ab, c))
            bc = get((b, c))
            if left is None or bc is None:
                continue
            right = get((a, bc))
            if right is not None and left != right:
                return fails(a, b, c)
    return HOLDS


def _commutativity(table: Table, domain: Sequence[str]) -> Verdict:
    for a, b in itertools.product(domain, repeat=2):
        if table.get((a, b)) != table.get((b, a)):
            return fails(a, b)
    return HOLDS


def _identity(table: Table, domain: Sequence[str], claimed: str | None) -> tuple[Verdict, str | None]:
    candidates = [claimed] if claimed is not None else list(domain)
    counter = []
    for e in candidates:
        bad = next((a for a in domain if table.get((e, a)) != a or table.get((a, e)) != a), None)
        if bad is None:
            return HOLDS, e
        counter.append((e, bad))
    # One (candidate, element) pair per candidate shows it is not an identity.
    return fails(*counter), None


def _inverse(table: Table, domain: Sequence[str], e: str | None) -> Verdict:
    if e is None:
        return not_applicable("identity")
    for a in domain:
        if not any(table.get((a, b)) == e and table.get((b, a)) == e for b in domain):
            return fails(a)
    return HOLDS


def _group_axioms(report: AxiomReport, prefix: str, table: Table, domain: Sequence[str],
                  claimed_identity: str | None, abelian: bool) -> None:
    r = report.results
    r[f"{prefix}.closure"] = _closure(table, domain)
    r[f"{prefix}.associativity"] = _associativity(table, domain)
    r[f"{prefix}.identity"], e = _identity(table, domain, claimed_identity)
    if e is not None:
        report.identities[prefix] = e
    r[f"{prefix}.inverse"] = _inverse(table, domain, e)
    if abelian:
        r[f"{prefix}.commutativity"] = _commutativity(table, domain)


_GROUP_AXIOMS = ("closure", "associativity", "identity", "inverse")
_FIELD_MUL_AXIOMS = _GROUP_AXIOMS + ("commutativity",)


def check_group(s: FiniteStructure, op: Op = Op.ADD) -> AxiomReport:
    """Closure, associativity, identity and inverses of one table over the whole carrier."""
    report = AxiomReport()
    table = s.table(op)
    prefix = op.value
    if table is None:
        for axiom in _GROUP_AXIOMS:
            report.results[f"{prefix}.{axiom}"] = not_applicable(f"{prefix} table")
        return report
    claimed = s.zero if op is Op.ADD else s.one
    _group_axioms(report, prefix, table, s.carrier, claimed, abelian=False)
    return report


def check_field(s: FiniteStructure) -> AxiomReport:
    """Additive abelian group, multiplicative abelian group off zero, distributivity."""
    report = AxiomReport()
    _group_axioms(report, "add", s.add, s.carrier, s.zero, abelian=True)
    r = report.results
    zero = report.identities.get("add")
    if s.mul is None or zero is None:
        missing = "mul table" if s.mul is None else "additive identity"
        for axiom in _FIELD_MUL_AXIOMS:
            r[f"mul_nonzero.{axiom}"] = not_applicable(missing)
        r["distributivity"] = not_applicable(missing)
        r["nontrivial"] = not_applicable(missing)
        return report
    nonzero = [a for a in s.carrier if a != zero]
    r["nontrivial"] = HOLDS if nonzero else fails(zero)
    _group_axioms(report, "mul_nonzero", s.mul, nonzero, s.one, abelian=True)
    r["distributivity"] = _distributivity(s.add, s.mul, s.carrier)
    return report


def _distributivity(add: Table, mul: Table, domain: Sequence[str]) -> Verdict:
    for a, b, c in itertools.product(domain, repeat=3):
        bc = add.get((b, c))
        ab, ac = mul.get((a, b)), mul.get((a, c))
        left = None if bc is None else mul.get((a, bc))
        right = None if ab is None or ac is None else add.get((ab, ac))
        if left is None or right is None or left != right:
            return fails(a, b, c)
    return HOLDS


def check_order_compat(s: FiniteStructure) -> AxiomReport:
    """Order sanity, translation invariance, and positivity of products."""
    report = AxiomReport()
    r = report.results
    if s.order is None or not s.add:
        missing = "order" if s.order is None else "add table"
        for key in ("order.total", "order.antisymmetric", "order.transitive",
                    "order.translation", "order.positivity"):
            r[key] = not_applicable(missing)
        return report
    rank = s.rank()
    # A permutation of the carrier is total, antisymmetric and transitive by construction.
    r["order.total"] = HOLDS
    r["order.antisymmetric"] = HOLDS
    r["order.transitive"] = HOLDS
    r["order.translation"] = _translation(s.add, s.carrier, rank)
    if s.mul is None or s.zero is None:
        r["order.positivity"] = not_applicable("mul table" if s.mul is None else "zero")
    else:
        r["order.positivity"] = _positivity(s.mul, s.carrier, rank, s.zero)
    return report


def _translation(add: Table, domain, rank) -> Verdict:
    for a, b in itertools.product(domain, repeat=2):
        if rank[a] >= rank[b]:
            continue
        for c in domain:
            ac, bc = add.get((a, c)), add.get((b, c))
            if ac is None or bc is None:
                continue
            if not rank[ac] < rank[bc]:
                return fails(a, b, c)
    return HOLDS


def _positivity(mul: Table, domain, rank, zero: str) -> Verdict:
    positive = [a for a in domain if rank[a] > rank[zero]]
    for a, b in itertools.product(positive, repeat=2):
        ab = mul.get((a, b))
        if ab is None or not rank[ab] > rank[zero]:
            return fails(a, b)
    return HOLDS


def check_homomorphism(s: FiniteStructure, image: Mapping[str, Fraction | int]) -> AxiomReport:
    """Does ``image`` turn the addition table into ordinary rational addition?"""
    missing = [a for a in s.carrier if a not in image]
    if missing:
        raise AlgebraError(f"image is undefined on {missing}")
    phi = {a: Fraction(image[a]) for a in s.carrier}
    report = AxiomReport()
    r = report.results
    r["hom.additive"] = HOLDS
    for a, b in itertools.product(s.carrier, repeat=2):
        c = s.add.get((a, b))
        if c is not None and phi[c] != phi[a] + phi[b]:
            r["hom.additive"] = fails(a, b)
            break
    if s.order is None:
        r["hom.order"] = not_applicable("order")
    else:
        r["hom.order"] = HOLDS
        rank = s.rank()
        for a, b in itertools.product(s.carrier, repeat=2):
            if rank[a] < rank[b] and not phi[a] < phi[b]:
                r["hom.order"] = fails(a, b)
                break
    return report


def replay(s: FiniteStructure, report: AxiomReport, key: str,
           image: Mapping[str, Fraction | int] | None = None) -> bool:
    """Re-evaluate a Fails witness directly against the tables; True if it is a genuine violation."""
    v = report[key]
    if v.kind != "Fails":
        raise AlgebraError(f"{key} did not fail")
    w = v.witness
    prefix, _, axiom = key.partition(".")
    if prefix in ("add", "mul", "mul_nonzero"):
        table = s.add if prefix == "add" else s.mul
        zero = report.identities.get("add")
        domain = [a for a in s.carrier if a != zero] if prefix == "mul_nonzero" else list(s.carrier)
        if axiom == "closure":
            return table.get((w[0], w[1])) not in domain
        if axiom == "associativity":
            a, b, c = w
            return table[(table[(a, b)], c)] != table[(a, table[(b, c)])]
        if axiom == "commutativity":
            return table.get((w[0], w[1])) != table.get((w[1], w[0]))
        if axiom == "identity":
            tried = {e for e, _ in w}
            expected = {s.zero if prefix == "add" else s.one} - {None} or set(domain)
            return tried == expected and all(
                table.get((e, a)) != a or table.get((a, e)) != a for e, a in w)
        if axiom == "inverse":
            e = report.identities[prefix]
            return not any(table.get((w[0], b)) == e and table.get((b, w[0])) == e for b in domain)
    if key == "distributivity":
        a, b, c = w
        bc = s.add.get((b, c))
        left = None if bc is None else s.mul.get((a, bc))
        ab, ac = s.mul.get((a, b)), s.mul.get((a, c))
        right = None if ab is None or ac is None else s.add.get((ab, ac))
        return left is None or right is None or left != right
    if key == "nontrivial":
        return len(s.carrier) == 1
    if key == "order.translation":
        rank = s.rank()
        a, b, c = w
        return rank[a] < rank[b] and not rank[s.add[(a, c)]] < rank[s.add[(b, c)]]
    if key == "order.positivity":
        rank = s.rank()
        a, b = w
        ab = s.mul.get((a, b))
        return rank[a] > rank[s.zero] and rank[b] > rank[s.zero] and (
            ab is None or rank[ab] <= rank[s.zero])
    if key in ("hom.additive", "hom.order"):
        if image is None:
            raise AlgebraError("replaying a homomorphism witness needs the image")
        phi = {a: Fraction(x) for a, x in image.items()}
        a, b = w
        if key == "hom.additive":
            return phi[s.add[(a, b)]] != phi[a] + phi[b]
        rank = s.rank()
        return rank[a] < rank[b] and not phi[a] < phi[b]
    raise AlgebraError(f"no replay rule for {key}")


def replay_all(s: FiniteStructure, report: AxiomReport, image=None) -> dict[str, bool]:
    return {k: replay(s, report, k, image) for k in report.failures()}


def envy_hate_structure() -> FiniteStructure:
    """Four ad-hoc value names where only envy + hate is given a meaning."""
    carrier = ("envy", "hate", "envyhate", "eave")
    add = {("envy", "hate"): "envyhate", ("hate", "envy"): "envyhate"}
    return FiniteStructure(carrier, add)
