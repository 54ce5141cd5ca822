"""Readers and writers for the plain-text files the command line consumes."""

from __future__ import annotations

import csv
import io
from fractions import Fraction
from importlib import resources

import numpy as np

from .algebra import FiniteStructure
from .behavioral import UltimatumInstance
from .games import BimatrixGame
from .regime import PenaltyGame, PointMass, TruncatedNormal, Uniform, parse_entry
from .valuation import CostBenefitModel, DecisionInstance, LineItem


class FormatError(ValueError):
    def __init__(self, source: str, line: int | None, message: str):
        where = source if line is None else f"{source}:{line}"
        super().__init__(f"{where}: {message}")
        self.source = source
        self.line = line


def bundled_text(name: str) -> str:
    return resources.files("gameaudit.data").joinpath(name).read_text()


def bundled_path(name: str):
    return resources.files("gameaudit.data").joinpath(name)


def _content_lines(text: str):
    """(line number, stripped text) for non-blank, non-comment lines."""
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield n, line


def _float(token: str, source: str, n: int, what: str) -> float:
    try:
        v = float(token)
    except ValueError:
        raise FormatError(source, n, f"expected a decimal {what}, got {token!r}") from None
    if not np.isfinite(v):
        raise FormatError(source, n, f"{what} must be finite, got {token!r}")
    return v


# Games: "<rows> <cols>" then rows of "<row_payoff>,<col_payoff>" cells.
# Optional "# rows: a b" / "# cols: x y" comments carry strategy labels.

def read_game(text: str, source: str = "<game>") -> BimatrixGame:
    labels = {"rows": None, "cols": None}
    for raw in text.splitlines():
        line = raw.strip()
        for key in labels:
            prefix = f"# {key}:"
            if line.startswith(prefix):
                labels[key] = [t.strip() for t in line[len(prefix):].split("|")]
    lines = list(_content_lines(text))
    if not lines:
        raise FormatError(source, None, "empty game file; expected '<rows> <cols>' header")
    n0, header = lines[0]
    parts = header.split()
    if len(parts) != 2 or not all(p.isdigit() for p in parts):
        raise FormatError(source, n0, f"expected '<rows> <cols>' header, got {header!r}")
    rows, cols = int(parts[0]), int(parts[1])
    if rows < 1 or cols < 1:
        raise FormatError(source, n0, "a game needs at least one row and one column")
    body = lines[1:]
    if len(body) != rows:
        raise FormatError(source, body[-1][0] if body else n0, f"expected {rows} payoff rows, found {len(body)}")
    row_pay = np.zeros((rows, cols))
    col_pay = np.zeros((rows, cols))
    for i, (n, line) in enumerate(body):
        cells = line.split()
        if len(cells) != cols:
            raise FormatError(source, n, f"expected {cols} cells, found {len(cells)}")
        for j, cell in enumerate(cells):
            pair = cell.split(",")
            if len(pair) != 2:
                raise FormatError(source, n, f"cell {cell!r} is not '<row_payoff>,<col_payoff>'")
            row_pay[i, j] = _float(pair[0], source, n, "row payoff")
            col_pay[i, j] = _float(pair[1], source, n, "column payoff")
    row_labels = labels["rows"] if labels["rows"] and len(labels["rows"]) == rows else [f"r{i}" for i in range(rows)]
    col_labels = labels["cols"] if labels["cols"] and len(labels["cols"]) == cols else [f"c{j}" for j in range(cols)]
    return BimatrixGame(row_labels, col_labels, row_pay, col_pay)


def write_game(game: BimatrixGame) -> str:
    n, m = game.shape
    out = [f"# rows: {' | '.join(game.row_labels)}", f"# cols: {' | '.join(game.col_labels)}", f"{n} {m}"]
    for i in range(n):
        out.append(" ".join(f"{float(game.row_payoff[i, j])!r},{float(game.col_payoff[i, j])!r}" for j in range(m)))
    return "\n".join(out) + "\n"


def read_penalty_game(text: str, source: str = "<penalty>") -> PenaltyGame:
    lines = list(_content_lines(text))
    if len(lines) != 3:
        raise FormatError(source, lines[-1][0] if lines else None,
                          f"expected 3 rows of goal probabilities, found {len(lines)}")
    table = []
    for n, line in lines:
        tokens = line.split()
        if len(tokens) != 3:
            raise FormatError(source, n, f"expected 3 entries, found {len(tokens)}")
        row = [_float(t, source, n, "goal probability") for t in tokens]
        if any(not 0 <= v <= 1 for v in row):
            raise FormatError(source, n, "goal probabilities must lie in [0, 1]")
        table.append(row)
    return PenaltyGame(np.array(table))


def read_distribution(text: str, source: str = "<dist>"):
    """Lines ``<cell> point <v>``, ``<cell> uniform <lo> <hi>`` or
    ``<cell> truncnormal <mean> <sd> [<lo> <hi>]``; ``<cell>`` is ``i,j`` or e.g. ``sl``."""
    out = {}
    for n, line in _content_lines(text):
        tokens = line.split()
        if len(tokens) < 2:
            raise FormatError(source, n, "expected '<cell> <kind> <parameters...>'")
        try:
            entry = parse_entry(tokens[0])
        except ValueError as exc:
            raise FormatError(source, n, str(exc)) from None
        kind = tokens[1].lower()
        args = [_float(t, source, n, "parameter") for t in tokens[2:]]
        try:
            if kind == "point" and len(args) == 1:
                dist = PointMass(*args)
            elif kind == "uniform" and len(args) in (0, 2):
                dist = Uniform(*args)
            elif kind == "truncnormal" and len(args) in (2, 4):
                dist = TruncatedNormal(*args)
            else:
                raise FormatError(source, n, f"bad distribution {kind!r} with {len(args)} parameters; "
                                  "expected point v | uniform lo hi | truncnormal mean sd [lo hi]")
        except FormatError:
            raise
        except ValueError as exc:
            raise FormatError(source, n, str(exc)) from None
        if entry in out:
            raise FormatError(source, n, f"cell {entry} given twice")
        out[entry] = dist
    if not 1 <= len(out) <= 2:
        raise FormatError(source, None, f"expected distributions for 1 or 2 cells, found {len(out)}")
    return out


def _csv_rows(text: str):
    reader = csv.reader(io.StringIO(text))
    for n, row in enumerate(reader, 1):
        row = [c.strip() for c in row]
        if row and any(row) and not row[0].startswith("#"):
            yield n, row


def read_decision_csv(text: str, source: str = "<instance>") -> DecisionInstance:
    rows = list(_csv_rows(text))
    if not rows:
        raise FormatError(source, None, "empty file; expected header 'option,<criterion>,...'")
    n0, header = rows[0]
    if header[0].lower() != "option" or len(header) < 2:
        raise FormatError(source, n0, "header must be 'option,<criterion1>,<criterion2>,...'")
    labels, values = [], []
    for n, row in rows[1:]:
        if len(row) != len(header):
            raise FormatError(source, n, f"expected {len(header)} fields, found {len(row)}")
        labels.append(row[0])
        values.append([_float(t, source, n, "criterion value") for t in row[1:]])
    if len(labels) < 2:
        raise FormatError(source, None, "a decision needs at least two options")
    return DecisionInstance(labels, header[1:], values)


def read_cost_benefit_csv(text: str, source: str = "<model>") -> CostBenefitModel:
    cost, benefit = [], []
    for n, row in _csv_rows(text):
        if [c.lower() for c in row] == ["side", "label", "unit_value", "quantity"]:
            continue
        if len(row) != 4:
            raise FormatError(source, n, "expected 'side,label,unit_value,quantity'")
        side = row[0].lower()
        if side not in ("cost", "benefit"):
            raise FormatError(source, n, f"side must be 'cost' or 'benefit', got {row[0]!r}")
        quantity = _float(row[3], source, n, "quantity")
        if quantity < 0:
            raise FormatError(source, n, "quantity must be >= 0")
        item = LineItem(row[1], _float(row[2], source, n, "unit value"), quantity)
        (cost if side == "cost" else benefit).append(item)
    return CostBenefitModel(tuple(cost), tuple(benefit))


def read_thresholds_csv(text: str, source: str = "<thresholds>") -> dict[int, float]:
    """``threshold,probability`` lines; the header is optional."""
    dist: dict[int, float] = {}
    for n, row in _csv_rows(text):
        if len(row) != 2:
            raise FormatError(source, n, "expected 'threshold,probability'")
        try:
            t = int(row[0])
        except ValueError:
            if not dist and not row[0].lstrip("-").replace(".", "").isdigit():
                continue  # header
            raise FormatError(source, n, f"threshold must be an integer, got {row[0]!r}") from None
        p = _float(row[1], source, n, "probability")
        if p < 0:
            raise FormatError(source, n, "probability must be >= 0")
        dist[t] = dist.get(t, 0.0) + p
    total = sum(dist.values())
    if abs(total - 1.0) > 1e-6:
        raise FormatError(source, None, f"probabilities sum to {total:.6g}, expected 1")
    return {t: p / total for t, p in dist.items()}


def read_ultimatum(total: int, thresholds_text: str, source: str = "<thresholds>", step: int = 1) -> UltimatumInstance:
    return UltimatumInstance(total, step, read_thresholds_csv(thresholds_text, source))


_SECTIONS = ("carrier", "add", "mul", "order", "zero", "one")


def read_structure(text: str, source: str = "<structure>") -> FiniteStructure:
    sections: dict[str, list[tuple[int, str]]] = {}
    current = None
    for n, line in _content_lines(text):
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip().lower()
            if current not in _SECTIONS:
                raise FormatError(source, n, f"unknown section [{current}]; expected one of {_SECTIONS}")
            if current in sections:
                raise FormatError(source, n, f"section [{current}] repeated")
            sections[current] = []
        elif current is None:
            raise FormatError(source, n, "content before the first [section]")
        else:
            sections[current].append((n, line))
    if "carrier" not in sections:
        raise FormatError(source, None, "missing [carrier] section")
    carrier = [line for _, line in sections["carrier"]]
    labels = set(carrier)

    def table(name):
        if name not in sections:
            return None
        out = {}
        for n, line in sections[name]:
            parts = [p.strip() for p in line.split(",")]
            if len(parts) != 3:
                raise FormatError(source, n, f"[{name}] lines must be 'a,b,c'")
            unknown = [p for p in parts if p not in labels]
            if unknown:
                raise FormatError(source, n, f"labels {unknown} are not in [carrier]")
            if (parts[0], parts[1]) in out:
                raise FormatError(source, n, f"[{name}] defines {parts[0]},{parts[1]} twice")
            out[(parts[0], parts[1])] = parts[2]
        return out

    def single(name):
        if name not in sections:
            return None
        entries = sections[name]
        if len(entries) != 1 or entries[0][1] not in labels:
            raise FormatError(source, entries[0][0] if entries else None,
                              f"[{name}] must hold exactly one carrier label")
        return entries[0][1]

    order = [line for _, line in sections["order"]] if "order" in sections else None
    try:
        return FiniteStructure(tuple(carrier), table("add") or {}, table("mul"),
                               tuple(order) if order is not None else None,
                               single("zero"), single("one"))
    except ValueError as exc:
        raise FormatError(source, None, str(exc)) from None


def write_structure(s: FiniteStructure) -> str:
    out = ["[carrier]", *s.carrier, "[add]"]
    out += [f"{a},{b},{c}" for (a, b), c in s.add.items()]
    if s.mul is not None:
        out += ["[mul]", *(f"{a},{b},{c}" for (a, b), c in s.mul.items())]
    if s.order is not None:
        out += ["[order]", *s.order]
    if s.zero is not None:
        out += ["[zero]", s.zero]
    if s.one is not None:
        out += ["[one]", s.one]
    return "\n".join(out) + "\n"


def read_image_map(text: str, source: str = "<map>") -> dict[str, Fraction]:
    """``label,value`` lines with ``value`` an integer, decimal or ``p/q`` fraction."""
    out = {}
    for n, row in _csv_rows(text):
        if len(row) != 2:
            raise FormatError(source, n, "expected 'label,value'")
        try:
            out[row[0]] = Fraction(row[1])
        except (ValueError, ZeroDivisionError):
            raise FormatError(source, n, f"value {row[1]!r} is not a rational number") from None
    return out
