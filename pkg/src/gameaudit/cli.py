"""Command-line front end.

Exit codes: 0 success, 1 domain or computation error (including malformed
input files), 2 usage error.  File arguments may name a bundled example as
``bundled:<name>`` (for instance ``bundled:fig1.game``).
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import algebra, behavioral, games, regime, valuation
from .formats import (
    FormatError,
    bundled_path,
    read_decision_csv,
    read_distribution,
    read_game,
    read_image_map,
    read_penalty_game,
    read_structure,
    read_thresholds_csv,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


class _Out:
    def __init__(self, stream, digits: int):
        self.stream = stream
        self.digits = digits

    def num(self, x: float) -> str:
        if isinstance(x, float) and math.isnan(x):
            return "nan"
        return f"{x:.{self.digits}g}"

    def vec(self, v) -> str:
        return "(" + ", ".join(self.num(float(x)) for x in v) + ")"

    def __call__(self, *parts):
        print(*parts, file=self.stream)


def money(x: float) -> str:
    sign = "-" if x < 0 else ""
    return f"{sign}${abs(x):,.2f}"


def _read(path: str) -> tuple[str, str]:
    if path.startswith("bundled:"):
        name = path[len("bundled:"):]
        res = bundled_path(name)
        if not res.is_file():
            raise FormatError(path, None, "no such bundled file")
        return res.read_text(), path
    p = Path(path)
    try:
        return p.read_text(), str(p)
    except OSError as exc:
        raise FormatError(path, None, f"cannot read file: {exc.strerror}") from None


def _looks_like_penalty(text: str) -> bool:
    lines = [l.strip() for l in text.splitlines() if l.strip() and not l.strip().startswith("#")]
    return len(lines) == 3 and all("," not in l and len(l.split()) == 3 for l in lines)


def _floats(text: str, count: int | None = None) -> list[float]:
    try:
        vals = [float(t) for t in text.split(",")]
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from None
    if count is not None and len(vals) != count:
        raise UsageError(f"expected {count} comma-separated numbers, got {text!r}")
    return vals


def _profile_str(game, s, out: _Out) -> str:
    r, c = s.labels(game)
    u = game.cell(s.row_choice, s.col_choice)
    return f"({r}, {c}) payoffs ({out.num(u[0])}, {out.num(u[1])})"


def cmd_solve(args, out: _Out) -> int:
    text, source = _read(args.game)
    penalty = None
    if _looks_like_penalty(text):
        penalty = read_penalty_game(text, source)
        game = regime.to_bimatrix(penalty)
    else:
        game = read_game(text, source)
    mode = games.NashMode(args.mode)
    found = games.enumerate_pure_nash(game, mode)
    out(f"pure Nash equilibria ({mode.value}): {len(found)}")
    for s in found:
        out(f"  {_profile_str(game, s, out)}")
    if args.mixed:
        if not game.is_constant_sum():
            out("mixed: not constant-sum; minimax solution not applicable")
            return 0
        mp = games.solve_constant_sum_mixed(game)
        out(f"mixed row: {out.vec(mp.row_mix)}")
        out(f"mixed col: {out.vec(mp.col_mix)}")
        out(f"value row: {out.num(mp.value)}")
        c = float(game.row_payoff[0, 0] + game.col_payoff[0, 0])
        out(f"value col: {out.num(c - mp.value)}")
        if penalty is not None:
            out(f"shooter mix (left, middle, right): {out.vec(mp.col_mix)}")
            out(f"goal probability: {out.num(c - mp.value)}")
        if game.shape[0] == game.shape[1] and game.shape[0] >= 2:
            sol = games.full_support_indifference(game)
            out(f"full-support indifference: {sol.status.value}")
    return 0


def _print_regime(game, regime_, out: _Out) -> None:
    out(f"strict NE: " + ("; ".join(_profile_str(game, s, out) for s in regime_.strict_nash) or "none"))
    out(f"weak NE: " + ("; ".join(_profile_str(game, s, out) for s in regime_.weak_nash) or "none"))
    pd = regime_.payoff_dominant
    out(f"payoff dominant: {_profile_str(game, pd, out) if pd else 'none'}")


def cmd_envy(args, out: _Out) -> int:
    if args.sweep:
        if args.step is None:
            raise UsageError("--sweep requires --step")
        points = behavioral.envy_threshold_sweep(args.step)
        out("epsilon,stay_stay_weak,stay_stay_strict,invest_invest_weak,invest_invest_strict")
        stay = games.StrategyProfile(behavioral.STAY, behavioral.STAY)
        inv = games.StrategyProfile(behavioral.INVEST, behavioral.INVEST)
        for eps, r in points:
            flags = [stay in r.weak_nash, stay in r.strict_nash, inv in r.weak_nash, inv in r.strict_nash]
            out(out.num(eps) + "," + ",".join(str(int(f)) for f in flags))
        bad = behavioral.envy_law_violations(points)
        out(f"# regime law holds: {'yes' if not bad else 'no, at ' + ', '.join(out.num(e) for e in bad)}")
        return 0
    if args.step is not None:
        raise UsageError("--step is only meaningful with --sweep")
    if args.epsilon is not None:
        params = behavioral.EnvyParams.symmetric(args.epsilon)
    elif args.params is not None:
        params = behavioral.EnvyParams(*_floats(args.params, 4))
    else:
        raise UsageError("one of --epsilon or --params is required")
    game = behavioral.apply_envy(params)
    out("cells (row = company B, column = company A), shown as (A's profit, B's profit):")
    for i, label in enumerate(game.row_labels):
        cells = [f"({out.num(game.col_payoff[i, j])}, {out.num(game.row_payoff[i, j])})" for j in range(2)]
        out(f"  B {label}: " + "  ".join(cells))
    _print_regime(game, behavioral.classify_envy_regime(params), out)
    return 0


def cmd_regime(args, out: _Out) -> int:
    text, source = _read(args.game)
    game = read_penalty_game(text, source)
    try:
        e1, e2 = (regime.parse_entry(v) for v in args.vary)
    except ValueError as exc:
        raise UsageError(f"--vary: {exc}") from None
    grid = regime.sweep_regime(game, e1, e2, args.resolution)
    payload = regime.grid_to_pgm(grid) if args.out.lower().endswith(".pgm") else regime.grid_to_csv(grid)
    Path(args.out).write_text(payload)
    out(f"resolution: {grid.resolution}")
    for status in games.Status:
        out(f"fraction {status.value}: {out.num(grid.fraction(status))}")
    out(f"written: {args.out}")
    return 0


def cmd_montecarlo(args, out: _Out) -> int:
    text, source = _read(args.game)
    game = read_penalty_game(text, source)
    dtext, dsource = _read(args.dist)
    dist = read_distribution(dtext, dsource)
    rep = regime.monte_carlo_regime(game, dist, args.samples, args.seed)
    out(f"samples: {rep.samples}")
    out(f"seed: {args.seed}")
    out(f"fraction valid: {out.num(rep.fraction_valid)}")
    out(f"fraction invalid: {out.num(rep.fraction_invalid)}")
    out(f"fraction degenerate: {out.num(rep.fraction_degenerate)}")
    for e, v in rep.mean_params.items():
        out(f"mean of cell {e[0]},{e[1]}: {out.num(v)}")
    out(f"classification at mean: {rep.classification_at_mean.value}")
    out(f"mean goal probability over valid samples: {out.num(rep.mean_value_over_valid)}")
    out(f"blended mean over all solvable samples: {out.num(rep.blended_value)}")
    out(f"straddles boundary: {'true' if rep.straddles_boundary else 'false'}")
    if rep.straddles_boundary:
        out("warning: samples fall on both sides of the existence boundary; "
            "an average over them mixes solutions with non-solutions")
    return 0


def cmd_utility(args, out: _Out) -> int:
    text, source = _read(args.instance)
    inst = read_decision_csv(text, source)
    if args.rank:
        for label, total in valuation.rank_by_sum(inst):
            out(f"{label}: {out.num(total)}")
    elif args.flip is not None:
        res = valuation.find_flipping_transform(inst, args.flip)
        if isinstance(res, valuation.NoFlipPossible):
            out(f"no flip possible for {res.target}: {res.reason} by {res.witness}")
            return 0
        out(f"flipping transform for {args.flip}:")
        for crit, f in zip(inst.criteria_labels, res.functions):
            pts = " ".join(f"({out.num(x)}, {out.num(y)})" for x, y in zip(f.xs, f.ys))
            out(f"  {crit}: {pts}")
        out("ranking under transform:")
        for label, score in valuation.rank_by_scores(inst, res):
            out(f"  {label}: {out.num(score)}")
    else:
        weights = _floats(args.weights)
        res = valuation.check_linear_invariance(inst, weights)
        out(f"preserves argmax: {'true' if res.preserves_argmax else 'false'}")
        if res.witness:
            out(f"weighted winner {res.witness[0]} differs from plain-sum winner {res.witness[1]}")
    return 0


def cmd_pinto(args, out: _Out) -> int:
    model = valuation.pinto_model()
    res = valuation.cost_benefit(model)
    for side, label, amount in res.line_items:
        out(f"{side} {label}: {money(amount)}")
    out(f"total cost: {money(res.total_cost)}")
    out(f"total benefit: {money(res.total_benefit)}")
    out(f"decision: {res.decision}")
    out(f"societal loss per death (itemized): {money(valuation.pinto_societal_loss())}")
    item = args.break_even or "death"
    out(f"break-even unit value for {item}: {money(valuation.break_even(model, item))}")
    return 0


def cmd_axioms(args, out: _Out) -> int:
    text, source = _read(args.structure)
    s = read_structure(text, source)
    image = None
    if args.group:
        report = algebra.check_group(s, algebra.Op(args.group))
    elif args.field:
        report = algebra.check_field(s)
    elif args.order:
        report = algebra.check_order_compat(s)
    else:
        mtext, msource = _read(args.hom)
        image = read_image_map(mtext, msource)
        report = algebra.check_homomorphism(s, image)
    for line in report.lines():
        out(line)
    out(f"all hold: {'true' if report.holds else 'false'}")
    return 0


def cmd_ultimatum(args, out: _Out) -> int:
    text, source = _read(args.thresholds)
    inst = behavioral.UltimatumInstance(args.total, 1, read_thresholds_csv(text, source))
    res = behavioral.ultimatum_optimal_offer(inst)
    out(f"offer: {res.offer}")
    out(f"proposer keeps: {args.total - res.offer}")
    out(f"accept probability: {out.num(res.accept_probability)}")
    out(f"proposer expected: {out.num(res.proposer_expected)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gameaudit", description=__doc__.splitlines()[0])
    p.add_argument("--digits", type=int, default=6, help="significant digits for numbers (default 6)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="pure Nash equilibria, optionally constant-sum minimax")
    s.add_argument("--game", required=True)
    s.add_argument("--mode", choices=["weak", "strict"], default="weak")
    s.add_argument("--mixed", action="store_true")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("envy", help="investment game with envy terms")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--epsilon", type=float)
    g.add_argument("--params", help="alpha,beta,gamma,delta")
    s.add_argument("--sweep", action="store_true")
    s.add_argument("--step", type=float)
    s.set_defaults(func=cmd_envy)

    s = sub.add_parser("regime", help="existence map of full-support equilibria")
    s.add_argument("--game", required=True)
    s.add_argument("--vary", nargs=2, metavar="CELL", default=["1,0", "1,1"])
    s.add_argument("--resolution", type=int, default=101)
    s.add_argument("--out", required=True, help="output path; .pgm selects PGM, anything else CSV")
    s.set_defaults(func=cmd_regime)

    s = sub.add_parser("montecarlo", help="sample varied cells and report regime fractions")
    s.add_argument("--game", required=True)
    s.add_argument("--dist", required=True)
    s.add_argument("--samples", type=int, default=10_000)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_montecarlo)

    s = sub.add_parser("utility", help="sum ranking versus monotone rescoring")
    s.add_argument("--instance", required=True)
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--rank", action="store_true")
    g.add_argument("--flip", metavar="OPTION")
    g.add_argument("--weights", help="w1,w2,...")
    s.set_defaults(func=cmd_utility)

    s = sub.add_parser("pinto", help="bundled fuel-tank cost-benefit dataset")
    s.add_argument("--break-even", metavar="ITEM")
    s.set_defaults(func=cmd_pinto)

    s = sub.add_parser("axioms", help="axiom checks on a finite structure")
    s.add_argument("--structure", required=True)
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--group", choices=["add", "mul"])
    g.add_argument("--field", action="store_true")
    g.add_argument("--order", action="store_true")
    g.add_argument("--hom", metavar="MAP_FILE")
    s.set_defaults(func=cmd_axioms)

    s = sub.add_parser("ultimatum", help="proposer's best offer against a threshold distribution")
    s.add_argument("--total", type=int, required=True)
    s.add_argument("--thresholds", required=True)
    s.set_defaults(func=cmd_ultimatum)
    return p


def _check_ranges(args) -> None:
    if args.digits < 1:
        raise UsageError("--digits must be >= 1")
    if args.command == "regime" and args.resolution < 2:
        raise UsageError("--resolution must be >= 2")
    if args.command == "montecarlo" and args.samples < 1:
        raise UsageError("--samples must be >= 1")
    if args.command == "envy" and args.step is not None and not args.step > 0:
        raise UsageError("--step must be positive")


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        _check_ranges(args)
        return args.func(args, _Out(stdout, args.digits))
    except UsageError as exc:
        print(f"usage error: {exc}", file=stderr)
        return 2
    except (ValueError, AssertionError) as exc:
        print(f"error: {exc}", file=stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
