import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gameaudit.games import (
    BimatrixGame,
    GameError,
    NashMode,
    Player,
    Status,
    StrategyProfile,
    best_response,
    enumerate_pure_nash,
    full_support_indifference,
    is_mixed_equilibrium,
    max_deviation_gain,
    solve_constant_sum_mixed,
    solve_linear,
)
from oracles import brute_pure_nash, grid_maxmin, grid_minmax, random_constant_sum

HOME, ABROAD = 0, 1


def diagonal_save():
    # Keeper (row) earns the save probability, shooter (column) the goal probability.
    goal = 1.0 - np.eye(3)
    return BimatrixGame(["l", "s", "r"], ["l", "m", "r"], 1.0 - goal, goal)


def test_fig1_cells_match_published_pairs(fig1):
    # Published cells read (A's profit, B's profit); A is the column player.
    published = [[(4, 4), (3, 2)], [(2, 3), (2, 2)]]
    for i in range(2):
        for j in range(2):
            b_profit, a_profit = fig1.cell(i, j)
            assert (a_profit, b_profit) == published[i][j]


class TestBestResponse:
    def test_home_beats_abroad_for_a(self, fig1):
        assert best_response(fig1, Player.COL, HOME) == {HOME}

    def test_tie_returns_both(self, fig1):
        assert best_response(fig1, Player.COL, ABROAD) == {HOME, ABROAD}

    def test_single_strategy(self):
        g = BimatrixGame.from_cells([[(1.0, 2.0)]])
        assert best_response(g, Player.ROW, 0) == {0}
        assert best_response(g, Player.COL, 0) == {0}

    def test_out_of_bounds(self, fig1):
        with pytest.raises(GameError):
            best_response(fig1, Player.ROW, 2)


class TestPureNash:
    def test_fig1_strict(self, fig1):
        found = enumerate_pure_nash(fig1, NashMode.STRICT)
        assert found == [StrategyProfile(HOME, HOME)]
        assert fig1.cell(HOME, HOME) == (4.0, 4.0)

    def test_fig1_weak(self, fig1):
        assert enumerate_pure_nash(fig1, NashMode.WEAK) == [
            StrategyProfile(HOME, HOME), StrategyProfile(ABROAD, ABROAD)]
        assert enumerate_pure_nash(fig1, NashMode.WEAK) == [
            StrategyProfile(*p) for p in brute_pure_nash(fig1.row_payoff, fig1.col_payoff)]

    @pytest.mark.parametrize("mode", list(NashMode))
    def test_one_by_one(self, mode):
        g = BimatrixGame.from_cells([[(0.0, 0.0)]])
        assert enumerate_pure_nash(g, mode) == [StrategyProfile(0, 0)]


payoff_tables = st.integers(1, 4).flatmap(lambda n: st.integers(1, 4).flatmap(
    lambda m: st.tuples(
        st.lists(st.lists(st.integers(-5, 5), min_size=m, max_size=m), min_size=n, max_size=n),
        st.lists(st.lists(st.integers(-5, 5), min_size=m, max_size=m), min_size=n, max_size=n))))


@settings(max_examples=300, deadline=None)
@given(payoff_tables)
def test_pure_nash_matches_exhaustive_deviation(tables):
    a, b = tables
    g = BimatrixGame.from_cells(np.stack([a, b], axis=-1))
    weak = enumerate_pure_nash(g, NashMode.WEAK)
    strict = enumerate_pure_nash(g, NashMode.STRICT)
    assert [(s.row_choice, s.col_choice) for s in weak] == brute_pure_nash(a, b)
    assert [(s.row_choice, s.col_choice) for s in strict] == brute_pure_nash(a, b, strict=True)
    assert set(strict) <= set(weak)


@settings(max_examples=200, deadline=None)
@given(payoff_tables, st.integers(-10, 10), st.sampled_from(list(Player)))
def test_translating_one_players_payoffs_keeps_equilibria(tables, shift, player):
    a, b = (np.array(t, dtype=float) for t in tables)
    g = BimatrixGame.from_cells(np.stack([a, b], axis=-1))
    if player is Player.ROW:
        h = BimatrixGame.from_cells(np.stack([a + shift, b], axis=-1))
    else:
        h = BimatrixGame.from_cells(np.stack([a, b + shift], axis=-1))
    for mode in NashMode:
        assert enumerate_pure_nash(g, mode) == enumerate_pure_nash(h, mode)


class TestConstantSum:
    def test_diagonal_save_uniform(self):
        mp = solve_constant_sum_mixed(diagonal_save())
        np.testing.assert_allclose(mp.row_mix, [1 / 3] * 3, atol=1e-9)
        np.testing.assert_allclose(mp.col_mix, [1 / 3] * 3, atol=1e-9)
        assert 1.0 - mp.value == pytest.approx(2 / 3, abs=1e-9)

    def test_one_by_one(self):
        mp = solve_constant_sum_mixed(BimatrixGame.from_cells([[(0.7, 0.3)]]))
        assert list(mp.row_mix) == [1.0] and list(mp.col_mix) == [1.0]
        assert mp.value == pytest.approx(0.7)

    def test_seed_42_against_grid(self):
        a, b = random_constant_sum(np.random.default_rng(42), 3, 3)
        mp = solve_constant_sum_mixed(BimatrixGame.from_cells(np.stack([a, b], -1)))
        assert abs(mp.value - grid_maxmin(a)[0]) <= 1e-2
        assert abs(mp.value - grid_minmax(a)[0]) <= 1e-2

    def test_rejects_general_sum(self, fig1):
        with pytest.raises(GameError, match=r"cell \(0,1\)"):
            solve_constant_sum_mixed(fig1)

    @pytest.mark.parametrize("n", [2, 3])
    def test_random_games_vs_oracle_and_saddle(self, n):
        rng = np.random.default_rng(1000 + n)
        for _ in range(25):
            a, b = random_constant_sum(rng, n, n, c=2.5)
            g = BimatrixGame.from_cells(np.stack([a, b], -1))
            mp = solve_constant_sum_mixed(g)
            assert abs(mp.value - grid_maxmin(a)[0]) <= 1e-2
            assert max_deviation_gain(g, mp.row_mix, mp.col_mix) <= 1e-7
            assert mp.row_mix.sum() == pytest.approx(1.0, abs=1e-9)
            assert mp.value == pytest.approx(float(mp.row_mix @ a @ mp.col_mix), abs=1e-9)

    def test_pure_saddle_returns_pure_profile(self):
        # Row 0 strictly dominates, and column 1 is then strictly best for the column player.
        a = np.array([[5.0, 3.0, 4.0], [1.0, 2.0, 0.0], [0.0, 1.0, 2.0]])
        g = BimatrixGame.from_cells(np.stack([a, -a], -1))
        mp = solve_constant_sum_mixed(g)
        assert list(mp.row_mix) == [1.0, 0.0, 0.0]
        assert list(mp.col_mix) == [0.0, 1.0, 0.0]
        assert mp.value == 3.0


class TestFullSupport:
    def test_cyclic_game(self):
        goal = np.array([[1.0 if j == (i + 1) % 3 else 0.0 for j in range(3)] for i in range(3)])
        g = BimatrixGame.from_cells(np.stack([1 - goal, goal], -1))
        sol = full_support_indifference(g)
        assert sol.status is Status.VALID
        np.testing.assert_allclose(sol.row_weights, [1 / 3] * 3, atol=1e-12)
        np.testing.assert_allclose(sol.col_weights, [1 / 3] * 3, atol=1e-12)

    def test_constant_game_degenerate(self):
        g = BimatrixGame.from_cells(np.full((3, 3, 2), 0.5))
        assert full_support_indifference(g).status is Status.DEGENERATE

    def test_non_square(self):
        with pytest.raises(GameError):
            full_support_indifference(BimatrixGame.from_cells(np.zeros((2, 3, 2))))

    @pytest.mark.parametrize("cell_value, expected", [
        # (keeper straight, shooter middle) goal probability; the remaining cells are diagonal-save.
        (0.0, Status.VALID),
        (0.2, Status.VALID),
    ])
    def test_agrees_with_grid_oracle(self, cell_value, expected):
        goal = 1.0 - np.eye(3)
        goal[1, 1] = cell_value
        g = BimatrixGame.from_cells(np.stack([1 - goal, goal], -1))
        sol = full_support_indifference(g)
        _, keeper = grid_maxmin(1 - goal)
        _, shooter = grid_minmax(1 - goal)
        interior = keeper.min() > 0 and shooter.min() > 0
        assert sol.status is expected
        assert interior == (expected is Status.VALID)

    def test_invalid_when_oracle_optimum_on_boundary(self):
        # Keeper straight saves left shots too: goal[straight, left] = 0, goal[straight, middle] = 0.5.
        goal = 1.0 - np.eye(3)
        goal[1, 0] = 0.0
        goal[1, 1] = 0.5
        g = BimatrixGame.from_cells(np.stack([1 - goal, goal], -1))
        sol = full_support_indifference(g)
        _, keeper = grid_maxmin(1 - goal)
        assert keeper.min() == 0.0
        assert sol.status is Status.INVALID
        assert (sol.row_weights < -1e-9).any() or (sol.col_weights < -1e-9).any() \
            or (sol.row_weights > 1 + 1e-9).any() or (sol.col_weights > 1 + 1e-9).any()

    def test_valid_solutions_are_equilibria(self):
        rng = np.random.default_rng(3)
        seen = 0
        for _ in range(200):
            a, b = random_constant_sum(rng, 3, 3)
            g = BimatrixGame.from_cells(np.stack([a, b], -1))
            sol = full_support_indifference(g)
            if sol.status is Status.VALID:
                seen += 1
                assert is_mixed_equilibrium(g, sol.row_weights, sol.col_weights)
                # Every pure strategy earns the equalised payoff.
                np.testing.assert_allclose(a @ sol.col_weights, sol.row_value, atol=1e-7)
                np.testing.assert_allclose(sol.row_weights @ b, sol.col_value, atol=1e-7)
        assert seen > 0


def test_solve_linear_matches_numpy_and_flags_singular():
    rng = np.random.default_rng(0)
    m = rng.normal(size=(5, 5))
    rhs = rng.normal(size=5)
    np.testing.assert_allclose(solve_linear(m, rhs), np.linalg.solve(m, rhs), atol=1e-10)
    m[4] = m[0] + m[1]
    assert solve_linear(m, rhs) is None


def test_game_validation():
    with pytest.raises(GameError):
        BimatrixGame(["a"], ["b"], [[float("inf")]], [[0.0]])
    with pytest.raises(GameError):
        BimatrixGame(["a", "b"], ["c"], [[1.0]], [[1.0]])
    g = BimatrixGame.from_cells([[(1.0, 2.0), (0.5, 2.5)]])
    assert g.is_constant_sum(3.0)
    assert not g.is_constant_sum(2.0)
