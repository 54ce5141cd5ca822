import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gameaudit import BimatrixGame  # noqa: E402
from gameaudit.formats import bundled_text, read_game  # noqa: E402

DEFAULT_COMPANION = Path(__file__).parent / "data" / "companion_penalty.txt"


def pytest_addoption(parser):
    parser.addoption(
        "--companion-game", default=str(DEFAULT_COMPANION),
        help="penalty-game file with the published goal-probability matrix (check skipped if absent)")


@pytest.fixture
def companion_game_path(request):
    path = Path(request.config.getoption("--companion-game"))
    if not path.is_file():
        pytest.skip(f"companion penalty matrix not supplied ({path})")
    return path


@pytest.fixture
def fig1() -> BimatrixGame:
    return read_game(bundled_text("fig1.game"), "fig1.game")


_ACCEPTANCE = pytest.StashKey[dict]()


@pytest.fixture
def criterion(request):
    """Record one acceptance line: ``criterion(n, title)`` then ``.done(ok, detail)``."""
    results = request.config.stash.setdefault(_ACCEPTANCE, {})

    class Recorder:
        key = None

        def __call__(self, n, title):
            self.key = (n, title)
            results[self.key] = ("FAIL", "raised before completing")
            return self

        def done(self, ok, detail=""):
            results[self.key] = ("PASS" if ok else "FAIL", detail)
            assert ok, detail

        def skipped(self, reason):
            results[self.key] = ("SKIP", reason)

    return Recorder()


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash.get(_ACCEPTANCE, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for (n, title), (verdict, detail) in sorted(results.items()):
        terminalreporter.write_line(f"criterion {n:>2} {verdict}: {title}" + (f" [{detail}]" if detail else ""))
