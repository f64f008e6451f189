import numpy as np
import pytest

from ojs.channel import SeededRng, SystemConfig, sample_realization


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def four_antenna_config():
    return SystemConfig(nt=2, nj=2, nr=4, ne=4, k=2, s=10)


@pytest.fixture
def single_stream_config():
    return SystemConfig(nt=1, nj=2, nr=3, ne=3, k=2, s=5)


def crandn(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def draw(config, seed=0, stream=0):
    return sample_realization(config, SeededRng(seed, stream))


# --- acceptance reporting -------------------------------------------------------
# Tests marked ``criterion(n, title)`` get one PASS/FAIL line in the terminal
# summary. ``record_property("detail", ...)`` adds the measured numbers.

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call":
        return
    n, title = mark.args
    detail = "; ".join(str(v) for k, v in item.user_properties if k == "detail")
    prev = _CRITERIA.get(n)
    ok = rep.passed and (prev is None or prev[1])
    details = [d for d in ((prev[2] if prev else ""), detail) if d]
    _CRITERIA[n] = (title, ok, " | ".join(details))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title, ok, detail = _CRITERIA[n]
        line = f"{'PASS' if ok else 'FAIL'}  criterion {n:2d}: {title}"
        terminalreporter.write_line(line + (f"  [{detail}]" if detail else ""))
