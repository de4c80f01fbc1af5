import numpy as np
import pytest

from crossover_rmt import EnsembleSpec, SkewFunctionSet


_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion under test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or report.when not in ("setup", "call"):
        return
    if report.when == "setup" and report.passed:
        return
    number, title = mark.args
    detail = "; ".join(str(v) for k, v in item.user_properties if k == "detail")
    status = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")
    prev = _CRITERIA.get(number)
    # a criterion split over several tests passes only if all of them do
    if prev is not None and prev[0] != "PASS":
        status = prev[0]
    details = ([prev[2]] if prev and prev[2] else []) + ([detail] if detail else [])
    _CRITERIA[number] = (status, title, " | ".join(details))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        status, title, detail = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:2d} {status}: {title}" + (f" ({detail})" if detail else ""))


@pytest.fixture
def rng():
    return np.random.default_rng(20241016)


@pytest.fixture(scope="session")
def skew_sets():
    """Cached SkewFunctionSet objects keyed by (N, a, tau)."""
    cache = {}

    def get(N, a, tau):
        key = (N, a, tau)
        if key not in cache:
            cache[key] = SkewFunctionSet(EnsembleSpec(N=N, tau=tau, a=a))
        return cache[key]

    return get
