"""Collects acceptance outcomes and prints one PASS/FAIL line per criterion."""
import pytest

_RESULTS: dict[int, list[tuple[str, str, str]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion the test belongs to")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        n, title = mark.args
        if hasattr(rep, "wasxfail"):
            status = "unattained"
        else:
            status = "pass" if rep.passed else "fail"
        _RESULTS.setdefault(n, []).append((title, item.name, status))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_RESULTS):
        rows = _RESULTS[n]
        title = rows[0][0]
        bad = [f"{name} {status}" for _, name, status in rows if status != "pass"]
        verdict = "FAIL" if bad else "PASS"
        note = f" ({'; '.join(bad)})" if bad else ""
        tr.write_line(f"criterion {n:2d}: {verdict}  {title}{note}")
