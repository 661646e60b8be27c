import functools

import pytest

from dtcopath.netcore import preset
from dtcopath.pathcli.config import DESK_DESIGN

_outcomes: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, label): acceptance criterion check")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    rep = (yield).get_result()
    m = item.get_closest_marker("criterion")
    if m is None:
        return
    n, label = m.args
    slot = _outcomes.setdefault(n, {"label": label, "parts": []})
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        if hasattr(rep, "wasxfail"):
            status = "FAIL (expected)"
        else:
            status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[rep.outcome]
        note = item.user_properties and dict(item.user_properties).get("note")
        slot["parts"].append((item.name, status, note))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_outcomes):
        slot = _outcomes[n]
        verdict = "PASS" if all(s == "PASS" for _, s, _ in slot["parts"]) else "FAIL"
        tr.write_line(f"[{n}] {slot['label']}: {verdict}")
        for name, status, note in slot["parts"]:
            extra = f"  {note}" if note else ""
            tr.write_line(f"      {name}: {status}{extra}")


@functools.lru_cache(maxsize=None)
def _lib(name):
    return preset(name)


@pytest.fixture(scope="session")
def lib2():
    return _lib("lib2")[0]


@pytest.fixture(scope="session")
def tech2():
    return _lib("lib2")[1]


@pytest.fixture(scope="session")
def desk(lib2):
    """The 2k-instance generated design used across the flow tests."""
    return DESK_DESIGN.load(lib2)
