import pytest

from planeforge.plane import build_plane


@pytest.fixture(scope="session")
def planes():
    cache = {}

    def get(q):
        if q not in cache:
            cache[q] = build_plane(q)
        return cache[q]
    return get


@pytest.fixture
def fano(planes):
    return planes(2)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(results):
        ok, detail = results[key]
        terminalreporter.write_line(f"criterion {key:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
