import pytest

_criteria: dict[int, list[str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number checked by the test")


def pytest_runtest_logreport(report):
    marker = dict(report.user_properties).get("criterion")
    if marker is None:
        return
    if report.when == "call" or report.outcome != "passed":
        _criteria.setdefault(marker, []).append(report.outcome)


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            item.user_properties.append(("criterion", mark.args[0]))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        ok = all(o == "passed" for o in _criteria[n])
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}")


@pytest.fixture
def fx():
    """Small structures used across modules."""
    from narylevel.classification import FAMILY_BY_ID
    from narylevel.structures import AlgebraStructure

    class F:
        A3 = AlgebraStructure(2, 2, {(0, 0): {1: 1}})
        n3 = AlgebraStructure(2, 3, {(0, 1): {2: 1}, (1, 0): {2: -1}})
        nu = FAMILY_BY_ID["nu"].instantiate(2)  # alpha = 2
        nu3 = FAMILY_BY_ID["nu"].instantiate(3)
        pminus = FAMILY_BY_ID["p-"].instantiate(3)
        zero2 = AlgebraStructure(2, 2)
        zero3 = AlgebraStructure(3, 3)
        ex21 = FAMILY_BY_ID["3.1"].instantiate(2)
        ex23 = FAMILY_BY_ID["3.3"].instantiate(4)
        ex24 = FAMILY_BY_ID["3.4"].instantiate(3)
        ex25 = FAMILY_BY_ID["3.5"].instantiate(3)
        # e1e1 = e1, e2e2 = e1
        square = AlgebraStructure(2, 2, {(0, 0): {0: 1}, (1, 1): {0: 1}})

    return F
