"""Per-criterion summary for the acceptance suite."""
import pytest

CRITERIA = {
    1: "coupling-law regression",
    2: "overlay symmetry",
    3: "ring equivalence",
    4: "static superposition",
    5: "dipole transfer",
    6: "dipole superposition classes",
    7: "eigen vs RK4 oracle",
    8: "Geary oracle and properties",
    9: "measured-data reproduction",
    10: "topology counts",
}

_outcomes: dict[int, list[str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_runtest_logreport(report):
    n = report.user_properties and dict(report.user_properties).get("criterion")
    if not n:
        return
    if report.when == "call" or report.outcome != "passed":
        _outcomes.setdefault(n, []).append(report.outcome)


@pytest.hookimpl(tryfirst=True)
def pytest_runtest_setup(item):
    marker = item.get_closest_marker("criterion")
    if marker:
        item.user_properties.append(("criterion", marker.args[0]))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n, title in CRITERIA.items():
        results = _outcomes.get(n)
        if not results:
            status = "NOT RUN"
        elif "failed" in results:
            status = "FAIL"
        elif all(r == "skipped" for r in results):
            status = "SKIPPED"
        else:
            status = "PASS"
        terminalreporter.write_line(f"criterion {n:2d} {title:<30s} {status}")
