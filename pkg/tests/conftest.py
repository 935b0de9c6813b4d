import hypothesis
import pytest

hypothesis.settings.register_profile("default", max_examples=50, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=5, deadline=None)
hypothesis.settings.load_profile("default")

_acceptance: list[tuple[str, str]] = []


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and report.when == "call":
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    by_criterion: dict[str, bool] = {}
    for name, outcome in _acceptance:
        mark = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{mark}] {name}")
        key = name.split("_")[1]
        by_criterion[key] = by_criterion.get(key, True) and outcome == "passed"
    terminalreporter.write_sep("-", "per criterion")
    for key, ok in sorted(by_criterion.items()):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {int(key[1:])}")


@pytest.fixture(scope="session")
def exact24():
    from primefreq.core_seq import exact_sequence

    return exact_sequence(24)
