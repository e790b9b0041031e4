import pytest

from folsing.generator import corpus


@pytest.fixture(scope="session")
def decorated_corpus():
    return corpus(200, base_seed=1000)


@pytest.fixture(scope="session")
def dicritical_corpus():
    return corpus(60, base_seed=5000, dicritical_prob=0.3)


# one summary line per acceptance criterion, in criterion order
_acceptance: dict[int, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    criterion = dict(report.user_properties).get("criterion")
    if criterion is not None:
        n, title = criterion
        _acceptance[n] = (title, "PASS" if report.passed else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_acceptance):
        title, verdict = _acceptance[n]
        terminalreporter.write_line(f"[AC-{n:02d}] {verdict}  {title}")
