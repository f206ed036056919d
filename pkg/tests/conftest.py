import pytest

from tplab.census import run_census
from tplab.classify import Classifier, default_classifier

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def clf() -> Classifier:
    return default_classifier()


@pytest.fixture(scope="session")
def census44(clf):
    return run_census(4, 4, clf)


@pytest.fixture(scope="session")
def census44_nodb():
    return run_census(4, 4, Classifier(with_db=False))


@pytest.fixture(scope="session")
def census45(clf):
    return run_census(4, 5, clf)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
