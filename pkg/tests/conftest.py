import numpy as np
import pytest

from pcakit import embedded_height_weight, embedded_iris

ACCEPTANCE_RESULTS = []


@pytest.fixture(scope="session")
def height_weight():
    return embedded_height_weight()


@pytest.fixture(scope="session")
def iris():
    return embedded_iris()


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def criterion(request):
    """Record one acceptance criterion's verdict for the terminal summary.

    Usage: ``with criterion("AC1 height/weight") as check: check(cond, detail)``.
    """

    class _Criterion:
        def __init__(self, name):
            self.name = name
            self.failures = []
            self.notes = []

        def __call__(self, ok, detail):
            (self.notes if ok else self.failures).append(detail)

        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            if exc is not None:
                self.failures.append(f"raised {exc_type.__name__}: {exc}")
            ACCEPTANCE_RESULTS.append((self.name, not self.failures, self.failures or self.notes))
            if exc is None and self.failures:
                pytest.fail(f"{self.name}: " + "; ".join(self.failures))
            return False

    return _Criterion


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, details in ACCEPTANCE_RESULTS:
        line = f"{'PASS' if ok else 'FAIL'}  {name}"
        if details:
            line += "  -- " + "; ".join(details)
        terminalreporter.write_line(line)
