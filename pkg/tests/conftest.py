import numpy as np
import pytest

# acceptance results, filled in by tests/test_acceptance.py
ACCEPTANCE = {}


def record(number, title, passed, detail=""):
    ACCEPTANCE[number] = (title, bool(passed), detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, passed, detail = ACCEPTANCE[number]
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {number:2d}: {title}  {detail}")


def random_sphere(rng, count, q):
    v = rng.normal(size=(count, q)) + 1j * rng.normal(size=(count, q))
    return v / np.linalg.norm(v, axis=1)[:, None]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
