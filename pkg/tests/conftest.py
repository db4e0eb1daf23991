import numpy as np
import pytest

from fts_entangle import fts, invariants as inv
from fts_entangle.scalars import GaussianRational, rational


def random_states(n, seed, real=False):
    rng = np.random.default_rng(seed)
    s = rng.standard_normal((n, 8))
    if not real:
        s = s + 1j * rng.standard_normal((n, 8))
    return s


def random_exact_state(rng, bound=5):
    parts = rng.integers(-bound, bound + 1, (8, 2))
    return inv.as_state([GaussianRational(rational(int(a)), rational(int(b))) for a, b in parts], exact=True)


def random_exact_element(rng, bound=5):
    parts = rng.integers(-bound, bound + 1, (8, 2))
    return fts.FtsElement.from_components([GaussianRational(rational(int(a)), rational(int(b))) for a, b in parts])


def random_elements(n, seed):
    """A batch of FTS elements held as one element with array components."""
    return fts.FtsElement.from_components(list(random_states(n, seed).T))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
