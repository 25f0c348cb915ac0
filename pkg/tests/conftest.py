from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from lattice_edgeworth.lattice_rv import IntegerRV

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


@st.composite
def exact_rvs(draw, K=3, max_support=4):
    """Exact integer random variables with |values| <= K."""
    values = draw(st.lists(st.integers(-K, K), min_size=1, max_size=max_support, unique=True))
    raw = draw(st.lists(st.integers(1, 9), min_size=len(values), max_size=len(values)))
    total = sum(raw)
    return IntegerRV(values, [Fraction(w, total) for w in raw])


@st.composite
def nondegenerate_rvs(draw, K=3):
    rv = draw(exact_rvs(K=K))
    if len(rv.support) == 1:
        v = rv.support[0]
        other = v - 1 if v > -K else v + 1
        rv = IntegerRV([v, other], [Fraction(1, 2), Fraction(1, 2)])
    return rv


@pytest.fixture
def record_acceptance():
    def record(number: int, ok: bool, detail: str) -> None:
        ACCEPTANCE_LINES.append(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
