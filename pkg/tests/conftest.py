import os
from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", max_examples=400, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

small_int = st.integers(-6, 6)


def int_vectors(n, min_size=1, max_size=5):
    vec = st.tuples(*([small_int] * n)).filter(any)
    return st.lists(vec, min_size=min_size, max_size=max_size)


def as_fractions(vs):
    return tuple(tuple(Fraction(x) for x in v) for v in vs)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import REPORT
    except ImportError:
        return
    if not REPORT:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(REPORT):
        title, ok, detail = REPORT[number]
        terminalreporter.write_line(f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title}: {detail}")
