from __future__ import annotations

from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from hmf5.numberfield import QuadElem
from hmf5.series import HilbertSeries, enumerate_cone

settings.register_profile(
    "repo",
    derandomize=True,
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("repo")

small_ints = st.integers(min_value=-30, max_value=30)
rationals = st.builds(Fraction, small_ints, st.integers(min_value=1, max_value=12))
quads = st.builds(QuadElem, rationals, rationals)
nonzero_quads = quads.filter(bool)


@st.composite
def cone_series(draw, bound: int = 4, weight=(0, 0), max_terms: int = 8, rational: bool = False):
    pts = enumerate_cone(bound)
    keys = draw(st.lists(st.sampled_from(pts), max_size=max_terms, unique=True))
    coeff = rationals.map(QuadElem) if rational else quads
    return HilbertSeries(weight, bound, {k: draw(coeff) for k in keys})


@st.composite
def unit_series(draw, bound: int = 4, weight=(0, 0)):
    """A cone series with nonzero constant term."""
    f = draw(cone_series(bound, weight))
    c = draw(nonzero_quads)
    return f - HilbertSeries.constant(f.constant_term(), bound, weight) + HilbertSeries.constant(c, bound, weight)




def pytest_terminal_summary(terminalreporter):
    from tests import acceptance_log

    if acceptance_log.LINES:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_log.LINES:
            terminalreporter.write_line(line)
