import sys

from hypothesis import settings
from hypothesis import strategies as st

from fecheck.exactfield import FieldElem, Poly

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

rationals = st.fractions(min_value=-6, max_value=6, max_denominator=5)

@st.composite
def polys(draw, max_degree=3, nonzero=False):
    coeffs = draw(st.lists(rationals, min_size=1, max_size=max_degree + 1))
    p = Poly(coeffs)
    if nonzero and p.is_zero():
        p = Poly((draw(st.integers(1, 5)),))
    return p

@st.composite
def elems(draw, nonzero=False):
    num = draw(polys(nonzero=nonzero))
    den = draw(polys(max_degree=2, nonzero=True))
    return FieldElem(num, den)

nonzero_elems = elems(nonzero=True)
small_ints = st.integers(-4, 4)



def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(module.RESULTS):
        terminalreporter.write_line(module.RESULTS[n])
