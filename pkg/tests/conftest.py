from fractions import Fraction

from hypothesis import settings, strategies as st

from askeywilson.ring import LaurentPoly, NSYM

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

# polynomials in qh and u only; enough to exercise multivariate code paths
_term = st.tuples(st.integers(-3, 3), st.integers(-2, 2), st.integers(-4, 4).filter(bool))


@st.composite
def laurent(draw, max_terms=4):
    terms = draw(st.lists(_term, max_size=max_terms))
    return LaurentPoly.from_terms(((a, b) + (0,) * (NSYM - 2), Fraction(c)) for a, b, c in terms)


# -- acceptance line collection -----------------------------------------------
_ACCEPTANCE_LINES = []


class AcceptanceLog:
    def line(self, label, ok, seconds, limit, detail=""):
        status = "PASS" if ok and seconds < limit else "FAIL"
        text = f"criterion {label:<4} {status}  {seconds:7.1f}s / {limit:g}s  {detail}".rstrip()
        _ACCEPTANCE_LINES.append(text)
        print(text)
        return status == "PASS"


import pytest  # noqa: E402


@pytest.fixture(scope="session")
def acceptance():
    return AcceptanceLog()


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for text in sorted(_ACCEPTANCE_LINES, key=lambda s: (int(s.split()[1].rstrip("abc")), s)):
            terminalreporter.write_line(text)
