from fractions import Fraction

from hypothesis import strategies as st

from bochner_lab.exactnum import MPoly

CONTEXT = ("n", "a", "b")

small_fracs = st.builds(Fraction, st.integers(-12, 12), st.integers(1, 6))
nonzero_fracs = small_fracs.filter(lambda f: f != 0)


@st.composite
def mpolys(draw, context=CONTEXT, max_deg=3, max_terms=5):
    k = len(context)
    exps = st.tuples(*[st.integers(0, max_deg)] * k)
    terms = draw(st.dictionaries(exps, small_fracs, max_size=max_terms))
    return MPoly(terms, context)


@st.composite
def points(draw, context=CONTEXT):
    return {v: draw(small_fracs) for v in context}


# -- acceptance summary ------------------------------------------------------------------

_criteria = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid or "::test_criterion_" not in report.nodeid:
        return
    num = int(report.nodeid.split("::test_criterion_")[1].split("_")[0])
    if report.when == "call" or report.outcome != "passed":
        prev = _criteria.get(num, "PASS")
        _criteria[num] = "PASS" if (prev == "PASS" and report.outcome == "passed") else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        terminalreporter.write_line(f"criterion {num:2d}: {_criteria[num]}")
