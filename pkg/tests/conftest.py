from fractions import Fraction

import hypothesis.strategies as st
from hypothesis import settings

from affine_toeplitz.affine import AffinePoint, ConePoint
from affine_toeplitz.monomials import AddMonomial, ClMonomial, Monomial, MultMonomial

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")


def rationals(bound=100, positive=False, nonnegative=False):
    lo = 1 if positive else (0 if nonnegative else -bound)
    return st.builds(Fraction, st.integers(lo, bound), st.integers(1, bound))


affine_points = st.builds(AffinePoint, rationals(positive=True), rationals())
cone_points = st.builds(ConePoint, st.integers(1, 60), st.integers(0, 60))

# multiplicative entries biased toward integers with shared factors
scales = st.one_of(st.integers(1, 40), st.sampled_from([2, 4, 6, 8, 12, 18, 24, 30, 36, 60]))
monomials = st.builds(Monomial, scales, st.integers(0, 25), st.integers(0, 25), scales)
add_monomials = st.builds(AddMonomial, scales, st.integers(-25, 25), scales)
mult_monomials = st.builds(
    MultMonomial, rationals(30, nonnegative=True), rationals(30, nonnegative=True), rationals(30, positive=True)
)
cl_monomials = st.builds(ClMonomial, rationals(30), rationals(30, positive=True))


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            props = dict(getattr(rep, "user_properties", ()))
            if "criterion" in props and rep.when == "call":
                lines.append((props["criterion"], outcome, props.get("detail", "")))
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for number, outcome, detail in sorted(lines, key=lambda t: t[0]):
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {number:>2}: {verdict}  {detail}")
