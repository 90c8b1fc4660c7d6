"""Bounded-degree search for polynomial relations between power series."""

from fractions import Fraction

from crsym.exactnum import ZERO, GaussRat
from crsym.obstruct import dependence_search
from crsym.series import TruncSeries, VarSet, primitive

R = VarSet(("r",))
N = 40
r = TruncSeries.var(R, "r", N)

# sqrt(1 + r) - 1 from its binomial series
coeffs, c = [ZERO], Fraction(1)
for k in range(1, N + 1):
    c = c * (Fraction(1, 2) - (k - 1)) / k
    coeffs.append(GaussRat(c))
root = TruncSeries.univariate(R, "r", coeffs, N)

for label, g in (("sqrt(1+r) - 1", root), ("exp(r) - 1", primitive("expm1", r, order=N)), ("sin(r)", primitive("sin", r, order=N))):
    res = dependence_search([r, g], D=4, N=20, names=("r", "G"))
    print(f"{label:15s} {res.verdict:12s} {res.render()}")
