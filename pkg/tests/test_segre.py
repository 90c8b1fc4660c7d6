from fractions import Fraction

import pytest

from crsym.exactnum import I, ONE, ZERO, GaussRat
from crsym.segre import (
    HypersurfaceError,
    HypersurfaceSpec,
    LeviDegenerateError,
    complexify,
    derive_pde_system,
    input_varset,
    segre_residual,
)
from crsym.series import TruncSeries, VarSet

from conftest import make_spec, make_system


def g(a, b=0):
    return GaussRat(Fraction(a), Fraction(b))


def test_complexify_quadric_tube():
    eq = complexify(make_spec("tube", "y^2", 6))
    C = eq.varset
    z, zeta, xi = (TruncSeries.var(C, n) for n in ("z1", "zeta1", "xi1"))
    expected = xi - ((z - zeta) ** 2).scale(g(0, Fraction(1, 2)))
    assert eq.theta_bar[0].truncate(6) == expected.truncate(6)


@pytest.mark.parametrize(
    "kind, phi",
    [("rigid", "z*zb + z^5*zb^5 + z^7*zb^7"), ("hermitian-rigid", "r + r^5 + r^7")],
)
def test_complexify_hermitian_sum(kind, phi):
    eq = complexify(make_spec(kind, phi, 16))
    C = eq.varset
    z, zeta, xi = (TruncSeries.var(C, n) for n in ("z1", "zeta1", "xi1"))
    part = z * zeta + (z * zeta) ** 5 + (z * zeta) ** 7
    assert eq.theta_bar[0].truncate(16) == (xi + part.scale(g(0, 2))).truncate(16)


def test_complexify_flat():
    eq = complexify(make_spec("tube", "0", 6))
    assert eq.theta_bar[0].truncate(6) == TruncSeries.var(eq.varset, "xi1").truncate(6)


def test_rejects_nonreal_and_constant():
    Y = input_varset("tube", 1)
    with pytest.raises(HypersurfaceError, match="non-real"):
        HypersurfaceSpec("tube", 1, [TruncSeries.var(Y, "y1").scale(I)])
    with pytest.raises(HypersurfaceError, match="vanish"):
        HypersurfaceSpec("tube", 1, [TruncSeries.const(Y, ONE)])
    Z = input_varset("rigid", 1)
    with pytest.raises(HypersurfaceError, match="not real-valued"):
        HypersurfaceSpec("rigid", 1, [TruncSeries.monomial(Z, {"z1": 2, "zb1": 1})])


def test_levi_signs_checked():
    with pytest.raises(HypersurfaceError, match="Levi signs"):
        HypersurfaceSpec("tube", 2, make_spec("tube", "y1^2 + y2^2", 6, m=2).phi, levi_signs=(1, -1))
    HypersurfaceSpec("tube", 2, make_spec("tube", "y1^2 - y2^2", 6, m=2).phi, levi_signs=(1, -1))


def test_normal_form_check():
    assert make_spec("rigid", "z*zb + z^5*zb^5*(z + zb)", 12).has_normal_chi()
    assert not make_spec("rigid", "z*zb + z*zb^3 + z^3*zb", 12).has_normal_chi()


def _reality_residual(spec, eq):
    """theta_bar(u + iy, u - iy, 0) - 2i phi, as a series in (u, y)."""
    m = spec.m
    U = VarSet(tuple(f"u{k}" for k in range(1, m + 1)) + tuple(f"y{k}" for k in range(1, m + 1)))
    zs = {k: TruncSeries.var(U, f"u{k}") + TruncSeries.var(U, f"y{k}").scale(I) for k in range(1, m + 1)}
    zbs = {k: TruncSeries.var(U, f"u{k}") - TruncSeries.var(U, f"y{k}").scale(I) for k in range(1, m + 1)}
    subst = {f"z{k}": zs[k] for k in zs} | {f"zeta{k}": zbs[k] for k in zbs}
    subst["xi1"] = TruncSeries.zero(U)
    lhs = eq.theta_bar[0].compose(subst, target=U)
    phi = spec.phi[0]
    if spec.kind == "tube":
        real = phi.compose({f"y{k}": TruncSeries.var(U, f"y{k}") for k in range(1, m + 1)}, target=U)
    elif spec.kind == "rigid":
        real = phi.compose({f"z{k}": zs[k] for k in zs} | {f"zb{k}": zbs[k] for k in zbs}, target=U)
    else:
        real = phi.compose({"r": zs[1] * zbs[1]}, target=U)
    return lhs - real.scale(g(0, 2))


@pytest.mark.parametrize(
    "kind, phi, m",
    [
        ("tube", "y^2 + y^6 + y^9", 1),
        ("tube", "y1^2 - y2^2 + y1^3*y2", 2),
        ("rigid", "z*zb + z^5*zb^5*(z + zb)", 1),
        ("rigid", "z1*zb1 + z2*zb2 + z1^2*zb1^2*(z2 + zb2)", 2),
        ("hermitian-rigid", "sin(r)", 1),
    ],
)
def test_reality_compatibility(kind, phi, m):
    spec = make_spec(kind, phi, 10, m)
    eq = complexify(spec)
    res = _reality_residual(spec, eq)
    assert res.terms == {} or min(sum(e) for e in res.terms) > 10


def test_conjugate_equation_inverts():
    spec, eq, _ = make_system("rigid", "z*zb + z^5*zb^5*(z + zb)", 12)
    (theta,) = eq.theta()
    C = eq.varset
    subst = {"zeta1": TruncSeries.var(C, "zeta1"), "z1": TruncSeries.var(C, "z1"), "w1": eq.theta_bar[0]}
    back = theta.compose(subst, target=C)
    assert back.equal_mod(TruncSeries.var(C, "xi1"), 12)


def test_pde_sextic_tube(sextic_tube):
    _, _, sys = sextic_tube
    F = sys.f(1, 1)
    assert sys.trusted_order == 12
    assert F.coeff((0, 0, 0)) == -I
    assert F.coeff((0, 0, 4)) == g(0, Fraction(-15, 16))
    for p in (1, 2, 3, 5, 6):
        assert F.coeff((0, 0, p)) == ZERO
    assert all(e[:2] == (0, 0) for e in F.terms)


def test_sextic_tube_inverse(sextic_tube):
    _, _, sys = sextic_tube
    zeta = sys.solution["zeta1"]
    yy = (TruncSeries.var(zeta.vars, "z1") - zeta).scale(g(0, Fraction(-1, 2)))
    assert yy.coeff((0, 0, 1)) == g(Fraction(1, 2))
    assert yy.coeff((0, 0, 5)) == g(Fraction(-3, 32))
    assert [e for e in yy.terms if sum(e) < 8] == [(0, 0, 1), (0, 0, 5)]


def test_pde_rigid_sum():
    _, _, sys = make_system("rigid", "z*zb + z^5*zb^5 + z^7*zb^7", 20)
    F = sys.f(1, 1)
    assert F.coeff((3, 0, 5)) == g(Fraction(5, 4))
    assert F.coeff((5, 0, 7)) == g(Fraction(-21, 32))


def test_pde_rigid_trace():
    _, _, sys = make_system("rigid", "z*zb + z^5*zb^5*(z + zb)", 20)
    F = sys.f(1, 1)
    assert F.coeff((4, 0, 5)) == g(Fraction(15, 8))
    assert F.coeff((3, 0, 6)) == g(0, Fraction(-5, 8))
    assert F.coeff((9, 0, 9)) == g(Fraction(-225, 64))


@pytest.mark.parametrize("signs", [(1, 1), (1, -1), (-1, -1)])
def test_quadric_tube_system(signs):
    phi = " + ".join(f"{'-' if s < 0 else ''}y{k}^2" for k, s in enumerate(signs, 1))
    _, _, sys = make_system("tube", phi.replace("+ -", "- "), 10, m=2)
    for (k1, k2), F in sys.F.items():
        if k1 == k2:
            assert F.truncate(F.order).terms == {(0, 0, 0, 0, 0): g(0, -signs[k1 - 1])}
        else:
            assert F.is_zero()


def test_symmetric_rhs():
    _, _, sys = make_system("tube", "y1^2 + y2^2 + y1^3*y2 + y2^5", 10, m=2)
    assert sys.f(1, 2) is sys.f(2, 1)
    assert sys.pairs() == [(1, 1), (1, 2), (2, 2)]


def test_levi_degenerate():
    eq = complexify(make_spec("tube", "y^4", 10))
    with pytest.raises(LeviDegenerateError, match="Levi degenerate at origin; system not derivable at order 2"):
        derive_pde_system(eq)


def test_linear_terms_rejected():
    eq = complexify(make_spec("tube", "y + y^2", 8))
    with pytest.raises(HypersurfaceError, match="linear terms"):
        derive_pde_system(eq)
    spec = make_spec("tube", "y + y^2", 8).without_linear_part()
    derive_pde_system(complexify(spec))


def test_segre_residual_rigid_trace():
    _, eq, sys = make_system("rigid", "z*zb + z^5*zb^5*(z + zb)", 14)
    for zeta0, xi0 in [((g(1),), g(0, 1)), ((g(-2, 1),), g(Fraction(1, 3)))]:
        for r in segre_residual(eq, sys, list(zeta0), xi0).values():
            assert r.order >= 12 and r.is_zero()
