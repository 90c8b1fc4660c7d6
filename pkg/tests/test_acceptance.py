"""Acceptance criteria 1-8, exact equality throughout.

Run under pytest (one test per criterion plus a summary block) or directly
with ``python tests/test_acceptance.py`` for the pass/fail lines alone.
"""

import os
import sys
import time
from fractions import Fraction

import pytest

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from crsym.exactnum import I, ONE, ZERO, GaussRat  # noqa: E402
from crsym.jobs import parse_job, run  # noqa: E402
from crsym.lie import (  # noqa: E402
    VectorField,
    VectorFieldAnsatz,
    classify,
    compute_symmetries,
    determining_for,
    same_span,
    translations,
)
from crsym.obstruct import minimality, rigid_obstruction_report, tube_obstruction_report  # noqa: E402
from crsym.segre import complexify, derive_pde_system  # noqa: E402
from crsym.series import TruncSeries  # noqa: E402

from conftest import make_spec, make_system  # noqa: E402

RESULTS = {}


def g(a, b=0):
    return GaussRat(Fraction(a), Fraction(b))


def _field(Q, R):
    B = VectorFieldAnsatz(1, 1).base
    return VectorField(1, [TruncSeries(B, Q)], TruncSeries(B, R))


D_W = _field({}, {(0, 0): ONE})
IZ_DZ = _field({(1, 0): I}, {})

SEXTIC_TUBE = "y^2 + y^6 + y^9"
RIGID_SUM = "z*zb + z^5*zb^5 + z^7*zb^7"
RIGID_SUM_FULL = "z*zb + z^5*zb^5 + z^7*zb^7 + z^8*zb^8*(z + zb)"
RIGID_TRACE = "z*zb + z^5*zb^5*(z + zb)"


def criterion_1():
    job = parse_job(f"kind = tube\nphi = {SEXTIC_TUBE}\norder = 14\n")
    text = run(job, "derive")["pde"]["F"]["1,1"]
    _, _, sys_ = make_system("tube", SEXTIC_TUBE, 14)
    F = sys_.f(1, 1)
    coeffs = [F.coeff((0, 0, p)) for p in range(7)]
    want = [-I, ZERO, ZERO, ZERO, g(0, Fraction(-15, 16)), ZERO, ZERO]
    zeta = sys_.solution["zeta1"]
    y = (TruncSeries.var(zeta.vars, "z1") - zeta).scale(g(0, Fraction(-1, 2)))
    inverse_ok = y.coeff((0, 0, 1)) == g(Fraction(1, 2)) and y.coeff((0, 0, 5)) == g(Fraction(-3, 32))
    only_w = all(e[:2] == (0, 0) for e in F.terms)
    ok = coeffs == want and only_w and inverse_ok and text.startswith("-i - 15/16*i*W1^4 - ")
    return ok, f"F = {text[:40]}...; inverse W^5 coefficient {y.coeff((0, 0, 5))}"


def criterion_2():
    _, _, s74 = make_system("rigid", RIGID_SUM, 20)
    _, _, s75 = make_system("rigid", RIGID_TRACE, 20)
    F4, F5 = s74.f(1, 1), s75.f(1, 1)
    got = [F4.coeff((3, 0, 5)), F4.coeff((5, 0, 7)), F5.coeff((4, 0, 5)), F5.coeff((3, 0, 6)), F5.coeff((9, 0, 9))]
    want = [g(Fraction(5, 4)), g(Fraction(-21, 32)), g(Fraction(15, 8)), g(0, Fraction(-5, 8)), g(Fraction(-225, 64))]
    return got == want, "coefficients " + ", ".join(map(str, got))


def criterion_3():
    _, _, sys_ = make_system("tube", SEXTIC_TUBE, 14)
    A = VectorFieldAnsatz(1, 4)
    ds = determining_for(sys_, A)
    rr = ds.reducer(len(A))
    missing = []
    for mon in ({}, {"z1": 1}, {"w": 1}):
        R = lambda **k: A.derivative_form("R", k, mon)  # noqa: E731
        Q = lambda **k: A.derivative_form("Q1", k, mon)  # noqa: E731
        a, b = g(0, Fraction(15, 16)), g(0, Fraction(15, 4))
        forms = [
            R(z1=2) - (R(w=1) - Q(z1=1).scale(g(2))).scale(I),
            R(z1=1, w=1).scale(g(2)) - Q(z1=2),
            R(w=2) - Q(z1=1, w=1).scale(g(2)),
            -Q(w=2) + R(z1=1).scale(b),
            -(R(w=1) - Q(z1=1).scale(g(2))).scale(a) + (R(w=1) - Q(z1=1)).scale(b),
            -(Q(w=1).scale(g(-3))).scale(a) - Q(w=1).scale(b),
        ]
        missing += [f"relation {k} at {mon}" for k, f in enumerate(forms) if not rr.contains(f.c)]
    eqs = {e: lf for (pair, e), lf in ds.equations}
    fifth = eqs[(0, 0, 5)] == A.derivative_form("Q1", {"w": 1}, {}).scale(g(0, Fraction(-15, 16)))
    return not missing and fifth, f"not implied: {missing or 'none'}; W^5 equation = {eqs[(0, 0, 5)].render(A.names())}"


def criterion_4():
    cases = []
    for kind, phi, order, D, dim, basis in (
        ("tube", SEXTIC_TUBE, 14, 3, 2, translations(1)),
        ("hermitian-rigid", "r + r^5 + r^7", 10, 3, 2, [D_W, IZ_DZ]),
        ("rigid", RIGID_SUM_FULL, 22, 3, 1, [D_W]),
        ("rigid", RIGID_TRACE, 20, 3, 1, [D_W]),
        ("tube", "y^2", 12, 2, 8, None),
    ):
        _, _, sys_ = make_system(kind, phi, order)
        alg = compute_symmetries(sys_, D)
        ok = alg.dim == dim and (basis is None or same_span(alg.basis, basis, 1))
        cases.append((ok, alg.dim))
    return all(ok for ok, _ in cases), "dims " + ", ".join(str(d) for _, d in cases) + " (want 2, 2, 1, 1, 8)"


def criterion_5():
    out = []
    for kind, phi, order, D in (
        ("tube", SEXTIC_TUBE, 14, 3),
        ("tube", "y^2", 12, 2),
        ("rigid", RIGID_SUM_FULL, 22, 3),
        ("rigid", RIGID_TRACE, 20, 3),
    ):
        spec, _, sys_ = make_system(kind, phi, order)
        out.append(classify(compute_symmetries(sys_, D), spec))
    flags = [out[0]["strong_tube"], not out[1]["strong_tube"], out[2]["strongly_rigid"], out[3]["strongly_rigid"]]
    return all(flags), f"strong_tube(sextic)={out[0]['strong_tube']}, strong_tube(y^2)={out[1]['strong_tube']}, " \
        f"strongly_rigid={out[2]['strongly_rigid']},{out[3]['strongly_rigid']}"


def criterion_6():
    verdicts = {}
    for phi in ("sin(y^2)", "tan(y^2)", "exp(expm1(y)) - 1", "sinh(y^2)", "tanh(y^2)", "exp(1*expm1(y)) - 1"):
        rep = tube_obstruction_report(make_spec("tube", phi, 50), 4, 24)
        verdicts[phi] = rep["pairs"][0]["verdict"]
    quad = tube_obstruction_report(make_spec("tube", "y^2", 50), 4, 24)["pairs"][0]
    heis = rigid_obstruction_report(make_spec("hermitian-rigid", "r", 50), 4, 24)["pairs"][0]
    no_rel = all(v == "NO-RELATION" for v in verdicts.values())
    rel = all(p["verdict"] == "RELATION" and p["verified_order"] >= 48 for p in (quad, heis))
    return no_rel and rel, f"{sum(v == 'NO-RELATION' for v in verdicts.values())}/6 NO-RELATION; " \
        f"certificates {quad['certificate']!r}, {heis['certificate']!r} verified to order {quad['verified_order']}"


def criterion_7():
    from test_properties import CHECKS, CORPUS, derive

    failures = []
    for case in CORPUS:
        args = (case, *derive(case))
        for check in CHECKS:
            try:
                check(*args)
            except AssertionError:
                failures.append((check.__name__, case["phi"]))
    return not failures, f"{len(CORPUS)} specs x {len(CHECKS)} properties; failures: {failures or 'none'}"


def criterion_8():
    heis = minimality(complexify(make_spec("tube", "y^2", 10)), 6, seed=0, order=8)
    flat = minimality(complexify(make_spec("tube", "0", 10)), 6, seed=0, order=8)
    literal = heis["minimal"] is True and heis["rank_at_0_mu0"] == 3 and heis["mu0"] == 2 * heis["nu0"] + 1
    stalled = flat["minimal"] != True and max(r["generic_rank"] for r in flat["ranks"]) < 3  # noqa: E712
    detail = (
        f"Heisenberg minimal={heis['minimal']} nu0={heis['nu0']} mu0={heis['mu0']} "
        f"rank_at_0(Gamma_mu0)={heis['rank_at_0_mu0']} (want 3) "
        f"rank_over_origin(Gamma_mu0)={heis['rank_over_origin_mu0']}; "
        f"Levi-flat minimal={flat['minimal']} max generic rank={max(r['generic_rank'] for r in flat['ranks'])}"
    )
    return literal and stalled, detail


CRITERIA = {k: globals()[f"criterion_{k}"] for k in range(1, 9)}


def evaluate(k):
    t0 = time.perf_counter()
    ok, detail = CRITERIA[k]()
    RESULTS[k] = (ok, detail, time.perf_counter() - t0)
    return ok, detail


def summary_lines():
    return [
        f"criterion {k}: {'PASS' if ok else 'FAIL'} ({secs:.1f}s) {detail}"
        for k, (ok, detail, secs) in sorted(RESULTS.items())
    ]


@pytest.mark.parametrize("k", range(1, 9))
def test_criterion(k):
    ok, detail = evaluate(k)
    assert ok, detail


if __name__ == "__main__":
    for k in CRITERIA:
        evaluate(k)
    print("\n".join(summary_lines()))
    sys.exit(0 if all(ok for ok, _, _ in RESULTS.values()) else 1)
